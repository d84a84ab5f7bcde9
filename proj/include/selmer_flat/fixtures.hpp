#pragma once

// Global minimal models of the named curves, as listed in Cremona's tables.

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "selmer_flat/curve.hpp"

namespace selmer_flat::fixtures {

struct NamedCurve {
  std::string_view label;
  std::array<std::string_view, 5> ainvs;
};

inline constexpr std::array<NamedCurve, 5> kNamedCurves{{
    {"11a1", {"0", "-1", "1", "-10", "-20"}},
    {"2534e1", {"1", "-1", "1", "-1393324", "-640018129"}},
    {"2534g1", {"1", "-1", "1", "-312", "2235"}},
    {"4592d1", {"0", "-1", "0", "-506856", "-336299152"}},
    {"4592g1", {"0", "0", "0", "-643", "6274"}},
}};

inline std::optional<WeierstrassCurve> named_curve(std::string_view label) {
  for (const auto& c : kNamedCurves) {
    if (c.label != label) continue;
    std::array<Int, 5> a;
    for (std::size_t i = 0; i < 5; ++i) a[i] = Int(std::string(c.ainvs[i]));
    return WeierstrassCurve::from_ainvs(a);
  }
  return std::nullopt;
}

}  // namespace selmer_flat::fixtures
