// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "selmer_flat/frobmod_verify.hpp"
#include "selmer_flat/json_io.hpp"
#include "selmer_flat/nf.hpp"
#include "selmer_flat/predictor.hpp"
#include "selmer_flat/quadform.hpp"
#include "selmer_flat/tate.hpp"
#include "selmer_flat/theorem.hpp"

using namespace selmer_flat;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (cond) return;
    if (ok) detail = what;
    ok = false;
  }
};

theorem::CurveData fixture(const std::string& label) {
  auto j = json_io::read_file(std::string(SELMER_FLAT_TEST_DATA) + "/fixtures/" + label + ".json");
  return theorem::CurveData::from_curve(json_io::curve_from_json(j), label);
}

// Class number of discriminant D < 0 by counting reduced primitive forms
// (a, b, c) with |b| <= a <= c, b >= 0 when |b| = a or a = c.
std::int64_t class_number_by_forms(std::int64_t D) {
  std::int64_t h = 0;
  for (std::int64_t a = 1; 3 * a * a <= -D; ++a)
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      std::int64_t num = b * b - D;
      if (num % (4 * a) != 0) continue;
      std::int64_t c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      if (gcd64(gcd64(a, b < 0 ? -b : b), c) != 1) continue;
      ++h;
    }
  return h;
}

Outcome tamagawa_reproduction() {
  Outcome o;
  const std::map<std::string, std::map<int, std::int64_t>> pinned{
      {"2534e1", {{2, 44}, {7, 1}, {181, 2}}},
      {"2534g1", {{2, 13}, {7, 2}, {181, 1}}},
      {"11a1", {{11, 5}}},
  };
  for (const auto& [label, want] : pinned) {
    auto c = fixture(label);
    std::map<int, std::int64_t> got;
    for (const auto& ld : c.bad) got[static_cast<int>(to_int64(ld.p))] = ld.tamagawa;
    o.expect(got == want, label + ": Tamagawa factors differ");
  }
  auto e = fixture("11a1").at(11);
  o.expect(e.kodaira.str() == "I5" && e.kind == tate::ReductionKind::split_multiplicative, "11a1 at 11 is not split I5");
  return o;
}

Outcome companion_pairs() {
  Outcome o;
  auto r1 = theorem::check_companion(fixture("2534e1"), fixture("2534g1"), 3);
  auto r2 = theorem::check_companion(fixture("4592d1"), fixture("4592g1"), 5);
  o.expect(r1.applies, "2534e1/2534g1 at 3 does not apply");
  o.expect(r2.applies, "4592d1/4592g1 at 5 does not apply");
  return o;
}

Outcome engine_11a1() {
  Outcome o;
  auto q = nf::compute_invariants(nf::NumberField::rationals(), {Int(11)}, {5});
  auto pq = predictor::predict_11a1(q);
  o.expect(pq.h1_dim == 0 && pq.parity == 1, "Q: h1 or parity wrong");
  o.expect(pq.bounds.torsion_clamped == (predictor::Bounds{1, 1}), "Q: bounds are not (1,1)");
  o.expect(pq.case_label == "a", "Q: case is not a");

  int case_b = 0, case_c = 0;
  for (std::int64_t d = -1; d > -2000 && (case_b < 20 || case_c < 10); --d) {
    if (!is_squarefree(Int(d))) continue;
    auto k = nf::compute_invariants(nf::NumberField::quadratic(d), {Int(11)}, {5});
    if (k.h(5) != 0) continue;
    std::int64_t D = mod(Int(d), Int(4)) == 1 ? d : 4 * d;
    // independent invariants: reduced forms for h, Kronecker symbol for 11
    std::int64_t h = class_number_by_forms(D);
    o.expect(h % 5 != 0, "d = " + std::to_string(d) + ": 5 | h by form count but h_5 = 0");
    o.expect(static_cast<std::int64_t>(quadform::ClassGroup(Int(D)).order()) == h, "d = " + std::to_string(d) + ": class number mismatch");
    int chi = kronecker(Int(D), Int(11));
    int s = k.split_count(11);
    o.expect(s == (chi == 1 ? 2 : 1), "d = " + std::to_string(d) + ": splitting at 11 disagrees with (D/11)");
    auto label = predictor::classify_case(k).label;
    if (chi != 1 && case_b < 20) {
      o.expect(label == "b", "d = " + std::to_string(d) + ": expected case b, got " + label);
      ++case_b;
    } else if (chi == 1 && case_c < 10) {
      o.expect(label == "c", "d = " + std::to_string(d) + ": expected case c, got " + label);
      ++case_c;
    }
  }
  o.expect(case_b == 20 && case_c == 10, "not enough fields found");
  return o;
}

Outcome frobmod_property_suite() {
  Outcome o;
  auto r = frobmod::verify_random(20240501, 1000, 10'000);
  o.expect(r.instances == 1000, "ran " + std::to_string(r.instances) + " instances");
  o.expect(r.violations == 0, std::to_string(r.violations) + " violations" +
                                  (r.messages.empty() ? std::string() : ": " + r.messages.front()));
  return o;
}

Outcome sigma_consistency() {
  Outcome o;
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<int> small(-1, 1), big(-30, 30);
  int curves = 0, full_seen = 0;
  while (curves < 50) {
    std::array<Int, 5> a{small(rng), small(rng), small(rng), big(rng), big(rng)};
    std::optional<WeierstrassCurve> c;
    try {
      c = WeierstrassCurve::from_ainvs(a);
    } catch (const StructuralError&) {
      continue;
    }
    auto e = theorem::CurveData::from_curve(*c);
    ++curves;
    std::vector<Int> bad = e.bad_primes();
    std::set<Int> primes(bad.begin(), bad.end());
    for (int n = 2; n <= 60; ++n)
      for (const auto& p : prime_divisors(Int(n))) primes.insert(p);
    auto k = nf::compute_invariants(nf::NumberField::rationals(), {primes.begin(), primes.end()}, {});
    auto sigma = theorem::compute_sigma(e, k);
    for (int n = 2; n <= 60; ++n) {
      auto r = theorem::check_theorem(e, std::nullopt, n, k, std::nullopt);
      if (!r.has("full")) continue;
      ++full_seen;
      for (const auto& p : prime_divisors(Int(n)))
        o.expect(!sigma.primes.count(p), "n = " + std::to_string(n) + " is full but " + p.str() + " is in Sigma");
    }
  }
  o.expect(full_seen > 0, "no full degree encountered");
  return o;
}

Outcome cross_module_identity() {
  Outcome o;
  int count = 0;
  for (std::int64_t m = 2; count < 200; ++m)
    for (std::int64_t d : {m, -m + 1}) {
      if (count >= 200 || d == 0 || d == 1 || !is_squarefree(Int(d))) continue;
      auto k = nf::compute_invariants(nf::NumberField::quadratic(d), {Int(11)}, {5});
      int s = k.split_count(11);
      std::string tag = "d = " + std::to_string(d);
      o.expect(predictor::sel5_parity(k) == (predictor::h1_fppf_dim(k) + s) % 2, tag + ": parity identity");
      auto b = predictor::sel5_bounds(k);
      o.expect(b.raw.upper - b.raw.lower == 2 * s, tag + ": width");
      auto defect = predictor::quantitative_defect(predictor::datum_11a1(k), 5, k.r1);
      o.expect(defect.sel_minus_h1_bound == ipow(Int(5), s) && defect.h1_minus_sel_bound == ipow(Int(5), s),
               tag + ": defect product is not 5^#{v | 11}");
      ++count;
    }
  o.expect(count == 200, "only " + std::to_string(count) + " fields");
  return o;
}

struct Criterion {
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"1 tamagawa-reproduction", 1.0, tamagawa_reproduction},
      {"2 companion-pairs", 1.0, companion_pairs},
      {"3 engine-11a1", 10.0, engine_11a1},
      {"4 frobmod-property-suite", 30.0, frobmod_property_suite},
      {"5 sigma-consistency", 60.0, sigma_consistency},
      {"6 cross-module-identity", 10.0, cross_module_identity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > c.limit_seconds) {
      o.ok = false;
      o.detail = "over the time limit";
    }
    std::printf("%s %-26s %7.3fs (limit %.0fs)%s%s\n", o.ok ? "PASS" : "FAIL", c.name, secs, c.limit_seconds,
                o.detail.empty() ? "" : "  ", o.detail.c_str());
    failed += o.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
