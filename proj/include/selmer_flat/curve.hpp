#pragma once

#include <array>
#include <string>

#include "selmer_flat/bigint.hpp"

namespace selmer_flat {

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integer coefficients.
class WeierstrassCurve {
 public:
  WeierstrassCurve(Int a1, Int a2, Int a3, Int a4, Int a6) : a_{std::move(a1), std::move(a2), std::move(a3), std::move(a4), std::move(a6)} {
    compute();
    if (disc_ == 0) throw StructuralError("singular Weierstrass equation (discriminant 0)");
  }

  static WeierstrassCurve from_ainvs(const std::array<Int, 5>& a) { return {a[0], a[1], a[2], a[3], a[4]}; }

  const Int& a1() const { return a_[0]; }
  const Int& a2() const { return a_[1]; }
  const Int& a3() const { return a_[2]; }
  const Int& a4() const { return a_[3]; }
  const Int& a6() const { return a_[4]; }
  const std::array<Int, 5>& ainvs() const { return a_; }

  const Int& b2() const { return b2_; }
  const Int& b4() const { return b4_; }
  const Int& b6() const { return b6_; }
  const Int& b8() const { return b8_; }
  const Int& c4() const { return c4_; }
  const Int& c6() const { return c6_; }
  const Int& discriminant() const { return disc_; }
  Rational j_invariant() const { return Rational(c4_ * c4_ * c4_) / Rational(disc_); }

  /// x = x' + r, y = y' + s x' + t.
  WeierstrassCurve rst_transform(const Int& r, const Int& s, const Int& t) const {
    const Int &a1 = a_[0], &a2 = a_[1], &a3 = a_[2], &a4 = a_[3], &a6 = a_[4];
    return {a1 + 2 * s,
            a2 - s * a1 + 3 * r - s * s,
            a3 + r * a1 + 2 * t,
            a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
            a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1};
  }

  /// a_i -> a_i / u^i; every division must be exact.
  WeierstrassCurve divide_by(const Int& u) const {
    std::array<Int, 5> out;
    const unsigned weight[5] = {1, 2, 3, 4, 6};
    for (int i = 0; i < 5; ++i) {
      Int d = ipow(u, weight[i]);
      if (a_[i] % d != 0) throw InternalInconsistency("scaling does not give an integral model");
      out[i] = a_[i] / d;
    }
    return from_ainvs(out);
  }

  /// a_i -> u^i a_i.
  WeierstrassCurve scale_by(const Int& u) const {
    const unsigned weight[5] = {1, 2, 3, 4, 6};
    std::array<Int, 5> out;
    for (int i = 0; i < 5; ++i) out[i] = a_[i] * ipow(u, weight[i]);
    return from_ainvs(out);
  }

  bool can_divide_by(const Int& u) const {
    const unsigned weight[5] = {1, 2, 3, 4, 6};
    for (int i = 0; i < 5; ++i)
      if (a_[i] % ipow(u, weight[i]) != 0) return false;
    return true;
  }

  std::string str() const {
    return "[" + a_[0].str() + "," + a_[1].str() + "," + a_[2].str() + "," + a_[3].str() + "," + a_[4].str() + "]";
  }

  friend bool operator==(const WeierstrassCurve& x, const WeierstrassCurve& y) { return x.a_ == y.a_; }

 private:
  void compute() {
    const Int &a1 = a_[0], &a2 = a_[1], &a3 = a_[2], &a4 = a_[3], &a6 = a_[4];
    b2_ = a1 * a1 + 4 * a2;
    b4_ = 2 * a4 + a1 * a3;
    b6_ = a3 * a3 + 4 * a6;
    b8_ = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    c4_ = b2_ * b2_ - 24 * b4_;
    c6_ = -b2_ * b2_ * b2_ + 36 * b2_ * b4_ - 216 * b6_;
    disc_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
  }

  std::array<Int, 5> a_;
  Int b2_, b4_, b6_, b8_, c4_, c6_, disc_;
};

}  // namespace selmer_flat
