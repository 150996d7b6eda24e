#pragma once

/// \file cartesian.hpp
///
/// Exact Cartesian derivatives of 1/r:
///
///   d_x^{p_x} d_y^{p_y} d_z^{p_z} (1/r) = N_p(x, y, z) / r^{2|p|+1},
///
/// where N_p is a homogeneous harmonic polynomial of degree |p| with integer
/// coefficients. N_p is generated by N_{p+e_i} = r^2 d_i N_p - (2|p|+1) x_i N_p
/// in 128-bit integer arithmetic and cached process-wide.

#include "bipolar/errors.hpp"
#include "bipolar/polynomial.hpp"
#include "bipolar/vec.hpp"

#include <map>
#include <mutex>
#include <vector>

namespace bipolar {

using ExactInt = __int128;

class DerivativeNumerator {
public:
  using Terms = std::map<Exponents, ExactInt>;

  const Terms &terms() const noexcept { return terms_; }
  int order() const noexcept { return order_; }

  /// N_p(v) in extended precision.
  long double operator()(const Vec3 &v) const {
    long double px[64], py[64], pz[64];
    px[0] = py[0] = pz[0] = 1.0L;
    for (int i = 1; i <= order_; ++i) {
      px[i] = px[i - 1] * v.x();
      py[i] = py[i - 1] * v.y();
      pz[i] = pz[i - 1] * v.z();
    }
    long double s = 0.0L;
    for (const auto &[e, c] : terms_)
      s += static_cast<long double>(c) * px[e[0]] * py[e[1]] * pz[e[2]];
    return s;
  }

  RealPoly to_real_poly() const {
    RealPoly out;
    for (const auto &[e, c] : terms_)
      out.add(e, static_cast<double>(c));
    return out;
  }

  static DerivativeNumerator unit() {
    DerivativeNumerator n;
    n.terms_[{0, 0, 0}] = 1;
    return n;
  }

  /// Applies one more d_axis.
  DerivativeNumerator differentiated(int axis) const {
    DerivativeNumerator out;
    out.order_ = order_ + 1;
    const ExactInt k = 2 * order_ + 1;
    for (const auto &[e, c] : terms_) {
      // r^2 d_axis(x^e): (x^2 + y^2 + z^2) * e_axis * x^{e - 1_axis}
      if (e[axis] > 0) {
        Exponents d = e;
        d[static_cast<std::size_t>(axis)] -= 1;
        const ExactInt dc = checked_mul(c, e[axis]);
        for (int j = 0; j < 3; ++j) {
          Exponents t = d;
          t[static_cast<std::size_t>(j)] += 2;
          out.accumulate(t, dc);
        }
      }
      Exponents t = e;
      t[static_cast<std::size_t>(axis)] += 1;
      out.accumulate(t, -checked_mul(c, k));
    }
    return out;
  }

private:
  static ExactInt checked_mul(ExactInt a, ExactInt b) {
    ExactInt r;
    if (__builtin_mul_overflow(a, b, &r))
      throw NumericError("derivative of 1/r: coefficient overflow");
    return r;
  }

  void accumulate(const Exponents &e, ExactInt c) {
    ExactInt &slot = terms_[e];
    if (__builtin_add_overflow(slot, c, &slot))
      throw NumericError("derivative of 1/r: coefficient overflow");
    if (slot == 0)
      terms_.erase(e);
  }

  Terms terms_;
  int order_ = 0;
};

/// Largest derivative order with guaranteed 128-bit exact coefficients.
inline constexpr int max_inverse_r_order = 24;

/// Cached numerator polynomial N_p. Thread-safe; returned references stay
/// valid for the lifetime of the process.
inline const DerivativeNumerator &inverse_r_numerator(const Exponents &p) {
  if (p[0] < 0 || p[1] < 0 || p[2] < 0)
    throw DomainError("negative derivative exponent");
  if (degree(p) > max_inverse_r_order)
    throw DomainError("derivative order exceeds " + std::to_string(max_inverse_r_order));
  static std::mutex mutex;
  static std::map<Exponents, DerivativeNumerator> cache{{{0, 0, 0}, DerivativeNumerator::unit()}};
  std::lock_guard lock(mutex);
  auto it = cache.find(p);
  if (it != cache.end())
    return it->second;
  // Walk down to the nearest cached ancestor, then build upwards.
  std::vector<int> axes;
  Exponents q = p;
  while (cache.find(q) == cache.end()) {
    const int axis = q[2] > 0 ? 2 : (q[1] > 0 ? 1 : 0);
    q[static_cast<std::size_t>(axis)] -= 1;
    axes.push_back(axis);
  }
  const DerivativeNumerator *cur = &cache.at(q);
  for (auto a = axes.rbegin(); a != axes.rend(); ++a) {
    q[static_cast<std::size_t>(*a)] += 1;
    cur = &cache.emplace(q, cur->differentiated(*a)).first->second;
  }
  return *cur;
}

/// d_x^{p_x} d_y^{p_y} d_z^{p_z} (1/r) at r != 0; exact coefficients, no
/// finite differencing.
inline double cartesian_deriv_inverse_r(const Exponents &p, const Vec3 &r) {
  const double rn = r.norm();
  if (!(rn > 0.0))
    throw SingularityError("derivative of 1/r evaluated at r = 0");
  const auto &num = inverse_r_numerator(p);
  // Scale to the unit sphere so the monomial sums stay O(1).
  const Vec3 u = r / rn;
  const long double val = num(u) / std::pow(static_cast<long double>(rn), degree(p) + 1);
  return static_cast<double>(val);
}

/// r^{2|p|+1} d^p (1/r) = N_p(r); regular everywhere, including r = 0.
inline double scaled_deriv_inverse_r(const Exponents &p, const Vec3 &r) {
  return static_cast<double>(inverse_r_numerator(p)(r));
}

/// All derivatives d^s(1/R) with |s| <= max_order at a fixed R, stored
/// densely with a linear index so that index(p + q) = index(p) + index(q).
class InverseRDerivativeTable {
public:
  InverseRDerivativeTable(int max_order, const Vec3 &R)
      : max_order_(max_order), base_(max_order + 1),
        values_(static_cast<std::size_t>(base_ * base_ * base_), 0.0) {
    if (!(R.norm() > 0.0))
      throw SingularityError("derivative of 1/r evaluated at r = 0");
    for (int n = 0; n <= max_order; ++n)
      for (const auto &p : exponent_triples(n))
        values_[static_cast<std::size_t>(index(p))] = cartesian_deriv_inverse_r(p, R);
  }

  int index(const Exponents &p) const noexcept {
    return (p[0] * base_ + p[1]) * base_ + p[2];
  }
  double at_index(int i) const { return values_[static_cast<std::size_t>(i)]; }
  double operator()(const Exponents &p) const { return at_index(index(p)); }
  int max_order() const noexcept { return max_order_; }

private:
  int max_order_;
  int base_;
  std::vector<double> values_;
};

} // namespace bipolar
