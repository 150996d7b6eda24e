#pragma once

/// \file polynomial.hpp
///
/// Sparse polynomials in (x, y, z). Used to expand solid harmonics into
/// monomials, to compose Y_lm(-grad) operators, and to reduce moments of
/// offset spherical densities to radial moments.

#include "bipolar/specfun.hpp"
#include "bipolar/vec.hpp"

#include <map>
#include <type_traits>

namespace bipolar {

template <typename T> class Poly3 {
public:
  using Terms = std::map<Exponents, T>;

  Poly3() = default;
  explicit Poly3(T constant) {
    if (constant != T{})
      terms_[{0, 0, 0}] = constant;
  }

  static Poly3 monomial(const Exponents &p, T c = T{1}) {
    Poly3 out;
    out.terms_[p] = c;
    return out;
  }

  const Terms &terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  T coefficient(const Exponents &p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? T{} : it->second;
  }

  void add(const Exponents &p, T c) {
    if (c == T{})
      return;
    auto [it, inserted] = terms_.try_emplace(p, c);
    if (!inserted) {
      it->second += c;
      // Keep explicit zeros out so degree queries stay meaningful.
      if (it->second == T{})
        terms_.erase(it);
    }
  }

  Poly3 &operator+=(const Poly3 &o) {
    for (const auto &[p, c] : o.terms_)
      add(p, c);
    return *this;
  }

  Poly3 &operator*=(T s) {
    for (auto &[p, c] : terms_)
      c *= s;
    return *this;
  }

  friend Poly3 operator*(const Poly3 &a, const Poly3 &b) {
    Poly3 out;
    for (const auto &[pa, ca] : a.terms_)
      for (const auto &[pb, cb] : b.terms_)
        out.add(pa + pb, ca * cb);
    return out;
  }

  friend Poly3 operator+(Poly3 a, const Poly3 &b) { return a += b; }

  Poly3 conj() const {
    Poly3 out;
    for (const auto &[p, c] : terms_) {
      if constexpr (std::is_same_v<T, complex>)
        out.terms_[p] = std::conj(c);
      else
        out.terms_[p] = c;
    }
    return out;
  }

  /// Value at v; monomial powers are built incrementally.
  T operator()(const Vec3 &v) const {
    T sum{};
    for (const auto &[p, c] : terms_)
      sum += c * (ipow(v.x(), p[0]) * ipow(v.y(), p[1]) * ipow(v.z(), p[2]));
    return sum;
  }

  /// P(s + d) as a polynomial in s.
  Poly3 shifted(const Vec3 &d) const {
    Poly3 out;
    for (const auto &[p, c] : terms_) {
      for (int i = 0; i <= p[0]; ++i) {
        const double cx = binomial(p[0], i) * ipow(d.x(), p[0] - i);
        if (cx == 0.0)
          continue;
        for (int j = 0; j <= p[1]; ++j) {
          const double cy = binomial(p[1], j) * ipow(d.y(), p[1] - j);
          if (cy == 0.0)
            continue;
          for (int k = 0; k <= p[2]; ++k) {
            const double cz = binomial(p[2], k) * ipow(d.z(), p[2] - k);
            if (cz == 0.0)
              continue;
            out.add({i, j, k}, c * (cx * cy * cz));
          }
        }
      }
    }
    return out;
  }

  /// Average over the unit sphere, split by radial power: the returned
  /// vector holds c_t such that <P(s omega)>_omega = sum_t c_t s^{2t}.
  std::vector<T> sphere_average_by_power() const {
    std::vector<T> out;
    for (const auto &[p, c] : terms_) {
      if (p[0] % 2 || p[1] % 2 || p[2] % 2)
        continue;
      const int t = degree(p) / 2;
      if (static_cast<int>(out.size()) <= t)
        out.resize(static_cast<std::size_t>(t + 1), T{});
      const double w = sf::double_factorial_real(p[0] - 1) *
                       sf::double_factorial_real(p[1] - 1) *
                       sf::double_factorial_real(p[2] - 1) /
                       sf::double_factorial_real(2 * t + 1);
      out[static_cast<std::size_t>(t)] += c * w;
    }
    return out;
  }

  static double binomial(int n, int k) {
    return sf::factorial(n) / (sf::factorial(k) * sf::factorial(n - k));
  }

private:
  Terms terms_;
};

using ComplexPoly = Poly3<complex>;
using RealPoly = Poly3<double>;

/// (x^2 + y^2 + z^2)^k.
inline RealPoly r_squared_power(int k) {
  RealPoly out(1.0);
  const RealPoly r2 = RealPoly::monomial({2, 0, 0}) + RealPoly::monomial({0, 2, 0}) +
                      RealPoly::monomial({0, 0, 2});
  for (int i = 0; i < k; ++i)
    out = out * r2;
  return out;
}

inline ComplexPoly to_complex(const RealPoly &p) {
  ComplexPoly out;
  for (const auto &[e, c] : p.terms())
    out.add(e, complex(c, 0.0));
  return out;
}

/// Monomial expansion of the regular solid harmonic r^l Y_lm(r_hat).
///
/// r^l Y_lm = N_lm (-1)^m (x + i y)^m r^{l-m} P_l^{(m)}(z/r),
/// with P_l^{(m)} the m-th derivative of the Legendre polynomial; the
/// negative-m harmonics follow from Y_{l,-m} = (-1)^m conj(Y_lm).
inline ComplexPoly solid_harmonic_polynomial(int l, int m) {
  sf::require_valid({l, m});
  const int am = std::abs(m);
  const double norm = std::sqrt((2.0 * l + 1.0) / four_pi * sf::factorial(l - am) /
                                sf::factorial(l + am));

  ComplexPoly xy(1.0);
  const ComplexPoly x_iy = ComplexPoly::monomial({1, 0, 0}, complex(1, 0)) +
                           ComplexPoly::monomial({0, 1, 0}, complex(0, 1));
  for (int i = 0; i < am; ++i)
    xy = xy * x_iy;

  ComplexPoly legendre;
  for (int k = 0; 2 * k <= l - am; ++k) {
    const int zp = l - 2 * k - am;
    const double c = sign_pow(k) * RealPoly::binomial(l, k) *
                     RealPoly::binomial(2 * l - 2 * k, l) * sf::factorial(l - 2 * k) /
                     sf::factorial(zp) / ipow(2.0, l);
    ComplexPoly term = to_complex(r_squared_power(k) * RealPoly::monomial({0, 0, zp}));
    term *= complex(c, 0.0);
    legendre += term;
  }

  ComplexPoly out = xy * legendre;
  out *= complex(norm * sign_pow(am), 0.0);
  if (m < 0) {
    out = out.conj();
    out *= complex(sign_pow(am), 0.0);
  }
  return out;
}

} // namespace bipolar
