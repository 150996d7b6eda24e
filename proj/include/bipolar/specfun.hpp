#pragma once

/// \file specfun.hpp
///
/// Special functions: factorials, complex spherical harmonics (orthonormal,
/// Condon-Shortley phase), solid harmonics, stretched Gaunt coefficients,
/// spherical Bessel functions and the lower incomplete gamma function.

#include "bipolar/errors.hpp"
#include "bipolar/vec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace bipolar::sf {

/// Angular momentum pair (l, m) with |m| <= l.
struct AngularIndex {
  int l = 0;
  int m = 0;

  constexpr bool valid() const noexcept { return l >= 0 && m >= -l && m <= l; }
};

inline void require_valid(const AngularIndex &idx) {
  if (!idx.valid())
    throw DomainError("invalid angular index (l=" + std::to_string(idx.l) +
                      ", m=" + std::to_string(idx.m) + ")");
}

/// Composite index into (l_max+1)^2 tables.
constexpr int lm_index(int l, int m) noexcept { return l * l + l + m; }
constexpr int lm_count(int lmax) noexcept { return (lmax + 1) * (lmax + 1); }

/// Largest k for which k!! fits in 64 bits.
inline constexpr int double_factorial_exact_max = 33;

/// k!! with (-1)!! = 0!! = 1, exact in 64-bit integers. Throws DomainError
/// for k < -1 and for k beyond double_factorial_exact_max (use
/// double_factorial_real there).
inline std::uint64_t double_factorial(int k) {
  if (k < -1)
    throw DomainError("double_factorial: k < -1");
  if (k > double_factorial_exact_max)
    throw DomainError("double_factorial: k=" + std::to_string(k) +
                      " exceeds exact 64-bit range");
  std::uint64_t r = 1;
  for (int i = k; i > 1; i -= 2)
    r *= static_cast<std::uint64_t>(i);
  return r;
}

/// k!! in double precision; valid (finite) up to k = 300.
inline double double_factorial_real(int k) {
  if (k < -1)
    throw DomainError("double_factorial: k < -1");
  double r = 1.0;
  for (int i = k; i > 1; i -= 2)
    r *= static_cast<double>(i);
  return r;
}

/// n! from a table; n <= 170.
inline double factorial(int n) {
  static const auto table = [] {
    std::array<double, 171> f{};
    f[0] = 1.0;
    for (int i = 1; i <= 170; ++i)
      f[i] = f[i - 1] * static_cast<double>(i);
    return f;
  }();
  if (n < 0 || n > 170)
    throw DomainError("factorial: n out of range");
  return table[static_cast<std::size_t>(n)];
}

/// Rising factorial (a)_n = a (a+1) ... (a+n-1) = Gamma(a+n)/Gamma(a).
inline double pochhammer(double a, int n) {
  if (n < 0)
    throw DomainError("pochhammer: negative n");
  double r = 1.0;
  for (int i = 0; i < n; ++i)
    r *= a + i;
  return r;
}

namespace detail {

struct Direction {
  double cos_theta;
  double sin_theta;
  complex phase; // e^{i phi}
};

inline Direction direction_of(const Vec3 &v) {
  const double r = v.norm();
  if (!(r > 0.0))
    throw DomainError("spherical harmonic of the zero vector");
  const double rho = std::hypot(v.x(), v.y());
  Direction d;
  d.cos_theta = std::clamp(v.z() / r, -1.0, 1.0);
  d.sin_theta = rho / r;
  d.phase = rho > 0.0 ? complex(v.x() / rho, v.y() / rho) : complex(1.0, 0.0);
  return d;
}

} // namespace detail

/// All Y_lm(direction) for l <= lmax, indexed by lm_index(l, m). The direction
/// need not be normalized; it must be nonzero.
inline std::vector<complex> sph_harm_table(int lmax, const Vec3 &direction) {
  if (lmax < 0)
    throw DomainError("sph_harm_table: negative lmax");
  const auto d = detail::direction_of(direction);
  const double x = d.cos_theta, s = d.sin_theta;

  // Normalized associated Legendre functions, Condon-Shortley phase included.
  std::vector<double> p(static_cast<std::size_t>(lm_count(lmax)), 0.0);
  auto P = [&](int l, int m) -> double & {
    return p[static_cast<std::size_t>(lm_index(l, m))];
  };
  P(0, 0) = 1.0 / std::sqrt(four_pi);
  for (int m = 1; m <= lmax; ++m)
    P(m, m) = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * P(m - 1, m - 1);
  for (int m = 0; m < lmax; ++m)
    P(m + 1, m) = std::sqrt(2.0 * m + 3.0) * x * P(m, m);
  for (int m = 0; m <= lmax; ++m) {
    for (int l = m + 2; l <= lmax; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      const double b = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) /
                                 (4.0 * (l - 1) * (l - 1) - 1.0));
      P(l, m) = a * (x * P(l - 1, m) - b * P(l - 2, m));
    }
  }

  std::vector<complex> y(p.size());
  complex eim(1.0, 0.0);
  for (int m = 0; m <= lmax; ++m) {
    for (int l = m; l <= lmax; ++l) {
      const complex v = P(l, m) * eim;
      y[static_cast<std::size_t>(lm_index(l, m))] = v;
      if (m > 0)
        y[static_cast<std::size_t>(lm_index(l, -m))] = sign_pow(m) * std::conj(v);
    }
    eim *= d.phase;
  }
  return y;
}

/// Orthonormal complex spherical harmonic Y_lm at a nonzero direction.
inline complex sph_harm(const AngularIndex &idx, const Vec3 &direction) {
  require_valid(idx);
  return sph_harm_table(idx.l, direction)[static_cast<std::size_t>(lm_index(idx.l, idx.m))];
}

/// Table of regular solid harmonics r^l Y_lm(r_hat), l <= lmax. Zero vector
/// gives 1/sqrt(4 pi) for l = 0 and 0 otherwise.
inline std::vector<complex> regular_solid_table(int lmax, const Vec3 &r) {
  const double rn = r.norm();
  if (rn == 0.0) {
    std::vector<complex> out(static_cast<std::size_t>(lm_count(lmax)), 0.0);
    out[0] = 1.0 / std::sqrt(four_pi);
    return out;
  }
  auto y = sph_harm_table(lmax, r);
  for (int l = 1; l <= lmax; ++l) {
    const double rl = ipow(rn, l);
    for (int m = -l; m <= l; ++m)
      y[static_cast<std::size_t>(lm_index(l, m))] *= rl;
  }
  return y;
}

inline complex regular_solid_harmonic(const AngularIndex &idx, const Vec3 &r) {
  require_valid(idx);
  return regular_solid_table(idx.l, r)[static_cast<std::size_t>(lm_index(idx.l, idx.m))];
}

/// Table of Y_lm(-grad)(1/R) = (2l-1)!! Y_lm(R_hat) / R^{l+1}, l <= lmax.
inline std::vector<complex> irregular_applied_table(int lmax, const Vec3 &R) {
  const double rn = R.norm();
  if (!(rn > 0.0))
    throw SingularityError("Y_lm(-grad)(1/R) is singular at R = 0");
  auto y = sph_harm_table(lmax, R);
  for (int l = 0; l <= lmax; ++l) {
    const double f = double_factorial_real(2 * l - 1) / ipow(rn, l + 1);
    for (int m = -l; m <= l; ++m)
      y[static_cast<std::size_t>(lm_index(l, m))] *= f;
  }
  return y;
}

inline complex irregular_solid_applied(const AngularIndex &idx, const Vec3 &R) {
  require_valid(idx);
  return irregular_applied_table(idx.l, R)[static_cast<std::size_t>(lm_index(idx.l, idx.m))];
}

/// Stretched Gaunt coefficient
///   <l+lp, m+mp | l m | lp mp> = \int conj(Y_{l+lp, m+mp}) Y_lm Y_{lp mp} dOmega.
///
/// Closed product form of the stretched Clebsch-Gordan coefficients; every
/// factor is positive, so there is no cancellation.
inline double gaunt(int l, int m, int lp, int mp) {
  require_valid({l, m});
  require_valid({lp, mp});
  const int L = l + lp;
  const int M = m + mp;
  const double norm = std::sqrt((2.0 * l + 1.0) * (2.0 * lp + 1.0) /
                                (four_pi * (2.0 * L + 1.0)));
  const double radial = factorial(2 * l) * factorial(2 * lp) / factorial(2 * L) *
                        factorial(L) / (factorial(l) * factorial(lp));
  const double azimuthal =
      std::sqrt(factorial(L + M) * factorial(L - M) /
                (factorial(l + m) * factorial(l - m) * factorial(lp + mp) *
                 factorial(lp - mp)));
  return norm * radial * azimuthal;
}

/// Standard spherical Bessel function of the first kind j_l(x).
///
/// Power series where x < max(1, l/2), Miller downward recurrence for
/// l/2 <= x < l, upward recurrence for x >= l.
inline double spherical_bessel_std(int l, double x) {
  if (l < 0)
    throw DomainError("spherical_bessel_std: negative order");
  if (x < 0.0)
    return sign_pow(l) * spherical_bessel_std(l, -x);
  if (x == 0.0)
    return l == 0 ? 1.0 : 0.0;

  if (x < std::max(1.0, 0.5 * l)) {
    double term = 1.0;
    for (int i = 1; i <= l; ++i)
      term *= x / (2.0 * i + 1.0);
    double sum = term;
    const double h = -0.5 * x * x;
    for (int n = 0; n < 200; ++n) {
      term *= h / ((n + 1.0) * (2.0 * l + 2.0 * n + 3.0));
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum))
        break;
    }
    return sum;
  }

  const double j0 = std::sin(x) / x;
  const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  if (l == 0)
    return j0;
  if (x >= l) {
    double jm = j0, jc = j1;
    for (int n = 1; n < l; ++n) {
      const double jn = (2.0 * n + 1.0) / x * jc - jm;
      jm = jc;
      jc = jn;
    }
    return jc;
  }

  const int start = l + 20 + static_cast<int>(std::sqrt(40.0 * l));
  double fp1 = 0.0, f = 1e-280, fl = 0.0, f0 = 0.0, f1 = 0.0;
  for (int n = start; n >= 1; --n) {
    const double fm1 = (2.0 * n + 1.0) / x * f - fp1;
    fp1 = f;
    f = fm1;
    if (n - 1 == l)
      fl = f;
    if (n - 1 == 1)
      f1 = f;
    if (std::abs(f) > 1e250) {
      f *= 1e-250;
      fp1 *= 1e-250;
      fl *= 1e-250;
      f1 *= 1e-250;
    }
  }
  f0 = f;
  const double scale = std::abs(j0) >= std::abs(j1) ? j0 / f0 : j1 / f1;
  return fl * scale;
}

/// Spherical Bessel functions as written in the plane-wave expansion used
/// here: 4 pi i^l j_l(x).
inline complex phased_bessel(int l, double x) {
  static const complex ipow4[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return four_pi * ipow4[l % 4] * spherical_bessel_std(l, x);
}

/// Upper incomplete gamma Gamma(s, x) (continued fraction for x >= s+1).
inline double upper_incomplete_gamma(double s, double x);

/// Lower incomplete gamma gamma(s, x) = \int_0^x t^{s-1} e^{-t} dt.
inline double lower_incomplete_gamma(double s, double x) {
  if (!(s > 0.0))
    throw DomainError("lower_incomplete_gamma: s must be positive");
  if (x < 0.0)
    throw DomainError("lower_incomplete_gamma: x must be non-negative");
  if (x == 0.0)
    return 0.0;
  if (x < s + 1.0) {
    double term = 1.0 / s, sum = term;
    for (int n = 1; n < 1000; ++n) {
      term *= x / (s + n);
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum))
        return sum * std::exp(-x + s * std::log(x));
    }
    throw NumericError("lower_incomplete_gamma: series failed to converge");
  }
  return std::tgamma(s) - upper_incomplete_gamma(s, x);
}

inline double upper_incomplete_gamma(double s, double x) {
  if (!(s > 0.0))
    throw DomainError("upper_incomplete_gamma: s must be positive");
  if (x < 0.0)
    throw DomainError("upper_incomplete_gamma: x must be non-negative");
  if (x < s + 1.0)
    return std::tgamma(s) - lower_incomplete_gamma(s, x);
  // Modified Lentz evaluation of the Legendre continued fraction.
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny)
      d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny)
      c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16)
      return std::exp(-x + s * std::log(x)) * h;
  }
  throw NumericError("upper_incomplete_gamma: continued fraction failed to converge");
}

} // namespace bipolar::sf
