#pragma once

/// \file perturb.hpp
///
/// First-order (exchange-free) corrections for hydrogen-hydrogen and
/// hydrogen-proton: the interaction operator in k-space, its ground-state
/// expectation E~(k), and E(R) both in closed form and by numerical
/// inversion of E~(k).

#include "bipolar/errors.hpp"
#include "bipolar/quadrature.hpp"
#include "bipolar/specfun.hpp"
#include "bipolar/vec.hpp"

#include <string>

namespace bipolar::perturb {

enum class SystemKind { hydrogen_hydrogen, hydrogen_proton };

inline std::string to_string(SystemKind k) {
  return k == SystemKind::hydrogen_hydrogen ? "hh" : "hp";
}

struct PerturbSystem {
  SystemKind kind = SystemKind::hydrogen_proton;
  double a0 = 1.0;
  double e = 1.0;

  void validate() const {
    if (!(a0 > 0.0) || !std::isfinite(a0))
      throw DomainError("Bohr radius must be > 0");
    if (!std::isfinite(e))
      throw DomainError("unit charge must be finite");
  }
  /// Ground-state energy E0 = -e^2/(2 a0).
  double ground_state_energy() const { return -e * e / (2.0 * a0); }
};

/// |psi_1s(r)|^2.
inline double ground_state_density(double r, double a0 = 1.0) {
  return std::exp(-2.0 * r / a0) / (pi * a0 * a0 * a0);
}

/// 1s form factor <e^{i k.r}> = 16/(4 + k^2 a0^2)^2, also for complex k.
template <typename T> T form_factor_1s(T k, double a0 = 1.0) {
  const T d = 4.0 + k * k * (a0 * a0);
  return 16.0 / (d * d);
}

namespace detail {

inline void require_k(double k) {
  if (!(k >= 0.0) || !std::isfinite(k))
    throw DomainError("k must be finite and non-negative");
}

/// 1 - (1 + u)^{-2} = sum_{n>=1} (-1)^{n+1} (n+1) u^n divided by u.
inline double one_minus_f_over_u(double u) {
  double s = 0.0, un = 1.0;
  for (int n = 1; n <= 6; ++n) {
    s += sign_pow(n + 1) * (n + 1) * un;
    un *= u;
  }
  return s;
}

inline constexpr double small_ka = 1e-3;

} // namespace detail

/// Value of 2 pi e^2 a0^2 taken by e1_tilde_hp at k = 0.
inline double e1_tilde_hp_limit(double a0 = 1.0, double e = 1.0) {
  return 2.0 * pi * e * e * a0 * a0;
}

/// (4 pi e^2/k^2)(1 - F(k)). Below k a0 = 1e-3 the bracket is expanded in
/// u = k^2 a0^2/4, so k = 0 returns the finite limit e1_tilde_hp_limit.
inline double e1_tilde_hp(double k, double a0 = 1.0, double e = 1.0) {
  detail::require_k(k);
  if (k * a0 < detail::small_ka) {
    const double u = 0.25 * k * k * a0 * a0;
    return pi * e * e * a0 * a0 * detail::one_minus_f_over_u(u);
  }
  return four_pi * e * e / (k * k) * (1.0 - form_factor_1s(k, a0));
}

/// (4 pi e^2/k^2)(1 - F(k))^2; tends to 0 as k -> 0.
inline double e1_tilde_hh(double k, double a0 = 1.0, double e = 1.0) {
  detail::require_k(k);
  if (k * a0 < detail::small_ka) {
    const double u = 0.25 * k * k * a0 * a0;
    const double b = detail::one_minus_f_over_u(u);
    return pi * e * e * a0 * a0 * u * b * b;
  }
  const double g = 1.0 - form_factor_1s(k, a0);
  return four_pi * e * e / (k * k) * g * g;
}

inline double e1_tilde(const PerturbSystem &sys, double k) {
  sys.validate();
  return sys.kind == SystemKind::hydrogen_hydrogen ? e1_tilde_hh(k, sys.a0, sys.e)
                                                   : e1_tilde_hp(k, sys.a0, sys.e);
}

namespace detail {
inline void require_nonzero_k(const Vec3 &k) {
  if (!(k.norm() > 0.0))
    throw SingularityError("operator transform is singular at k = 0");
}
/// e^{i theta} - 1 without cancellation for small theta.
inline complex expm1_i(double theta) {
  const double s = std::sin(0.5 * theta);
  return {-2.0 * s * s, std::sin(theta)};
}
} // namespace detail

/// Transform of the H-H interaction operator for electron positions a
/// (atom 1) and b (atom 2) relative to their protons:
///   (4 pi e^2/k^2)(e^{i k.a} - 1)(e^{-i k.b} - 1).
/// Complex in general; real only after averaging over directions.
inline complex w_fourier_hh(const Vec3 &a, const Vec3 &b, const Vec3 &k, double e = 1.0) {
  detail::require_nonzero_k(k);
  return four_pi * e * e / k.squaredNorm() * detail::expm1_i(k.dot(a)) *
         detail::expm1_i(-k.dot(b));
}

/// Same quantity from the four-term Bessel-harmonic series with the
/// 4 pi i^l Bessel convention, truncated at l, l' <= l_max.
inline complex w_fourier_hh_series(const Vec3 &a, const Vec3 &b, const Vec3 &k, int l_max,
                                   double e = 1.0) {
  detail::require_nonzero_k(k);
  auto dir = [](const Vec3 &v) { return v.norm() > 0.0 ? v : Vec3(0, 0, 1); };
  const auto yk = sf::sph_harm_table(l_max, k);
  const auto ya = sf::sph_harm_table(l_max, dir(a));
  const auto yb = sf::sph_harm_table(l_max, dir(b));
  const double kn = k.norm();
  complex sa = 0.0, sb = 0.0;
  for (int l = 0; l <= l_max; ++l) {
    complex pa = 0.0, pb = 0.0;
    for (int m = -l; m <= l; ++m) {
      const auto i = static_cast<std::size_t>(sf::lm_index(l, m));
      pa += std::conj(ya[i]) * yk[i];
      pb += std::conj(yb[i]) * yk[i];
    }
    sa += sf::phased_bessel(l, kn * a.norm()) * pa;
    sb += sign_pow(l) * sf::phased_bessel(l, kn * b.norm()) * pb;
  }
  return four_pi * e * e / (kn * kn) * (sa * sb - sa - sb + 1.0);
}

/// Average of w_fourier_hh over the directions of a and b at fixed lengths:
/// (4 pi e^2/k^2)(j0(k a) - 1)(j0(k b) - 1).
inline double w_fourier_hh_monopole(double a, double b, double k, double e = 1.0) {
  if (!(k > 0.0))
    throw SingularityError("operator transform is singular at k = 0");
  return four_pi * e * e / (k * k) * (sf::spherical_bessel_std(0, k * a) - 1.0) *
         (sf::spherical_bessel_std(0, k * b) - 1.0);
}

/// H-proton operator transform (4 pi e^2/k^2)(1 - e^{i k.a}).
inline complex w_fourier_hp(const Vec3 &a, const Vec3 &k, double e = 1.0) {
  detail::require_nonzero_k(k);
  return -four_pi * e * e / k.squaredNorm() * detail::expm1_i(k.dot(a));
}

namespace detail {
inline void require_R(double R) {
  if (!(R > 0.0) || !std::isfinite(R))
    throw DomainError("R must be finite and > 0");
}
} // namespace detail

/// (e^2/R) e^{-2R/a0} (R/a0 + 1).
inline double e1_hp_closed(double R, double a0 = 1.0, double e = 1.0) {
  detail::require_R(R);
  return e * e / R * std::exp(-2.0 * R / a0) * (R / a0 + 1.0);
}

/// (E0 a0/(12 R)) e^{-2R/a0} (4 R^3/a0^3 + 18 R^2/a0^2 - 15 R/a0 - 24),
/// E0 = -e^2/(2 a0).
inline double e1_hh_closed(double R, double a0 = 1.0, double e = 1.0) {
  detail::require_R(R);
  const double x = R / a0;
  const double E0 = -e * e / (2.0 * a0);
  return E0 * a0 / (12.0 * R) * std::exp(-2.0 * x) * (4.0 * x * x * x + 18.0 * x * x - 15.0 * x - 24.0);
}

inline double e1_closed(const PerturbSystem &sys, double R) {
  sys.validate();
  return sys.kind == SystemKind::hydrogen_hydrogen ? e1_hh_closed(R, sys.a0, sys.e)
                                                   : e1_hp_closed(R, sys.a0, sys.e);
}

struct NumericResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// E(R) = (2 pi)^{-3} \int e^{-i k.R} E~(k) d^3k by numerical inversion.
///
/// With E~ = (4 pi e^2/k^2) H(k) the radial form is
/// (e^2/(pi i R)) \int_R H(k) e^{ikR}/k dk. H - 1 = G decays like k^-4 and
/// H/k is analytic for |Im k| < 2/a0, so the line is shifted to Im k = c
/// (the constant 1 contributes nothing there). The result
///   E = (2 e^2 e^{-cR}/(pi R)) \int_0^inf Im[G(t+ic) e^{itR}/(t+ic)] dt
/// carries the exponential decay explicitly instead of recovering it from
/// cancellation on the real axis.
inline NumericResult e1_numeric_detailed(const PerturbSystem &sys, double R) {
  sys.validate();
  detail::require_R(R);
  const double a0 = sys.a0;
  const double c = 1.5 / a0;
  const bool hh = sys.kind == SystemKind::hydrogen_hydrogen;
  auto A = [&](double t) {
    const complex k(t, c);
    const complex F = form_factor_1s(k, a0);
    const complex G = hh ? F * F - 2.0 * F : -F;
    return G / k;
  };
  auto f = [&](double t) {
    const complex v = A(t) * std::polar(1.0, t * R);
    return v.imag();
  };
  const double t0 = 40.0 / a0;
  const int panels = std::max(4, static_cast<int>(std::ceil(t0 * R / pi)));
  quad::Result total;
  for (int i = 0; i < panels; ++i)
    total += quad::integrate(f, t0 * i / panels, t0 * (i + 1) / panels, 1e-14);
  const double abs_tol = 1e-17 * std::max(std::abs(total.value), 1e-30);
  total += quad::integrate_oscillatory_tail([&](double t) { return A(t).imag(); }, R,
                                            quad::Trig::cos, t0, abs_tol);
  total += quad::integrate_oscillatory_tail([&](double t) { return A(t).real(); }, R,
                                            quad::Trig::sin, t0, abs_tol);
  const double pref = 2.0 * sys.e * sys.e * std::exp(-c * R) / (pi * R);
  return {pref * total.value, pref * total.error};
}

inline double e1_numeric(const PerturbSystem &sys, double R) {
  return e1_numeric_detailed(sys, R).value;
}

} // namespace bipolar::perturb
