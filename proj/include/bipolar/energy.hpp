#pragma once

/// \file energy.hpp
///
/// Electrostatic interaction energy W = \int\int rho1(b) rho2(a)/|b - a - R|
/// of two DensityModels by three independent routes:
///
///   multipole  truncated long-range series in the spherical mean square
///              radii (n = n' = 0 sector)
///   fourier    W = (2/pi) \int_0^inf F_1(k) F_2(k) j0(k D) dk per pair of
///              concentric component groups
///   direct     nested radial quadrature with exact one-center potentials
///
/// plus closed-form references for sphere-Gaussian and sphere-exponential
/// overlap at R = 0.

#include "bipolar/charge.hpp"
#include "bipolar/delta_series.hpp"
#include "bipolar/errors.hpp"
#include "bipolar/expansion.hpp"
#include "bipolar/quadrature.hpp"
#include "bipolar/specfun.hpp"
#include "bipolar/vec.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bipolar::energy {

using charge::Component;
using charge::DensityModel;
using charge::Shape;
using expansion::Truncation;

struct TwoBodySystem {
  DensityModel rho1; // centered at the origin
  DensityModel rho2; // centered at R
  Vec3 R = Vec3::Zero();

  TwoBodySystem swapped() const { return {rho2, rho1, -R}; }
};

enum class Method { multipole, fourier, direct, closed };

inline std::string to_string(Method m) {
  switch (m) {
  case Method::multipole:
    return "multipole";
  case Method::fourier:
    return "fourier";
  case Method::direct:
    return "direct";
  case Method::closed:
    return "closed";
  }
  return "unknown";
}

struct EnergyResult {
  double value = 0.0;
  Method method = Method::direct;
  double error_estimate = 0.0;
  std::optional<Truncation> truncation;
};

namespace detail {

/// Components of one body sharing a center.
struct Group {
  Vec3 center = Vec3::Zero();
  std::vector<Component> smooth;
  double point_charge = 0.0;
  bool has_point = false;
  bool neutral = false;

  double smooth_form_factor(double k) const {
    double s = 0.0;
    for (const auto &c : smooth)
      s += charge::component_form_factor(c, k);
    return s;
  }

  double density(double s) const {
    double v = 0.0;
    for (const auto &c : smooth)
      v += charge::component_density(c, s);
    return v;
  }

  double cutoff() const {
    double r = 0.0;
    for (const auto &c : smooth)
      r = std::max(r, charge::component_cutoff(c));
    return r;
  }

  /// t * phi(t), bounded at t = 0. A neutral group is summed in near-field
  /// form t*phi_c - Q_c so that its exponentially small far field is not
  /// the difference of two 1/t tails.
  double t_potential(double t) const {
    double s = neutral ? 0.0 : point_charge;
    for (const auto &c : smooth) {
      const double q = charge::component_charge(c);
      const double tphi = t == 0.0 ? 0.0 : t * charge::component_potential(c, t);
      if (!neutral) {
        s += tphi;
        continue;
      }
      switch (c.shape) {
      case Shape::sphere:
        s += t >= c.scale ? 0.0 : tphi - q;
        break;
      case Shape::exponential: {
        const double x = c.scale * t;
        s += -q * std::exp(-x) * (1.0 + 0.5 * x);
        break;
      }
      case Shape::gaussian:
        s += -q * std::erfc(std::sqrt(c.scale) * t);
        break;
      case Shape::point:
        break;
      }
    }
    return s;
  }

  double potential(double t) const {
    if (t > 0.0)
      return t_potential(t) / t;
    if (has_point)
      throw SingularityError("potential evaluated at a point charge");
    double s = 0.0;
    for (const auto &c : smooth)
      s += charge::component_potential(c, 0.0);
    return s;
  }

  /// Radii where the density or potential has a kink.
  std::vector<double> radii() const {
    std::vector<double> r;
    for (const auto &c : smooth)
      if (c.shape == Shape::sphere)
        r.push_back(c.scale);
    return r;
  }

  /// Max frequency of the form factor's oscillation in k.
  double max_frequency() const {
    double w = 0.0;
    for (const auto &c : smooth)
      if (c.shape == Shape::sphere)
        w = std::max(w, c.scale);
    return w;
  }

  double inverse_length() const {
    double v = 0.0;
    for (const auto &c : smooth)
      v = std::max(v, 1.0 / charge::component_length(c));
    return v;
  }
};

inline std::vector<Group> groups_of(const DensityModel &model, const Vec3 &shift) {
  std::vector<Group> out;
  for (const auto &c : model.components()) {
    const Vec3 center = shift + c.center;
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Group &g) { return g.center == center; });
    if (it == out.end()) {
      out.push_back(Group{});
      it = out.end() - 1;
      it->center = center;
    }
    Component local = c;
    local.center = Vec3::Zero();
    if (c.is_point()) {
      it->point_charge += c.amplitude;
      it->has_point = true;
    } else {
      it->smooth.push_back(local);
    }
  }
  for (auto &g : out) {
    double q = g.point_charge, qabs = std::abs(g.point_charge);
    for (const auto &c : g.smooth) {
      q += charge::component_charge(c);
      qabs += std::abs(charge::component_charge(c));
    }
    g.neutral = std::abs(q) <= 1e-13 * qabs;
  }
  return out;
}

inline void sort_unique(std::vector<double> &v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

/// Clips breakpoints into [lo, hi] and adds both ends.
inline std::vector<double> breakpoints(std::vector<double> pts, double lo, double hi) {
  std::vector<double> out{lo, hi};
  for (double p : pts)
    if (p > lo && p < hi)
      out.push_back(p);
  sort_unique(out);
  return out;
}

/// Energy of group i's smooth density in the field of group j, centers D apart.
inline quad::Result smooth_in_field(const Group &gi, const Group &gj, double D) {
  if (gi.smooth.empty())
    return {};
  const double cut = gi.cutoff();
  std::vector<double> pts = gi.radii();
  for (const auto &c : gi.smooth)
    if (c.shape != Shape::sphere)
      for (double f : {1.0, 4.0, 12.0, 30.0})
        pts.push_back(f * charge::component_length(c));

  if (D == 0.0) {
    for (double a : gj.radii())
      pts.push_back(a);
    auto f = [&](double s) { return four_pi * s * gi.density(s) * gj.t_potential(s); };
    return quad::integrate_pieces(f, breakpoints(pts, 0.0, cut), 1e-14);
  }

  pts.push_back(D);
  for (double a : gj.radii()) {
    pts.push_back(std::abs(D - a));
    pts.push_back(D + a);
  }
  const std::vector<double> inner_radii = gj.radii();
  double inner_err = 0.0;
  // Shell average of phi_j over |s_vec| = s about a point at distance D.
  auto shell = [&](double s) {
    const double lo = std::abs(D - s), hi = D + s;
    auto g = [&](double t) { return gj.t_potential(t); };
    const auto r = quad::integrate_pieces(g, breakpoints(inner_radii, lo, hi), 1e-14);
    inner_err = std::max(inner_err, r.error / (2.0 * D));
    return r.value / (2.0 * D);
  };
  auto f = [&](double s) {
    if (s == 0.0)
      return 0.0;
    return four_pi * s * gi.density(s) * shell(s);
  };
  auto res = quad::integrate_pieces(f, breakpoints(pts, 0.0, cut), 1e-13);
  res.error += inner_err * four_pi * cut;
  return res;
}

/// All of group i in the field of all of group j:
///   W = q_i phi_j(D) + \int rho_i^smooth phi_j.
/// The outer group is the one with no smooth part, else the more compact one.
inline quad::Result direct_pair(const Group &g1, const Group &g2) {
  const double D = (g2.center - g1.center).norm();
  if (D == 0.0 && g1.has_point && g2.has_point)
    throw SingularityError("coincident point charges");
  bool first_outer;
  if (g1.smooth.empty())
    first_outer = true;
  else if (g2.smooth.empty())
    first_outer = false;
  else
    first_outer = g1.cutoff() <= g2.cutoff();
  const Group &gi = first_outer ? g1 : g2;
  const Group &gj = first_outer ? g2 : g1;
  quad::Result out;
  if (gi.has_point)
    out.value += gi.point_charge * gj.potential(D);
  out += smooth_in_field(gi, gj, D);
  return out;
}

// -------- oscillatory decomposition for the Fourier tail --------

struct OscTerm {
  double omega;
  quad::Trig trig;
  std::function<double(double)> amp;
};

inline std::vector<OscTerm> smooth_terms(const Group &g) {
  std::vector<OscTerm> out;
  for (const auto &c : g.smooth) {
    switch (c.shape) {
    case Shape::sphere: {
      const double C = c.amplitude, a = c.scale;
      out.push_back({a, quad::Trig::sin, [C](double k) { return four_pi * C / (k * k * k); }});
      out.push_back({a, quad::Trig::cos, [C, a](double k) { return -four_pi * C * a / (k * k); }});
      break;
    }
    default:
      out.push_back({0.0, quad::Trig::cos,
                     [c](double k) { return charge::component_form_factor(c, k); }});
      break;
    }
  }
  return out;
}

/// Product-to-sum for amp1 trig1(w1 k) * amp2 trig2(w2 k).
inline void multiply_into(std::vector<OscTerm> &out, const OscTerm &x, const OscTerm &y) {
  auto amp = [fx = x.amp, fy = y.amp](double s) {
    return [fx, fy, s](double k) { return s * fx(k) * fy(k); };
  };
  using quad::Trig;
  if (x.omega == 0.0 && x.trig == Trig::cos) {
    out.push_back({y.omega, y.trig, amp(1.0)});
    return;
  }
  if (y.omega == 0.0 && y.trig == Trig::cos) {
    out.push_back({x.omega, x.trig, amp(1.0)});
    return;
  }
  const double sum = x.omega + y.omega, diff = x.omega - y.omega;
  if (x.trig == Trig::sin && y.trig == Trig::sin) {
    out.push_back({diff, Trig::cos, amp(0.5)});
    out.push_back({sum, Trig::cos, amp(-0.5)});
  } else if (x.trig == Trig::cos && y.trig == Trig::cos) {
    out.push_back({diff, Trig::cos, amp(0.5)});
    out.push_back({sum, Trig::cos, amp(0.5)});
  } else if (x.trig == Trig::sin) {
    out.push_back({sum, Trig::sin, amp(0.5)});
    out.push_back({diff, Trig::sin, amp(0.5)});
  } else {
    out.push_back({sum, Trig::sin, amp(0.5)});
    out.push_back({diff, Trig::sin, amp(-0.5)});
  }
}

inline std::vector<OscTerm> multiply(const std::vector<OscTerm> &a, const std::vector<OscTerm> &b) {
  std::vector<OscTerm> out;
  for (const auto &x : a)
    for (const auto &y : b)
      multiply_into(out, x, y);
  return out;
}

/// Folds negative frequencies, drops vanishing sines and merges equal
/// (omega, trig) pairs.
inline std::vector<OscTerm> normalize(std::vector<OscTerm> terms, double scale) {
  std::vector<OscTerm> out;
  for (auto &t : terms) {
    if (t.omega < 0.0) {
      t.omega = -t.omega;
      if (t.trig == quad::Trig::sin)
        t.amp = [f = t.amp](double k) { return -f(k); };
    }
    if (t.omega <= 1e-13 * scale) {
      if (t.trig == quad::Trig::sin)
        continue;
      t.omega = 0.0;
    }
    auto it = std::find_if(out.begin(), out.end(), [&](const OscTerm &o) {
      return o.trig == t.trig && std::abs(o.omega - t.omega) <= 1e-13 * scale;
    });
    if (it == out.end())
      out.push_back(t);
    else
      it->amp = [f = it->amp, g = t.amp](double k) { return f(k) + g(k); };
  }
  return out;
}

inline quad::Result fourier_pair(const Group &g1, const Group &g2) {
  const double D = (g2.center - g1.center).norm();
  quad::Result out;
  // Point-point products are Coulomb's law; the k-integral carries the rest.
  if (g1.has_point && g2.has_point) {
    if (D == 0.0)
      throw SingularityError("coincident point charges");
    out.value += g1.point_charge * g2.point_charge / D;
  }
  if (g1.smooth.empty() && g2.smooth.empty())
    return out;

  const double q1 = g1.point_charge, q2 = g2.point_charge;
  auto j0 = [D](double k) { return D == 0.0 ? 1.0 : sf::spherical_bessel_std(0, k * D); };
  auto integrand = [&](double k) {
    const double f1 = g1.smooth_form_factor(k), f2 = g2.smooth_form_factor(k);
    return (2.0 / pi) * (q1 * f2 + q2 * f1 + f1 * f2) * j0(k);
  };

  const double k0 = 8.0 * std::max(g1.inverse_length(), g2.inverse_length());
  const double wmax = D + g1.max_frequency() + g2.max_frequency();
  const int panels = wmax > 0.0 ? std::max(1, static_cast<int>(std::ceil(k0 * wmax / pi))) : 1;
  quad::Result head;
  double l1 = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = k0 * i / panels, hi = k0 * (i + 1) / panels;
    head += quad::integrate(integrand, lo, hi, 1e-14);
    l1 += quad::integrate([&](double k) { return std::abs(integrand(k)); }, lo, hi, 1e-6).value;
  }
  out += head;

  const std::vector<OscTerm> p1{{0.0, quad::Trig::cos, [q1](double) { return q1; }}};
  const std::vector<OscTerm> p2{{0.0, quad::Trig::cos, [q2](double) { return q2; }}};
  const auto s1 = smooth_terms(g1), s2 = smooth_terms(g2);
  std::vector<OscTerm> ff;
  auto append = [&](std::vector<OscTerm> v) { ff.insert(ff.end(), v.begin(), v.end()); };
  if (g1.has_point)
    append(multiply(p1, s2));
  if (g2.has_point)
    append(multiply(s1, p2));
  append(multiply(s1, s2));

  std::vector<OscTerm> bessel;
  if (D == 0.0)
    bessel.push_back({0.0, quad::Trig::cos, [](double) { return 1.0; }});
  else
    bessel.push_back({D, quad::Trig::sin, [D](double k) { return 1.0 / (k * D); }});
  auto terms = multiply(ff, bessel);
  const double scale = std::max(wmax, 1.0 / k0);
  terms = normalize(std::move(terms), scale);

  const double abs_tol = 1e-15 * std::max(l1, 1e-300);
  for (const auto &t : terms) {
    auto amp = [f = t.amp](double k) { return (2.0 / pi) * f(k); };
    out += quad::integrate_oscillatory_tail(amp, t.omega, t.trig, k0, abs_tol);
  }
  return out;
}

template <typename PairFn>
EnergyResult sum_over_groups(const TwoBodySystem &sys, Method m, PairFn &&pair) {
  if (!sys.R.allFinite())
    throw DomainError("separation must be finite");
  const auto g1 = groups_of(sys.rho1, Vec3::Zero());
  const auto g2 = groups_of(sys.rho2, sys.R);
  EnergyResult res;
  res.method = m;
  for (const auto &a : g1)
    for (const auto &b : g2) {
      const auto r = pair(a, b);
      res.value += r.value;
      res.error_estimate += r.error;
    }
  return res;
}

} // namespace detail

inline EnergyResult energy_direct(const TwoBodySystem &sys) {
  return detail::sum_over_groups(sys, Method::direct, detail::direct_pair);
}

inline EnergyResult energy_fourier(const TwoBodySystem &sys) {
  return detail::sum_over_groups(sys, Method::fourier, detail::fourier_pair);
}

/// Long-range series
///   W = sum (-1)^l' 4 pi sqrt((2l+1)(2l'+1)) / ((2l+1)!! (2l'+1)!!)
///       rbar1_lm rbar2_l'm' <l+l',m+m'|lm|l'm'> Y_{l+l',m+m'}(-grad)(1/R)
/// over l, l' <= l_max. error_estimate is the magnitude of the last shell
/// max(l, l') = l_max.
inline EnergyResult energy_multipole(const TwoBodySystem &sys, const Truncation &t) {
  t.validate();
  if (!(sys.R.norm() > 0.0))
    throw SingularityError("multipole series undefined at R = 0");
  if (t.l_max > expansion::spherical_l_max)
    throw DomainError("multipole series supports l_max <= " + std::to_string(expansion::spherical_l_max));
  const int L = t.l_max;
  const auto m1 = charge::SphericalMSR::of(sys.rho1, L, 0);
  const auto m2 = charge::SphericalMSR::of(sys.rho2, L, 0);
  const auto irr = sf::irregular_applied_table(2 * L, sys.R);
  std::vector<complex> shells(static_cast<std::size_t>(L + 1), 0.0);
  for (int l = 0; l <= L; ++l)
    for (int lp = 0; lp <= L; ++lp) {
      const double pref = sign_pow(lp) * four_pi * std::sqrt((2.0 * l + 1.0) * (2.0 * lp + 1.0)) /
                          (sf::double_factorial_real(2 * l + 1) *
                           sf::double_factorial_real(2 * lp + 1));
      complex s = 0.0;
      for (int m = -l; m <= l; ++m) {
        const complex r1 = m1.at(l, m, 0);
        if (r1 == 0.0)
          continue;
        for (int mp = -lp; mp <= lp; ++mp)
          s += r1 * m2.at(lp, mp, 0) * sf::gaunt(l, m, lp, mp) *
               irr[static_cast<std::size_t>(sf::lm_index(l + lp, m + mp))];
      }
      shells[static_cast<std::size_t>(std::max(l, lp))] += pref * s;
    }
  complex total = 0.0;
  for (const auto &s : shells)
    total += s;
  EnergyResult res;
  res.method = Method::multipole;
  res.value = total.real();
  res.error_estimate = std::abs(shells.back());
  res.truncation = t;
  return res;
}

/// Contact (overlap) part: fourier minus the long-range series.
inline EnergyResult overlap_correction(const TwoBodySystem &sys, const Truncation &t) {
  const auto f = energy_fourier(sys);
  const auto m = energy_multipole(sys, t);
  EnergyResult res;
  res.method = Method::fourier;
  res.value = f.value - m.value;
  res.error_estimate = f.error_estimate + m.error_estimate;
  res.truncation = t;
  return res;
}

namespace detail {
inline void require_positive(double a, double lam) {
  if (!(a > 0.0) || !(lam > 0.0))
    throw DomainError("closed form requires a > 0 and lambda > 0");
}
} // namespace detail

/// Uniform sphere C1 theta(a - r) and Gaussian C2 e^{-lam r^2}, both at the
/// origin. With x = lam a^2 and the Gaussian potential
/// C2 (pi/lam)^{3/2} erf(sqrt(lam) r)/r,
///   W = 4 pi^2 C1 C2 a^3 e^{-x}/lam + 4 pi^2 C1 C2 a^2 gamma(3/2, x)/lam^{3/2}
///       - 2 pi^2 C1 C2 gamma(3/2, x)/lam^{5/2}.
inline double closed_sphere_gaussian(double C1, double C2, double a, double lam) {
  detail::require_positive(a, lam);
  const double x = lam * a * a;
  const double k = pi * pi * C1 * C2;
  const double g = sf::lower_incomplete_gamma(1.5, x);
  return 4.0 * k * a * a * a * std::exp(-x) / lam + 4.0 * k * a * a * g / std::pow(lam, 1.5) -
         2.0 * k * g / std::pow(lam, 2.5);
}

/// Three-term gamma-function reference form
///   8 pi^2 C1 C2 a^3 e^{-x}/(3 lam) + 4 pi^2 C1 C2 a^2 gamma(3/2, x)/lam^{3/2}
///   - 4 pi^2 C1 C2 a^2 gamma(5/2, x)/(3 lam^{3/2}).
/// It coincides with closed_sphere_gaussian at a = lam = 1 only.
inline double printed_sphere_gaussian(double C1, double C2, double a, double lam) {
  detail::require_positive(a, lam);
  const double x = lam * a * a;
  const double k = pi * pi * C1 * C2;
  return 8.0 * k / (3.0 * lam) * a * a * a * std::exp(-x) +
         4.0 * k / std::pow(lam, 1.5) * a * a * sf::lower_incomplete_gamma(1.5, x) -
         4.0 * k / (3.0 * std::pow(lam, 1.5)) * a * a * sf::lower_incomplete_gamma(2.5, x);
}

/// Reference two-term small-a series. Its leading term
/// 8 C1 C2 a^3 pi/(3 lam) is a factor pi below the expansion of the exact
/// result (8 pi^2 C1 C2 a^3/(3 lam)); `inconsistent_with_exact` records that.
struct TaylorDisplay {
  double value = 0.0;
  bool inconsistent_with_exact = true;
};

inline TaylorDisplay taylor_sphere_gaussian(double C1, double C2, double a, double lam,
                                            int terms) {
  if (terms < 0 || terms > 2)
    throw UnsupportedEvaluation("taylor_sphere_gaussian: only 0, 1 or 2 terms are displayed");
  if (!(lam > 0.0) || a < 0.0)
    throw DomainError("taylor_sphere_gaussian requires a >= 0 and lambda > 0");
  TaylorDisplay out;
  if (terms >= 1)
    out.value += 8.0 * C1 * C2 * a * a * a * pi / (3.0 * lam);
  if (terms >= 2)
    out.value -= 8.0 * pi * pi * C1 * C2 * std::pow(a, 5) / 15.0;
  return out;
}

/// Leading terms of the small-a expansion of closed_sphere_gaussian:
/// 8 pi^2 C1 C2 a^3/(3 lam) - 8 pi^2 C1 C2 a^5/15.
inline double exact_small_a_series(double C1, double C2, double a, double lam, int terms) {
  double v = 0.0;
  if (terms >= 1)
    v += 8.0 * pi * pi * C1 * C2 * a * a * a / (3.0 * lam);
  if (terms >= 2)
    v -= 8.0 * pi * pi * C1 * C2 * std::pow(a, 5) / 15.0;
  return v;
}

/// Uniform sphere C1 theta(a - r) and exponential C2 e^{-lam r} at the origin.
inline double closed_sphere_exponential(double C1, double C2, double a, double lam) {
  detail::require_positive(a, lam);
  const double x = lam * a;
  return 16.0 * pi * pi * C1 * C2 / std::pow(lam, 5) *
         (std::exp(-x) * (x + 2.0) * (x + 2.0) + x * x - 4.0);
}

} // namespace bipolar::energy
