#pragma once

// Property suites behind `bipolar verify`. Every check compares a library
// result against an independent reference and records the measured
// deviation next to its tolerance.

#include "bipolar/bipolar.hpp"
#include "bipolar/oracle.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace bipolar::verify {

struct Check {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

class Recorder {
public:
  explicit Recorder(std::string suite) : suite_(std::move(suite)) {}

  /// Passes when measured <= tolerance (NaN fails).
  void expect_le(const std::string &name, double measured, double tolerance) {
    checks_.push_back({suite_, name, measured, tolerance, measured <= tolerance});
  }
  void expect_true(const std::string &name, bool ok) {
    checks_.push_back({suite_, name, ok ? 0.0 : 1.0, 0.0, ok});
  }
  /// A check that threw is recorded as failed.
  template <typename F> void guarded(const std::string &name, F &&f) {
    try {
      f();
    } catch (const std::exception &) {
      checks_.push_back({suite_, name + " (threw)", INFINITY, 0.0, false});
    }
  }
  std::vector<Check> take() { return std::move(checks_); }

private:
  std::string suite_;
  std::vector<Check> checks_;
};

inline double rel_dev(double a, double b, double floor = 0.0) {
  return std::abs(a - b) / std::max(std::abs(b), floor);
}
inline double rel_dev(complex a, complex b, double floor = 0.0) {
  return std::abs(a - b) / std::max(std::abs(b), floor);
}

// ---------------------------------------------------------------- specfun

/// Y_lm(-grad)(1/R) by Richardson-extrapolated central differences of 1/R.
inline complex irregular_by_differences(int l, int m, const Vec3 &R) {
  const ComplexPoly Y = solid_harmonic_polynomial(l, m);
  auto deriv = [&](const Exponents &p, double h) {
    // Tensor-product central-difference stencil of order p in each axis.
    std::function<double(int, Vec3)> rec = [&](int axis, Vec3 x) -> double {
      if (axis == 3)
        return 1.0 / x.norm();
      const int k = p[static_cast<std::size_t>(axis)];
      double s = 0.0;
      for (int j = 0; j <= k; ++j) {
        Vec3 y = x;
        y[axis] += (0.5 * k - j) * h;
        s += sign_pow(j) * sf::factorial(k) / (sf::factorial(j) * sf::factorial(k - j)) * rec(axis + 1, y);
      }
      return s / std::pow(h, k);
    };
    return rec(0, R);
  };
  complex out = 0.0;
  for (const auto &[p, c] : Y.terms()) {
    const double h = 0.02;
    const double d = (4.0 * deriv(p, h / 2) - deriv(p, h)) / 3.0;
    out += c * sign_pow(degree(p)) * d;
  }
  return out;
}

inline std::vector<Check> specfun_suite() {
  Recorder r("specfun");
  r.guarded("orthonormality", [&] {
    const auto rule = oracle::angular_rule(12, 24);
    const int L = 10;
    std::vector<std::vector<complex>> tabs;
    for (const auto &n : rule)
      tabs.push_back(sf::sph_harm_table(L, n.direction));
    const int N = (L + 1) * (L + 1);
    double worst = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) {
        complex s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q)
          s += rule[q].weight * std::conj(tabs[q][static_cast<std::size_t>(i)]) *
               tabs[q][static_cast<std::size_t>(j)];
        worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
    r.expect_le("orthonormality l<=10", worst, 1e-10);
  });
  r.guarded("unsold", [&] {
    std::mt19937_64 rng(11);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const auto y = sf::sph_harm_table(10, oracle::random_unit(rng));
      for (int l = 0; l <= 10; ++l) {
        double s = 0.0;
        for (int m = -l; m <= l; ++m)
          s += std::norm(y[static_cast<std::size_t>(sf::lm_index(l, m))]);
        worst = std::max(worst, std::abs(s - (2.0 * l + 1.0) / four_pi));
      }
    }
    r.expect_le("Unsold sum rule l<=10", worst, 1e-12);
  });
  r.guarded("legendre oracle", [&] {
    std::mt19937_64 rng(12);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const Vec3 d = oracle::random_unit(rng);
      const double theta = std::acos(d.z()), phi = std::atan2(d.y(), d.x());
      for (int l = 0; l <= 10; ++l)
        for (int m = 0; m <= l; ++m) {
          const complex ref = std::sph_legendre(static_cast<unsigned>(l), static_cast<unsigned>(m), theta) *
                              std::polar(1.0, m * phi);
          worst = std::max(worst, std::abs(sf::sph_harm({l, m}, d) - ref));
        }
    }
    r.expect_le("sph_harm vs std::sph_legendre", worst, 1e-12);
  });
  r.guarded("gaunt", [&] {
    double w0 = 0.0;
    for (int lp = 0; lp <= 10; ++lp)
      for (int mp = -lp; mp <= lp; ++mp)
        w0 = std::max(w0, std::abs(sf::gaunt(0, 0, lp, mp) - 1.0 / std::sqrt(four_pi)));
    r.expect_le("gaunt(0,0,l',m') = 1/sqrt(4pi)", w0, 1e-15);
    const auto rule = oracle::angular_rule(10, 20);
    double worst = 0.0;
    for (int l = 0; l <= 4; ++l)
      for (int lp = 0; lp <= 4; ++lp)
        for (int m = -l; m <= l; ++m)
          for (int mp = -lp; mp <= lp; ++mp) {
            const complex q = oracle::sphere_integral<complex>(rule, [&](const Vec3 &d) {
              return std::conj(sf::sph_harm({l + lp, m + mp}, d)) * sf::sph_harm({l, m}, d) *
                     sf::sph_harm({lp, mp}, d);
            });
            worst = std::max(worst, std::abs(sf::gaunt(l, m, lp, mp) - q));
          }
    r.expect_le("gaunt vs angular quadrature l,l'<=4", worst, 1e-12);
  });
  r.guarded("bessel", [&] {
    double rec = 0.0, ref = 0.0;
    for (int l = 1; l <= 20; ++l)
      for (int i = 0; i <= 200; ++i) {
        const double x = 0.1 * std::pow(500.0, i / 200.0);
        const double a = sf::spherical_bessel_std(l - 1, x), b = sf::spherical_bessel_std(l + 1, x);
        const double c = (2.0 * l + 1.0) * sf::spherical_bessel_std(l, x) / x;
        rec = std::max(rec, std::abs(a + b - c) / std::max({std::abs(a), std::abs(b), std::abs(c)}));
      }
    for (int l = 0; l <= 30; ++l)
      for (int i = 0; i <= 400; ++i) {
        // Long-double reference; relative error is measured against the
        // envelope near zeros of j_l.
        const double x = 0.25 * i;
        const long double s = std::sph_bessell(static_cast<unsigned>(l), static_cast<long double>(x));
        const double v = sf::spherical_bessel_std(l, x);
        const double scale = std::max(static_cast<double>(std::abs(s)), 1e-3 / (1.0 + x));
        ref = std::max(ref, static_cast<double>(std::abs(v - s)) / scale);
      }
    r.expect_le("j_l recurrence x in [0.1,50], l<=20", rec, 1e-10);
    r.expect_le("j_l vs long-double reference, x<=100, l<=30", ref, 1e-12);
  });
  r.guarded("incomplete gamma", [&] {
    double sum = 0.0;
    bool monotone = true;
    for (double s : {0.5, 1.0, 1.5, 2.5, 4.0, 7.5})
      for (int i = 0; i <= 60; ++i) {
        const double x = 0.05 * i * i;
        const double g = sf::lower_incomplete_gamma(s, x);
        sum = std::max(sum, rel_dev(g + sf::upper_incomplete_gamma(s, x), std::tgamma(s)));
        if (i > 0 && g < sf::lower_incomplete_gamma(s, 0.05 * (i - 1) * (i - 1)))
          monotone = false;
      }
    r.expect_le("lower + upper = Gamma(s)", sum, 1e-12);
    r.expect_true("lower gamma monotone in x", monotone);
    const double q = quad::integrate([](double t) { return std::sqrt(t) * std::exp(-t); }, 0.0, 1.0, 1e-14).value;
    r.expect_le("gamma(3/2,1) vs quadrature", rel_dev(sf::lower_incomplete_gamma(1.5, 1.0), q), 1e-12);
  });
  r.guarded("irregular", [&] {
    const Vec3 R(0.3, -0.7, 1.1);
    double worst = 0.0;
    for (int l = 0; l <= 3; ++l)
      for (int m = -l; m <= l; ++m) {
        const complex ref = irregular_by_differences(l, m, R);
        worst = std::max(worst, std::abs(sf::irregular_solid_applied({l, m}, R) - ref) /
                                    std::max(std::abs(ref), 1.0));
      }
    r.expect_le("irregular solid vs finite differences l<=3", worst, 1e-6);
  });
  return r.take();
}

// ----------------------------------------------------------------- charge

/// Ten models covering every kind, offsets and nesting.
inline std::vector<charge::DensityModel> model_battery() {
  using charge::DensityModel;
  return {
      DensityModel::uniform_sphere(1.0, 1.0),
      DensityModel::gaussian(1.0, 1.0),
      DensityModel::exponential(1.0, 1.0),
      DensityModel::hydrogen1s(),
      DensityModel::point(0.7, Vec3(0.3, -0.2, 0.5)),
      DensityModel::uniform_sphere(-0.6, 0.8, Vec3(0.2, 0.1, -0.3)),
      DensityModel::gaussian(1.4, 2.2, Vec3(-0.4, 0.3, 0.2)),
      DensityModel::hydrogen1s(1.0, 1.0, Vec3(0.0, 0.3, 0.4)),
      DensityModel::superposition({DensityModel::point(1.0, Vec3(0, 0, 0.5)),
                                   DensityModel::point(-1.0, Vec3(0, 0, -0.5))}),
      DensityModel::superposition(
          {DensityModel::uniform_sphere(1.3, 0.8, Vec3(0.2, -0.1, 0.3)),
           DensityModel::gaussian(-0.7, 1.4, Vec3(-0.3, 0.2, 0.1)),
           DensityModel::exponential(0.5, 2.0, Vec3(0.1, 0.4, -0.2)),
           DensityModel::point(0.3, Vec3(0.5, 0.0, 0.2))},
          Vec3(0.05, 0.0, 0.0)),
  };
}

/// Rough size of degree-d radial moments of a model: what rounding in a
/// moment of that degree is measured against.
inline double moment_scale(const charge::DensityModel &model, int d) {
  double s = 0.0;
  for (const auto &c : model.components()) {
    const double shift = std::pow(1.0 + c.center.norm(), d);
    s += c.is_point() ? std::abs(c.amplitude) * shift
                      : std::abs(charge::component_even_moment(c, (d + 1) / 2)) * shift;
  }
  return std::max(1.0, s);
}

inline std::vector<Check> charge_suite() {
  Recorder r("charge");
  const auto models = model_battery();
  r.guarded("msr oracle", [&] {
    double worst_rel = 0.0;
    bool ok = true;
    for (const auto &m : models) {
      const auto q = oracle::msr_quadrature_table(m, 4, 3);
      for (const auto &[key, ref] : q.entries()) {
        const auto [l, mm, n] = key;
        const complex v = charge::msr_spherical(m, l, mm, n);
        const double d = std::abs(v - ref);
        // Entries that vanish analytically are compared on the scale of
        // the moments of the same degree.
        const double zero = 1e-12 * moment_scale(m, l + 2 * n);
        if (std::abs(ref) > zero) {
          worst_rel = std::max(worst_rel, d / std::abs(ref));
          ok = ok && d <= 1e-9 * std::abs(ref);
        } else {
          ok = ok && d <= zero;
        }
      }
    }
    r.expect_le("msr_spherical vs quadrature l<=4 n<=3 (rel)", worst_rel, 1e-9);
    r.expect_true("msr_spherical vs quadrature, zero entries within 1e-12 of scale", ok);
  });
  r.guarded("charge identities", [&] {
    double w_msr = 0.0, w_ft = 0.0, w_conj = 0.0;
    for (const auto &m : models) {
      const double Q = charge::total_charge(m);
      w_msr = std::max(w_msr, std::abs(charge::msr_spherical(m, 0, 0, 0) - Q));
      w_ft = std::max(w_ft, std::abs(charge::radial_fourier(m, Vec3(0, 0, 0)) - Q));
      for (int l = 0; l <= 4; ++l)
        for (int mm = 1; mm <= l; ++mm)
          for (int n = 0; n <= 2; ++n)
            w_conj = std::max(w_conj, std::abs(charge::msr_spherical(m, l, -mm, n) -
                                               sign_pow(mm) * std::conj(charge::msr_spherical(m, l, mm, n))));
    }
    r.expect_le("msr(0,0,0) = total charge", w_msr, 1e-12);
    r.expect_le("form factor at k=0 = total charge", w_ft, 1e-12);
    r.expect_le("msr(l,-m,n) = (-1)^m conj msr(l,m,n)", w_conj, 1e-12);
  });
  r.guarded("form factor", [&] {
    double worst = 0.0, tail = 0.0;
    for (const auto &m : {models[0], models[1], models[2], models[3]}) {
      for (double k : {0.3, 1.0, 2.5, 6.0})
        worst = std::max(worst, std::abs(charge::radial_fourier(m, k) - oracle::radial_fourier_quadrature(m, k)));
    }
    for (const auto &m : {models[0], models[1], models[2]})
      tail = std::max(tail, std::abs(charge::radial_fourier(m, 1e4)) / std::abs(charge::total_charge(m)));
    r.expect_le("radial_fourier vs radial quadrature", worst, 1e-10);
    r.expect_le("form factor decays at large k", tail, 1e-6);
  });
  r.guarded("cartesian", [&] {
    double conv = 0.0, tr = 0.0;
    for (const auto &m : models) {
      const auto table = charge::SphericalMSR::of(m, 4, 2);
      for (int l = 0; l <= 4; ++l)
        for (int n = 0; n <= 2; ++n) {
          const auto direct = charge::msr_cartesian(m, l, n);
          const auto conv_t = charge::convert_msr_spherical_to_cartesian(table, l, n);
          const double scale = moment_scale(m, l + 2 * n);
          for (const auto &[p, v] : direct.components())
            conv = std::max(conv, std::abs(conv_t[p] - v) / scale);
          for (const auto &[p, v] : direct.trace())
            tr = std::max(tr, std::abs(v) / scale);
        }
    }
    r.expect_le("spherical -> cartesian conversion = msr_cartesian", conv, 1e-10);
    r.expect_le("cartesian msr traceless", tr, 1e-12);
  });
  r.guarded("hydrogen moments", [&] {
    double worst = 0.0;
    for (int n = 0; n <= 4; ++n) {
      const double q = quad::integrate(
                           [&](double s) {
                             return four_pi * s * s * std::pow(s, 2 * n) * perturb::ground_state_density(s);
                           },
                           0.0, INFINITY, 1e-14)
                           .value;
      worst = std::max(worst, rel_dev(charge::hydrogen_even_moment(n), q));
    }
    r.expect_le("hydrogen <r^2n> vs radial quadrature", worst, 1e-12);
  });
  return r.take();
}

// ---------------------------------------------------------------- bipolar

/// Random nonoverlap geometry with (|a| + |b|)/|R| in [lo, hi].
inline expansion::BipolarGeometry random_geometry(std::mt19937_64 &rng, double lo = 0.15, double hi = 0.6) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double R = 0.5 + 2.0 * u(rng);
  const double ratio = lo + (hi - lo) * u(rng);
  const double split = 0.2 + 0.6 * u(rng);
  expansion::BipolarGeometry g;
  g.R = R * oracle::random_unit(rng);
  g.b = ratio * R * split * oracle::random_unit(rng);
  g.a = ratio * R * (1.0 - split) * oracle::random_unit(rng);
  return g;
}

/// Least-squares slope of log(err) against l_max, skipping the rounding floor.
inline double log_error_slope(const std::vector<double> &partial, double exact) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t L = 0; L < partial.size(); ++L) {
    const double e = std::abs(partial[L] - exact) / std::abs(exact);
    if (e < 1e-13)
      continue;
    const double x = static_cast<double>(L), y = std::log(e);
    sx += x, sy += y, sxx += x * x, sxy += x * y, ++n;
  }
  if (n < 3)
    return -INFINITY;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline std::vector<Check> bipolar_suite() {
  using namespace expansion;
  Recorder r("bipolar");
  r.guarded("four forms", [&] {
    std::mt19937_64 rng(21);
    double worst = 0.0, imag = 0.0;
    for (int t = 0; t < 25; ++t) {
      const auto g = random_geometry(rng);
      const Truncation tr{6, 0};
      const ExpansionValue v[4] = {eval_form1(g, tr), eval_form2(g, tr), eval_form3(g, tr), eval_form4(g, tr)};
      for (int i = 0; i < 4; ++i) {
        imag = std::max(imag, v[i].imag_residue / std::abs(v[i].value));
        for (int j = i + 1; j < 4; ++j)
          worst = std::max(worst, rel_dev(v[i].value, v[j].value));
      }
    }
    r.expect_le("forms 1-4 pairwise, 25 geometries, l_max=6", worst, 1e-9);
    r.expect_le("imaginary residue / magnitude", imag, 1e-10);
  });
  r.guarded("convergence", [&] {
    std::mt19937_64 rng(22);
    double excess = -INFINITY;
    for (int t = 0; t < 5; ++t) {
      const auto g = random_geometry(rng, 0.3, 0.6);
      const double exact = inverse_distance_direct(g);
      const Truncation tr{10, 0};
      for (const auto &v : {eval_form1(g, tr), eval_form2(g, tr), eval_form3(g, tr), eval_form4(g, tr)})
        excess = std::max(excess, log_error_slope(v.partial_sums, exact) - std::log(g.convergence_ratio()));
    }
    r.expect_le("log-error slope minus log ratio, l_max 0..10", excess, 0.0);
  });
  r.guarded("rotation", [&] {
    std::mt19937_64 rng(23);
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      const auto g = random_geometry(rng);
      const Eigen::Matrix3d Q =
          Eigen::AngleAxisd(0.3 + t, oracle::random_unit(rng)).toRotationMatrix();
      const BipolarGeometry h{Q * g.b, Q * g.a, Q * g.R};
      worst = std::max(worst, rel_dev(eval_form1(h, {6, 0}).value, eval_form1(g, {6, 0}).value));
    }
    r.expect_le("rotational invariance", worst, 1e-10);
  });
  r.guarded("addition theorem", [&] {
    std::mt19937_64 rng(24);
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      const Vec3 R = (0.5 + t * 0.4) * oracle::random_unit(rng);
      for (int l = 0; l <= 6; ++l)
        for (int lp = 0; l + lp <= 6; ++lp)
          for (int m = -l; m <= l; ++m)
            for (int mp = -lp; mp <= lp; ++mp) {
              const double scale = std::max(
                  1.0, std::abs(sf::irregular_solid_applied({l + lp, m + mp}, R)) + 1e-300);
              worst = std::max(worst, addition_theorem_residual(l, m, lp, mp, R) / scale);
            }
    }
    r.expect_le("addition theorem l+l'<=6, 5 R", worst, 1e-10);
  });
  r.guarded("rayleigh", [&] {
    std::mt19937_64 rng(25);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const double k = 0.5 + u(rng);
      const Vec3 kv = k * oracle::random_unit(rng);
      const Vec3 b = (u(rng) / k) * oracle::random_unit(rng);
      const Vec3 a = (u(rng) / k) * oracle::random_unit(rng);
      worst = std::max(worst, std::abs(rayleigh_partial_sum(kv, b, a, 20) -
                                       std::polar(1.0, kv.dot(b - a))));
    }
    r.expect_le("Rayleigh partial sum, k|b|,k|a|<=2, l_max=20", worst, 1e-9);
  });
  r.guarded("conjugation", [&] {
    const BipolarGeometry g{Vec3(0.1, 0.2, -0.1), Vec3(-0.2, 0.05, 0.15), Vec3(0.4, -0.3, 1.2)};
    double worst = 0.0;
    for (int l = 0; l <= 3; ++l)
      for (int lp = 0; lp <= 3; ++lp)
        for (int m = -l; m <= l; ++m)
          for (int mp = -lp; mp <= lp; ++mp)
            worst = std::max(worst, std::abs(form1_term(g, l, m, lp, mp) -
                                             std::conj(form1_term(g, l, -m, lp, -mp))));
    r.expect_le("term(l,m,l',m') = conj term(l,-m,l',-m')", worst, 1e-14);
  });
  return r.take();
}

// ----------------------------------------------------------------- energy

struct BatteryEntry {
  std::string label;
  energy::TwoBodySystem system;
};

/// Every pairing of sphere, Gaussian, exponential and hydrogen1s (unit
/// parameters) at separations 0, 0.5, 2, 10 along z, except H-H at R = 0
/// where the two protons coincide.
inline std::vector<BatteryEntry> energy_battery() {
  using charge::DensityModel;
  const std::vector<std::pair<std::string, DensityModel>> kinds = {
      {"sphere", DensityModel::uniform_sphere(1.0, 1.0)},
      {"gaussian", DensityModel::gaussian(1.0, 1.0)},
      {"exponential", DensityModel::exponential(1.0, 1.0)},
      {"hydrogen1s", DensityModel::hydrogen1s()},
  };
  std::vector<BatteryEntry> out;
  for (std::size_t i = 0; i < kinds.size(); ++i)
    for (std::size_t j = i; j < kinds.size(); ++j)
      for (double R : {0.0, 0.5, 2.0, 10.0}) {
        if (i == 3 && j == 3 && R == 0.0)
          continue;
        out.push_back({kinds[i].first + "-" + kinds[j].first + " R=" + std::to_string(R).substr(0, 4),
                       {kinds[i].second, kinds[j].second, Vec3(0, 0, R)}});
      }
  return out;
}

inline std::vector<Check> energy_suite() {
  using namespace energy;
  using charge::DensityModel;
  Recorder r("energy");
  r.guarded("routes", [&] {
    double worst = 0.0;
    for (const auto &e : energy_battery()) {
      const double d = energy_direct(e.system).value, f = energy_fourier(e.system).value;
      worst = std::max(worst, rel_dev(f, d, 1e-12));
    }
    r.expect_le("direct vs fourier on pairing battery", worst, 1e-7);
  });
  r.guarded("symmetry", [&] {
    double worst = 0.0;
    const std::vector<TwoBodySystem> systems = {
        {DensityModel::uniform_sphere(1.0, 1.0, Vec3(0.1, 0, 0)), DensityModel::gaussian(0.8, 1.3), Vec3(0.3, 0.4, 1.2)},
        {DensityModel::hydrogen1s(), DensityModel::exponential(0.6, 1.5, Vec3(0, 0.2, 0)), Vec3(0.5, -0.2, 0.9)},
        {DensityModel::point(1.0), DensityModel::gaussian(1.0, 0.7), Vec3(0, 0, 3.0)},
    };
    for (const auto &s : systems) {
      const auto t = s.swapped();
      worst = std::max(worst, rel_dev(energy_direct(s).value, energy_direct(t).value, 1e-12));
      worst = std::max(worst, rel_dev(energy_fourier(s).value, energy_fourier(t).value, 1e-12));
      worst = std::max(worst, rel_dev(energy_multipole(s, {6, 0}).value, energy_multipole(t, {6, 0}).value, 1e-12));
    }
    r.expect_le("W(rho1,rho2;R) = W(rho2,rho1;-R)", worst, 1e-10);
  });
  r.guarded("bilinearity", [&] {
    const TwoBodySystem s{DensityModel::uniform_sphere(1.0, 1.0), DensityModel::exponential(1.0, 1.0), Vec3(0, 0.3, 0.8)};
    const TwoBodySystem t{s.rho1.scaled(2.5), s.rho2.scaled(-0.4), s.R};
    double worst = 0.0;
    worst = std::max(worst, rel_dev(energy_direct(t).value, -1.0 * energy_direct(s).value));
    worst = std::max(worst, rel_dev(energy_fourier(t).value, -1.0 * energy_fourier(s).value));
    r.expect_le("W linear in each amplitude", worst, 1e-12);
  });
  r.guarded("closed forms", [&] {
    const double oracle_sg = 4.0 * std::pow(pi, 2.5) *
                             quad::integrate([](double x) { return x * std::erf(x); }, 0.0, 1.0, 1e-15).value;
    const double sg = closed_sphere_gaussian(1, 1, 1, 1);
    const TwoBodySystem SG{DensityModel::uniform_sphere(1, 1), DensityModel::gaussian(1, 1), Vec3::Zero()};
    r.expect_le("sphere-gaussian closed vs erf quadrature", rel_dev(sg, oracle_sg), 1e-8);
    r.expect_le("sphere-gaussian closed vs direct", rel_dev(sg, energy_direct(SG).value), 1e-7);
    const double se = closed_sphere_exponential(1, 1, 1, 1);
    const TwoBodySystem SE{DensityModel::uniform_sphere(1, 1), DensityModel::exponential(1, 1), Vec3::Zero()};
    r.expect_le("sphere-exponential closed vs 16pi^2(9/e-3)", rel_dev(se, 16 * pi * pi * (9 * std::exp(-1.0) - 3)), 1e-14);
    r.expect_le("sphere-exponential closed vs fourier", rel_dev(se, energy_fourier(SE).value), 1e-7);
    r.expect_le("sphere-exponential closed vs direct", rel_dev(se, energy_direct(SE).value), 1e-7);
  });
  r.guarded("multipole", [&] {
    double worst = 0.0;
    const TwoBodySystem s{DensityModel::uniform_sphere(1.0, 1.0), DensityModel::gaussian(1.0, 1.0), Vec3(2, 3, 6)};
    const double q = charge::total_charge(s.rho1) * charge::total_charge(s.rho2) / s.R.norm();
    for (int L = 0; L <= 6; ++L)
      worst = std::max(worst, rel_dev(energy_multipole(s, {L, 0}).value, q));
    r.expect_le("spherical bodies: multipole = q1 q2/R", worst, 1e-13);
    r.expect_le("separated sphere-gaussian overlap correction",
                std::abs(overlap_correction({s.rho1, s.rho2, Vec3(0, 0, 10)}, {4, 0}).value), 1e-10);
  });
  r.guarded("laplacian ladder", [&] {
    using LP = LambdaPoly;
    const auto d2 = distributional_laplacian_exp(2);
    const auto d3 = distributional_laplacian_exp(3);
    bool ok = d2.smooth_over_r == LP::monomial(-4, 3) && d2.smooth_plain == LP::monomial(1, 4) &&
              d2.delta_terms.size() == 1 && d2.delta_terms[0] == LP::monomial(8, 1, 1) &&
              d3.smooth_over_r == LP::monomial(-6, 5) && d3.smooth_plain == LP::monomial(1, 6) &&
              d3.delta_terms.size() == 2 && d3.delta_terms[0] == LP::monomial(16, 3, 1) &&
              d3.delta_terms[1] == LP::monomial(8, 1, 1);
    r.expect_true("Delta^2, Delta^3 of exp(-lambda r) exact coefficients", ok);
    // Smooth part of level j+1 equals the pointwise Laplacian of level j.
    const double lam = 1.3;
    double worst = 0.0;
    for (int j = 1; j <= 5; ++j) {
      const auto lo = distributional_laplacian_exp(j), hi = distributional_laplacian_exp(j + 1);
      for (double x : {0.3, 1.0, 2.5}) {
        const double h = 1e-3;
        auto f = [&](double s) { return lo.smooth_value(s, lam); };
        const double lapl = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h) + (f(x + h) - f(x - h)) / (h * x);
        worst = std::max(worst, rel_dev(lapl, hi.smooth_value(x, lam)));
      }
    }
    r.expect_le("smooth part of level j+1 = Laplacian of level j", worst, 1e-5);
  });
  return r.take();
}

// ---------------------------------------------------------------- perturb

inline std::vector<Check> perturb_suite() {
  using namespace perturb;
  using charge::DensityModel;
  Recorder r("perturb");
  r.guarded("e1 numeric", [&] {
    double worst = 0.0;
    for (auto kind : {SystemKind::hydrogen_proton, SystemKind::hydrogen_hydrogen})
      for (double R : {0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        const PerturbSystem sys{kind, 1.0, 1.0};
        worst = std::max(worst, rel_dev(e1_numeric(sys, R), e1_closed(sys, R), 1e-14));
      }
    r.expect_le("e1_numeric vs closed form, both systems", worst, 1e-8);
  });
  r.guarded("fourier route", [&] {
    double worst = 0.0;
    for (double R : {0.5, 1.0, 2.0, 4.0}) {
      const Vec3 Rv(0, 0, R);
      worst = std::max(worst, rel_dev(energy::energy_fourier({DensityModel::hydrogen1s(), DensityModel::point(1.0), Rv}).value,
                                      e1_hp_closed(R)));
      worst = std::max(worst, rel_dev(energy::energy_fourier({DensityModel::hydrogen1s(), DensityModel::hydrogen1s(), Rv}).value,
                                      e1_hh_closed(R)));
    }
    r.expect_le("energy_fourier = closed E1", worst, 1e-7);
  });
  r.guarded("small R sign", [&] {
    bool ok = true;
    for (double R = 0.01; R < 0.5; R += 0.01)
      ok = ok && e1_hp_closed(R) > 0 && e1_hh_closed(R) > 0;
    r.expect_true("both E1 positive for R < 0.5", ok);
  });
  r.guarded("monopole", [&] {
    double worst = 0.0;
    for (double k : {0.3, 1.0, 2.0, 3.7}) {
      const Vec3 kv = k * Vec3(0.3, 0.5, 0.8).normalized();
      const complex full = oracle::w_hh_expectation_full(kv);
      worst = std::max(worst, std::abs(full - oracle::w_hh_expectation_monopole(k)) / std::abs(full));
    }
    r.expect_le("full vs monopole-restricted expectation", worst, 1e-10);
  });
  r.guarded("pure overlap", [&] {
    double worst = 0.0;
    for (double R : {0.5, 2.0, 8.0})
      for (int L : {0, 2, 6}) {
        const Vec3 Rv(0.2, -0.3, R);
        worst = std::max(worst, std::abs(energy::energy_multipole({DensityModel::hydrogen1s(), DensityModel::hydrogen1s(), Rv}, {L, 0}).value));
        worst = std::max(worst, std::abs(energy::energy_multipole({DensityModel::hydrogen1s(), DensityModel::point(1.0), Rv}, {L, 0}).value));
      }
    r.expect_le("multipole series vanishes for H-H and H-p", worst, 1e-15);
    r.expect_le("H-H overlap correction at R=2 = closed E1",
                rel_dev(energy::overlap_correction({DensityModel::hydrogen1s(), DensityModel::hydrogen1s(), Vec3(0, 0, 2)}, {4, 0}).value,
                        e1_hh_closed(2.0)),
                1e-8);
  });
  r.guarded("normalization", [&] {
    const double n = quad::integrate([](double s) { return four_pi * s * s * ground_state_density(s); }, 0.0, INFINITY, 1e-14).value;
    r.expect_le("ground state normalization", std::abs(n - 1.0), 1e-12);
  });
  return r.take();
}

inline const std::vector<std::string> &suite_names() {
  static const std::vector<std::string> names = {"specfun", "charge", "bipolar", "energy", "perturb"};
  return names;
}

/// Runs one suite by name, or every suite for "all".
inline std::vector<Check> run_suite(const std::string &name) {
  if (name == "all") {
    std::vector<Check> all;
    for (const auto &n : suite_names()) {
      auto c = run_suite(n);
      all.insert(all.end(), c.begin(), c.end());
    }
    return all;
  }
  if (name == "specfun")
    return specfun_suite();
  if (name == "charge")
    return charge_suite();
  if (name == "bipolar")
    return bipolar_suite();
  if (name == "energy")
    return energy_suite();
  if (name == "perturb")
    return perturb_suite();
  throw ParseError("unknown suite '" + name + "'");
}

} // namespace bipolar::verify
