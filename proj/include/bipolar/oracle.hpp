#pragma once

/// \file oracle.hpp
///
/// Brute-force reference evaluations used by the test suites and the
/// `verify` command: product angular quadrature, moments and form factors
/// by explicit integration in each component's own frame, and angular
/// averages of the k-space interaction operator.

#include "bipolar/charge.hpp"
#include "bipolar/perturb.hpp"
#include "bipolar/quadrature.hpp"
#include "bipolar/specfun.hpp"
#include "bipolar/vec.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <random>
#include <utility>
#include <vector>

namespace bipolar::oracle {

struct AngularNode {
  Vec3 direction;
  double weight;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
inline std::vector<std::pair<double, double>> gauss_legendre(int n) {
  std::vector<std::pair<double, double>> gl;
  for (double x : boost::math::legendre_p_zeros<double>(n)) {
    const double dp = boost::math::legendre_p_prime(n, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.emplace_back(x, w);
    if (x != 0.0)
      gl.emplace_back(-x, w);
  }
  return gl;
}

/// Composite Gauss-Legendre rule on [a, b].
inline std::vector<std::pair<double, double>> composite_rule(double a, double b, int panels,
                                                             int order = 20) {
  const auto gl = gauss_legendre(order);
  std::vector<std::pair<double, double>> out;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p)
    for (const auto &[x, w] : gl)
      out.emplace_back(a + h * (p + 0.5 * (x + 1.0)), 0.5 * h * w);
  return out;
}

/// Gauss-Legendre in cos(theta) times the trapezoid rule in phi. Exact for
/// polynomials on the sphere of degree < min(2 n_theta, n_phi).
inline std::vector<AngularNode> angular_rule(int n_theta, int n_phi) {
  std::vector<AngularNode> out;
  for (const auto &[x, w] : gauss_legendre(n_theta)) {
    const double s = std::sqrt(1.0 - x * x);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * pi * j / n_phi;
      out.push_back({Vec3(s * std::cos(phi), s * std::sin(phi), x), w * 2.0 * pi / n_phi});
    }
  }
  return out;
}

/// \int over the unit sphere of f(direction).
template <typename T, typename F> T sphere_integral(const std::vector<AngularNode> &rule, F &&f) {
  T s{};
  for (const auto &n : rule)
    s += n.weight * f(n.direction);
  return s;
}

/// r^{l+2n} conj(Y_lm(rhat)), zero-safe.
inline complex moment_kernel(int l, int m, int n, const Vec3 &r) {
  const double rn = r.norm();
  if (rn == 0.0)
    return (l == 0 && n == 0) ? complex(1.0 / std::sqrt(four_pi)) : complex(0.0);
  return std::pow(rn, l + 2 * n) * std::conj(sf::sph_harm({l, m}, r));
}

/// Table of msr_spherical by quadrature: each shaped component is
/// integrated in spherical coordinates about its own center (composite
/// Gauss-Legendre in radius, product rule in angle), point components are
/// evaluated at their location.
inline charge::SphericalMSR msr_quadrature_table(const charge::DensityModel &model, int l_max,
                                                 int n_max) {
  const int deg = l_max + 2 * n_max;
  const auto rule = angular_rule(deg / 2 + 2, deg + 2);
  const std::size_t nlm = static_cast<std::size_t>((l_max + 1) * (l_max + 1));
  std::vector<complex> acc(nlm * static_cast<std::size_t>(n_max + 1), 0.0);
  auto add_point = [&](double weight, const Vec3 &r) {
    const double rn = r.norm();
    if (rn == 0.0) {
      acc[0] += weight / std::sqrt(four_pi);
      return;
    }
    const auto y = sf::sph_harm_table(l_max, r);
    for (int l = 0; l <= l_max; ++l)
      for (int n = 0; n <= n_max; ++n) {
        const double rp = std::pow(rn, l + 2 * n);
        for (int m = -l; m <= l; ++m) {
          const auto i = static_cast<std::size_t>(sf::lm_index(l, m));
          acc[static_cast<std::size_t>(n) * nlm + i] += weight * rp * std::conj(y[i]);
        }
      }
  };
  for (const auto &c : model.components()) {
    if (c.is_point()) {
      add_point(c.amplitude, c.center);
      continue;
    }
    const bool sphere = c.shape == charge::Shape::sphere;
    const double cut = sphere ? c.scale : charge::component_cutoff(c);
    for (const auto &[s, ws] : composite_rule(0.0, cut, sphere ? 1 : 60, deg / 2 + 12)) {
      const double rho = charge::component_density(c, s);
      for (const auto &node : rule)
        add_point(ws * s * s * rho * node.weight, c.center + s * node.direction);
    }
  }
  charge::SphericalMSR out(l_max, n_max);
  for (int l = 0; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m)
      for (int n = 0; n <= n_max; ++n)
        out.set(l, m, n,
                std::sqrt(four_pi / (2.0 * l + 1.0)) *
                    acc[static_cast<std::size_t>(n) * nlm + static_cast<std::size_t>(sf::lm_index(l, m))]);
  return out;
}

inline complex msr_quadrature(const charge::DensityModel &model, int l, int m, int n) {
  return msr_quadrature_table(model, l, n).at(l, m, n);
}

/// 4 pi \int rho(r) j0(k r) r^2 dr for a model whose components all sit at
/// its center.
inline double radial_fourier_quadrature(const charge::DensityModel &model, double k) {
  double total = 0.0;
  for (const auto &c : model.components()) {
    if (c.is_point()) {
      total += c.amplitude;
      continue;
    }
    const double cut = c.shape == charge::Shape::sphere ? c.scale : charge::component_cutoff(c);
    total += four_pi * quad::integrate(
                           [&](double r) {
                             return r * r * charge::component_density(c, r) *
                                    sf::spherical_bessel_std(0, k * r);
                           },
                           0.0, cut, 1e-13)
                           .value;
  }
  return total;
}

/// < e^{i s k.r} - 1 > over |psi_1s|^2, integrated over direction and radius
/// without using the monopole reduction. s = +1 or -1.
inline complex hydrogen_phase_average(const Vec3 &k, double s, double a0,
                                      const std::vector<AngularNode> &rule) {
  complex total = 0.0;
  for (const auto &[r, wr] : composite_rule(0.0, 60.0 * a0, 60)) {
    const complex ang = sphere_integral<complex>(
        rule, [&](const Vec3 &w) { return std::polar(1.0, s * r * k.dot(w)) - 1.0; });
    total += wr * r * r * perturb::ground_state_density(r, a0) * ang;
  }
  return total;
}

/// Expectation of w_fourier_hh over the product ground state, from full
/// direction-resolved averages of each electron's phase factor.
inline complex w_hh_expectation_full(const Vec3 &k, double a0 = 1.0, double e = 1.0) {
  const auto rule = angular_rule(40, 80);
  const complex A = hydrogen_phase_average(k, +1.0, a0, rule);
  const complex B = hydrogen_phase_average(k, -1.0, a0, rule);
  return four_pi * e * e / k.squaredNorm() * A * B;
}

/// Same expectation keeping only the monopole (direction-averaged) operator.
inline double w_hh_expectation_monopole(double k, double a0 = 1.0, double e = 1.0) {
  auto avg = [&](auto &&g) {
    return quad::integrate([&](double r) { return four_pi * r * r * perturb::ground_state_density(r, a0) * g(r); },
                           0.0, 60.0 * a0, 1e-13)
        .value;
  };
  const double A = avg([&](double r) { return sf::spherical_bessel_std(0, k * r) - 1.0; });
  return four_pi * e * e / (k * k) * A * A;
}

/// Uniform direction from a seeded engine.
inline Vec3 random_unit(std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  Vec3 v;
  do
    v = Vec3(g(rng), g(rng), g(rng));
  while (v.norm() < 1e-8);
  return v.normalized();
}

} // namespace bipolar::oracle
