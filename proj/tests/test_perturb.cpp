#include "bipolar/energy.hpp"
#include "bipolar/oracle.hpp"
#include "bipolar/perturb.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace bipolar;
using namespace bipolar::perturb;
using charge::DensityModel;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const PerturbSystem HH{SystemKind::hydrogen_hydrogen};
const PerturbSystem HP{SystemKind::hydrogen_proton};

// Real-axis inversion with the bare proton term split off analytically:
// E(R) = e^2/R + (2/pi) \int_0^K (H(k) - 1) sin(kR)/(kR) dk, with H - 1 ~ k^-4.
double real_axis_inversion(bool hh, double R) {
  double s = 0;
  for (const auto &[k, w] : oracle::composite_rule(0, 2000, 8000, 12)) {
    const double F = form_factor_1s(k);
    const double g = hh ? F * F - 2 * F : -F;
    s += w * g * std::sin(k * R) / (k * R);
  }
  return 1 / R + 2 / pi * s;
}

double cubic(double x) { return 4 * x * x * x + 18 * x * x - 15 * x - 24; }

} // namespace

TEST_CASE("ground state normalization") {
  for (double a0 : {1.0, 0.5, 2.0}) {
    double s = 0;
    for (const auto &[r, w] : oracle::composite_rule(0, 60 * a0, 60, 24))
      s += w * four_pi * r * r * ground_state_density(r, a0);
    CHECK_THAT(s, WithinAbs(1.0, 1e-12));
  }
  CHECK_THROWS_AS((PerturbSystem{SystemKind::hydrogen_proton, -1.0}).validate(), DomainError);
}

TEST_CASE("H-H operator transform") {
  const Vec3 z = Vec3::Zero(), k(0.3, -0.8, 1.1);
  CHECK(std::abs(w_fourier_hh(z, z, k)) == 0.0);
  CHECK(std::abs(w_fourier_hh_series(z, z, k, 4)) < 1e-15);
  CHECK_THROWS_AS(w_fourier_hh(Vec3(1, 0, 0), z, z), SingularityError);
  CHECK_THROWS_AS(w_fourier_hh_monopole(1, 1, 0), SingularityError);

  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.1, 1.5);
  for (int i = 0; i < 10; ++i) {
    const Vec3 a = u(rng) * oracle::random_unit(rng), b = u(rng) * oracle::random_unit(rng);
    const Vec3 q = u(rng) * oracle::random_unit(rng);
    const complex closed = w_fourier_hh(a, b, q);
    CHECK(std::abs(w_fourier_hh_series(a, b, q, 25) - closed) < 1e-10 * std::max(1.0, std::abs(closed)));
  }

  // direction average at fixed lengths by product quadrature of the series form
  const double la = 0.7, lb = 1.2;
  const auto rule = oracle::angular_rule(14, 28);
  complex avg = 0;
  for (const auto &na : rule)
    for (const auto &nb : rule)
      avg += na.weight * nb.weight * w_fourier_hh_series(la * na.direction, lb * nb.direction, k, 14);
  avg /= four_pi * four_pi;
  CHECK(std::abs(avg - w_fourier_hh_monopole(la, lb, k.norm())) < 1e-10);

  // large k: proton-proton term dominates
  for (double kk : {1e3, 1e5})
    CHECK_THAT(w_fourier_hh_monopole(0.7, 1.2, kk), WithinRel(four_pi / (kk * kk), 2e-3));
}

TEST_CASE("H-p energy in k space") {
  for (double k : {1e2, 1e4})
    CHECK_THAT(e1_tilde_hp(k), WithinRel(four_pi / (k * k), 1e-6));
  CHECK_THAT(e1_tilde_hp(2.0), WithinRel(0.75 * pi, 1e-15));
  CHECK_THAT(e1_tilde_hp(0.0), WithinRel(2 * pi, 1e-15));
  CHECK_THAT(e1_tilde_hp_limit(), WithinRel(2 * pi, 1e-15));
  CHECK_THAT(e1_tilde_hp(0.0, 0.5, 2.0), WithinRel(e1_tilde_hp_limit(0.5, 2.0), 1e-15));
  // both sides of the series switch
  // series branch against the unexpanded bracket just below the switch
  const double ks = 0.999e-3;
  CHECK_THAT(e1_tilde_hp(ks), WithinRel(four_pi / (ks * ks) * (1 - form_factor_1s(ks)), 1e-8));
  CHECK_THAT(e1_tilde_hp(1e-5), WithinRel(2 * pi * (1 - 1.5 * 0.25e-10), 1e-14));
  CHECK_THROWS_AS(e1_tilde_hp(-1.0), DomainError);

  // expectation of the operator over the ground state
  const auto rule = oracle::angular_rule(30, 60);
  for (double kk : {0.5, 2.0, 5.0}) {
    const Vec3 k = kk * Vec3(0.6, 0, 0.8);
    const complex A = oracle::hydrogen_phase_average(k, +1.0, 1.0, rule);
    const complex expect = -four_pi / (kk * kk) * A;
    CHECK(std::abs(expect - e1_tilde_hp(kk)) < 1e-8 * e1_tilde_hp(kk));
  }
}

TEST_CASE("H-H energy in k space") {
  for (double k : {1e-4, 1e-2, 0.5, 2.0, 10.0}) {
    const double kern = four_pi / (k * k);
    CHECK_THAT(e1_tilde_hh(k) * kern, WithinRel(std::pow(e1_tilde_hp(k), 2), 1e-12));
  }
  CHECK(e1_tilde_hh(0.0) == 0.0);
  CHECK(e1_tilde_hh(1e-6) < 1e-10);
  const double ks = 0.999e-3;
  CHECK_THAT(e1_tilde_hh(ks), WithinRel(four_pi / (ks * ks) * std::pow(1 - form_factor_1s(ks), 2), 1e-8));
  for (double kk : {0.3, 1.0, 2.0, 4.0}) {
    const Vec3 k = kk * Vec3(0.0, 0.6, 0.8);
    const complex full = oracle::w_hh_expectation_full(k);
    CHECK(std::abs(full - e1_tilde_hh(kk)) < 1e-8 * e1_tilde_hh(kk));
    // only the monopole part of the operator contributes
    CHECK(std::abs(full - oracle::w_hh_expectation_monopole(kk)) < 1e-10 * std::abs(full));
    CHECK(std::abs(full.imag()) < 1e-12 * std::abs(full));
  }
}

TEST_CASE("closed forms") {
  CHECK_THAT(e1_hp_closed(1.0), WithinRel(2 * std::exp(-2.0), 1e-15));
  CHECK_THAT(e1_hp_closed(1.0), WithinAbs(0.27067, 1e-5));
  CHECK_THAT(e1_hh_closed(2.0), WithinRel(25.0 / 12 * std::exp(-4.0) * -0.5, 1e-14));
  CHECK_THAT(e1_hh_closed(2.0), WithinAbs(-0.019078, 1e-6));
  for (double R : {1e-4, 1e-6}) {
    CHECK_THAT(e1_hp_closed(R) * R, WithinRel(1.0, 3 * R));
    CHECK_THAT(e1_hh_closed(R) * R, WithinRel(1.0, 3 * R));
  }
  CHECK(e1_hp_closed(60.0) < 1e-50);
  CHECK(std::abs(e1_hh_closed(60.0)) < 1e-48);
  for (double R = 0.01; R < 0.5; R += 0.01) {
    CHECK(e1_hp_closed(R) > 0);
    CHECK(e1_hh_closed(R) > 0);
  }
  // H-H changes sign once, at the positive root of the cubic
  double lo = 0, hi = 5;
  for (int i = 0; i < 200; ++i)
    (cubic(0.5 * (lo + hi)) < 0 ? lo : hi) = 0.5 * (lo + hi);
  const double root = 0.5 * (lo + hi);
  CHECK(e1_hh_closed(root * 0.999) > 0);
  CHECK(e1_hh_closed(root * 1.001) < 0);
  for (double R = root * 1.01; R < 30; R *= 1.2)
    CHECK(e1_hh_closed(R) < 0);
  CHECK_THROWS_AS(e1_hp_closed(0.0), DomainError);
  CHECK_THROWS_AS(e1_hh_closed(-1.0), DomainError);
  // units: a0 and e scale out
  CHECK_THAT(e1_hp_closed(1.3, 0.5, 2.0), WithinRel(4.0 / 0.5 * e1_hp_closed(2.6), 1e-14));
  CHECK_THAT(e1_hh_closed(1.3, 0.5, 2.0), WithinRel(4.0 / 0.5 * e1_hh_closed(2.6), 1e-14));
}

TEST_CASE("numeric inversion matches the closed forms") {
  for (const auto &s : {HP, HH})
    for (double R : {0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      const double c = e1_closed(s, R);
      const auto n = e1_numeric_detailed(s, R);
      CHECK(std::abs(n.value - c) <= std::max(1e-8 * std::abs(c), 1e-14));
      CHECK(n.error_estimate <= 1e-8 * std::abs(c) + 1e-14);
    }
  CHECK(std::abs(e1_numeric(HP, 8.0)) < 1e-5);
  CHECK(std::abs(e1_numeric(HH, 8.0)) < 1e-5);
  const PerturbSystem scaled{SystemKind::hydrogen_hydrogen, 0.5, 2.0};
  CHECK_THAT(e1_numeric(scaled, 1.1), WithinRel(e1_hh_closed(1.1, 0.5, 2.0), 1e-8));
  CHECK_THROWS_AS(e1_numeric(HP, 0.0), DomainError);
  CHECK(e1_tilde(HH, 1.0) == e1_tilde_hh(1.0));
  CHECK(e1_tilde(HP, 1.0) == e1_tilde_hp(1.0));
}

TEST_CASE("numeric inversion against a real-axis quadrature") {
  for (bool hh : {false, true})
    for (double R : {0.25, 1.0, 2.0}) {
      const double ref = real_axis_inversion(hh, R);
      CHECK_THAT(e1_numeric(hh ? HH : HP, R), WithinRel(ref, 1e-6));
    }
}

TEST_CASE("perturbation energy equals the classical cloud energy") {
  const auto H = DensityModel::hydrogen1s(), p = DensityModel::point(1);
  for (double R : {0.5, 1.0, 2.0, 4.0}) {
    const energy::TwoBodySystem hp{H, p, Vec3(0, 0, R)}, hh{H, H, Vec3(0, 0, R)};
    CHECK_THAT(energy::energy_fourier(hp).value, WithinRel(e1_hp_closed(R), 1e-7));
    CHECK_THAT(energy::energy_fourier(hh).value, WithinRel(e1_hh_closed(R), 1e-7));
    // the long-range series of both systems vanishes identically
    for (int L = 0; L <= 8; L += 2) {
      CHECK(std::abs(energy::energy_multipole(hh, {L, 0}).value) < 1e-15);
      CHECK(std::abs(energy::energy_multipole(hp, {L, 0}).value) < 1e-15);
    }
  }
}
