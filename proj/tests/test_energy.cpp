#include "bipolar/delta_series.hpp"
#include "bipolar/energy.hpp"
#include "bipolar/oracle.hpp"
#include "bipolar/perturb.hpp"
#include "verify.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace bipolar;
using namespace bipolar::energy;
using charge::DensityModel;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

TwoBodySystem sys(const DensityModel &a, const DensityModel &b, double z) { return {a, b, Vec3(0, 0, z)}; }

// 4 pi^{5/2} \int_0^1 r erf(r) dr
double sphere_gaussian_erf_oracle() {
  double s = 0;
  for (const auto &[r, w] : oracle::composite_rule(0, 1, 4, 30))
    s += w * r * std::erf(r);
  return 4 * std::pow(pi, 2.5) * s;
}

const Rational &coeff(const LambdaPoly &p, int lambda_power, int pi_power) {
  static const Rational zero(0);
  auto it = p.terms().find({lambda_power, pi_power});
  return it == p.terms().end() ? zero : it->second;
}

bool is_monomial(const LambdaPoly &p, long long num, long long den, int lambda_power, int pi_power) {
  return p.terms().size() == 1 && coeff(p, lambda_power, pi_power) == Rational(num, den);
}

} // namespace

TEST_CASE("point charges: every route gives Coulomb's law") {
  const auto s = sys(DensityModel::point(1.5), DensityModel::point(-0.4), 2.5);
  const double ref = 1.5 * -0.4 / 2.5;
  CHECK_THAT(energy_direct(s).value, WithinRel(ref, 1e-14));
  CHECK_THAT(energy_fourier(s).value, WithinRel(ref, 1e-10));
  for (int L : {0, 2, 5})
    CHECK_THAT(energy_multipole(s, {L, 0}).value, WithinRel(ref, 1e-14));
  CHECK(std::abs(overlap_correction(s, {4, 0}).value) < 1e-10);
  CHECK_THROWS_AS(energy_direct(sys(DensityModel::point(1), DensityModel::point(1), 0)), SingularityError);
  CHECK_THROWS_AS(energy_multipole(sys(DensityModel::gaussian(1, 1), DensityModel::point(1), 0), {2, 0}),
                  SingularityError);
}

TEST_CASE("sphere-gaussian at coincident centers") {
  const double oracle_value = sphere_gaussian_erf_oracle();
  CHECK_THAT(oracle_value, WithinAbs(22.00, 5e-3));
  CHECK_THAT(closed_sphere_gaussian(1, 1, 1, 1), WithinRel(oracle_value, 1e-8));
  const auto s = sys(DensityModel::uniform_sphere(1, 1), DensityModel::gaussian(1, 1), 0);
  CHECK_THAT(energy_direct(s).value, WithinRel(oracle_value, 1e-7));
  CHECK_THAT(energy_fourier(s).value, WithinRel(oracle_value, 1e-7));

  // a -> 0: q1 phi2(0) = (4 pi C1 a^3/3)(2 pi C2/lam)
  for (double a : {1e-2, 1e-3}) {
    const double lead = 4 * pi * a * a * a / 3 * (2 * pi / 1.3);
    CHECK_THAT(closed_sphere_gaussian(0.7, 1.0 / 0.7, a, 1.3), WithinRel(lead, 2 * a * a));
  }
  // bilinearity
  CHECK_THAT(closed_sphere_gaussian(2.5, -0.3, 0.8, 1.7),
             WithinRel(2.5 * -0.3 * closed_sphere_gaussian(1, 1, 0.8, 1.7), 1e-14));
  // general parameters against both routes
  const auto t = sys(DensityModel::uniform_sphere(0.6, 1.4), DensityModel::gaussian(1.2, 0.45), 0);
  CHECK_THAT(energy_direct(t).value, WithinRel(closed_sphere_gaussian(0.6, 1.2, 1.4, 0.45), 1e-9));
  double erf_int = 0;
  for (const auto &[r, w] : oracle::composite_rule(0, 1.4, 8, 30))
    erf_int += w * r * std::erf(std::sqrt(0.45) * r);
  CHECK_THAT(closed_sphere_gaussian(0.6, 1.2, 1.4, 0.45),
             WithinRel(four_pi * 0.6 * 1.2 * std::pow(pi / 0.45, 1.5) * erf_int, 1e-12));
  // the printed three-term expression only matches at unit size and decay
  CHECK_THAT(printed_sphere_gaussian(1, 1, 1, 1), WithinRel(closed_sphere_gaussian(1, 1, 1, 1), 1e-14));
  CHECK(std::abs(printed_sphere_gaussian(0.6, 1.2, 1.4, 0.45) / closed_sphere_gaussian(0.6, 1.2, 1.4, 0.45) - 1) > 1e-2);
  CHECK_THROWS_AS(closed_sphere_gaussian(1, 1, 0, 1), DomainError);
}

TEST_CASE("sphere-gaussian printed series") {
  const auto d = taylor_sphere_gaussian(1, 1, 1, 1, 1);
  CHECK_THAT(d.value, WithinRel(8 * pi / 3, 1e-15));
  CHECK(d.inconsistent_with_exact);
  CHECK(taylor_sphere_gaussian(1, 1, 0, 1, 2).value == 0.0);
  CHECK_THROWS_AS(taylor_sphere_gaussian(1, 1, 1, 1, 3), UnsupportedEvaluation);

  // independent expansion of the exact result: the leading coefficient
  // carries pi^2, the printed one pi
  const double a = 1e-2, lam = 1.0;
  const double exact = closed_sphere_gaussian(1, 1, a, lam);
  CHECK_THAT(exact_small_a_series(1, 1, a, lam, 1), WithinRel(exact, 1e-3));
  CHECK_THAT(exact_small_a_series(1, 1, a, lam, 1), WithinRel(8 * pi * pi * a * a * a / 3, 1e-15));
  CHECK_THAT(exact_small_a_series(1, 1, a, lam, 2), WithinRel(exact, 1e-6));
  CHECK_THAT(taylor_sphere_gaussian(1, 1, a, lam, 1).value / exact, WithinRel(1 / pi, 1e-3));
}

TEST_CASE("sphere-exponential at coincident centers") {
  const double ref = 16 * pi * pi * (9 * std::exp(-1.0) - 3);
  CHECK_THAT(ref, WithinAbs(49.095, 5e-3));
  CHECK_THAT(closed_sphere_exponential(1, 1, 1, 1), WithinRel(ref, 1e-14));
  const auto s = sys(DensityModel::uniform_sphere(1, 1), DensityModel::exponential(1, 1), 0);
  CHECK_THAT(energy_fourier(s).value, WithinRel(ref, 1e-7));
  CHECK_THAT(energy_direct(s).value, WithinRel(ref, 1e-7));
  // vanishing sphere: O(a^3)
  const double r1 = closed_sphere_exponential(1, 1, 1e-2, 1), r2 = closed_sphere_exponential(1, 1, 5e-3, 1);
  CHECK_THAT(r1 / r2, WithinRel(8.0, 1e-2));
  // concentrated exponential
  CHECK(std::abs(closed_sphere_exponential(1, 1, 1, 1e3)) < 1e-6);
  const auto t = sys(DensityModel::uniform_sphere(1.1, 0.7), DensityModel::exponential(0.8, 2.3), 0);
  CHECK_THAT(energy_direct(t).value, WithinRel(closed_sphere_exponential(1.1, 0.8, 0.7, 2.3), 1e-9));
}

TEST_CASE("hydrogen systems") {
  const auto H = DensityModel::hydrogen1s(), p = DensityModel::point(1);
  CHECK_THAT(energy_fourier(sys(H, p, 1.0)).value, WithinRel(perturb::e1_hp_closed(1.0), 1e-8));
  CHECK_THAT(energy_direct(sys(H, p, 1.0)).value, WithinRel(perturb::e1_hp_closed(1.0), 1e-8));
  for (double R : {0.5, 2.0, 5.0})
    for (int L : {0, 3, 6})
      CHECK(std::abs(energy_multipole(sys(H, H, R), {L, 0}).value) < 1e-15);
  CHECK_THAT(overlap_correction(sys(H, H, 2.0), {6, 0}).value, WithinRel(perturb::e1_hh_closed(2.0), 1e-8));
}

TEST_CASE("multipole examples and spherical reduction") {
  const auto S = DensityModel::uniform_sphere(1, 1), G = DensityModel::gaussian(1, 1);
  const double q1 = charge::total_charge(S), q2 = charge::total_charge(G);
  const auto far = sys(S, G, 10);
  CHECK_THAT(energy_multipole(far, {6, 0}).value, WithinRel(q1 * q2 / 10, 1e-9));
  CHECK_THAT(energy_direct(far).value, WithinRel(q1 * q2 / 10, 1e-9));
  CHECK(std::abs(overlap_correction(far, {6, 0}).value) < 1e-10);
  CHECK_NOTHROW(energy_multipole(far, {expansion::spherical_l_max, 0}));
  CHECK_THROWS_AS(energy_multipole(far, {expansion::spherical_l_max + 1, 0}), DomainError);
  for (const auto &a : verify::model_battery())
    for (const auto &b : verify::model_battery()) {
      if (!a.spherically_symmetric_about_center() || !b.spherically_symmetric_about_center())
        continue;
      for (int L : {0, 1, 4}) {
        const Vec3 R(0.3, -1.2, 1.1);
        const double ref = charge::total_charge(a) * charge::total_charge(b) / R.norm();
        CHECK_THAT(energy_multipole({a, b, R}, {L, 0}).value, WithinAbs(ref, 1e-14 * std::max(1.0, std::abs(ref))));
      }
    }
}

TEST_CASE("offset distributions: multipole series converges to the direct energy") {
  const auto A = DensityModel::superposition(
      {DensityModel::gaussian(1.0, 2.0, Vec3(0.2, 0.0, 0.1)), DensityModel::point(-0.5, Vec3(-0.3, 0.1, 0))});
  const auto B = DensityModel::superposition(
      {DensityModel::uniform_sphere(0.8, 0.5, Vec3(0, 0.25, -0.1)), DensityModel::point(0.4, Vec3(0.1, -0.2, 0.3))});
  const TwoBodySystem s{A, B, Vec3(1.0, 2.0, 6.0)};
  const double direct = energy_direct(s).value;
  CHECK_THAT(energy_fourier(s).value, WithinRel(direct, 1e-8));
  CHECK_THAT(energy_multipole(s, {10, 0}).value, WithinRel(direct, 1e-8));
  double prev = INFINITY;
  for (int L = 0; L <= 8; ++L) {
    const double e = std::abs(energy_multipole(s, {L, 0}).value - direct);
    CHECK(e <= prev * 1.0001 + 1e-14);
    prev = e;
  }
}

TEST_CASE("route agreement on the pairing battery") {
  for (const auto &entry : verify::energy_battery()) {
    INFO(entry.label);
    const double d = energy_direct(entry.system).value;
    const double f = energy_fourier(entry.system).value;
    CHECK(std::abs(d - f) <= 1e-7 * std::max(std::abs(d), 1e-12));
  }
}

TEST_CASE("swap symmetry and bilinearity") {
  for (const auto &entry : verify::energy_battery()) {
    INFO(entry.label);
    const auto &s = entry.system;
    const auto t = s.swapped();
    const double d = energy_direct(s).value, f = energy_fourier(s).value;
    CHECK(std::abs(energy_direct(t).value - d) <= 1e-10 * std::max(std::abs(d), 1e-12));
    CHECK(std::abs(energy_fourier(t).value - f) <= 1e-10 * std::max(std::abs(f), 1e-12));
    if (s.R.norm() > 0) {
      const double m = energy_multipole(s, {4, 0}).value;
      CHECK(std::abs(energy_multipole(t, {4, 0}).value - m) <= 1e-10 * std::max(std::abs(m), 1e-12));
    }
    const TwoBodySystem u{s.rho1.scaled(2.5), s.rho2.scaled(-0.75), s.R};
    const double k = 2.5 * -0.75;
    CHECK(std::abs(energy_direct(u).value - k * d) <= 1e-12 * std::abs(k * d) + 1e-14);
    CHECK(std::abs(energy_fourier(u).value - k * f) <= 1e-12 * std::abs(k * f) + 1e-14);
  }
}

TEST_CASE("long-range limit of charged bodies") {
  const auto A = DensityModel::exponential(1, 1), B = DensityModel::gaussian(1, 0.8);
  const double qq = charge::total_charge(A) * charge::total_charge(B);
  double prev = INFINITY;
  for (double R : {2.0, 4.0, 8.0, 16.0, 32.0}) {
    const double dev = std::abs(energy_fourier(sys(A, B, R)).value * R / qq - 1);
    CHECK(dev <= prev);
    // exponential tail e^{-lambda R} times the sphere-like polynomial prefactor
    CHECK(dev <= (1 + R * R) * std::exp(-R));
    prev = dev;
  }
}

TEST_CASE("error estimates are reported") {
  const auto s = sys(DensityModel::uniform_sphere(1, 1), DensityModel::exponential(1, 1), 0.5);
  const auto d = energy_direct(s), f = energy_fourier(s);
  CHECK(d.method == Method::direct);
  CHECK(f.method == Method::fourier);
  CHECK(d.error_estimate >= 0);
  CHECK(d.error_estimate < 1e-8 * std::abs(d.value));
  CHECK(f.error_estimate < 1e-8 * std::abs(f.value));
  const auto m = energy_multipole(sys(DensityModel::point(1, Vec3(0, 0, 0.2)), DensityModel::point(1), 3), {3, 0});
  REQUIRE(m.truncation.has_value());
  CHECK(m.truncation->l_max == 3);
  CHECK(m.error_estimate > 0);
}

TEST_CASE("laplacian ladder of e^{-lambda r}") {
  const auto d1 = distributional_laplacian_exp(1);
  CHECK(is_monomial(d1.smooth_over_r, -2, 1, 1, 0));
  CHECK(is_monomial(d1.smooth_plain, 1, 1, 2, 0));
  CHECK(d1.delta_terms.empty());

  const auto d2 = distributional_laplacian_exp(2);
  CHECK(is_monomial(d2.smooth_over_r, -4, 1, 3, 0));
  CHECK(is_monomial(d2.smooth_plain, 1, 1, 4, 0));
  REQUIRE(d2.delta_terms.size() == 1);
  CHECK(is_monomial(d2.delta_terms[0], 8, 1, 1, 1)); // 8 pi lambda

  const auto d3 = distributional_laplacian_exp(3);
  CHECK(is_monomial(d3.smooth_over_r, -6, 1, 5, 0));
  CHECK(is_monomial(d3.smooth_plain, 1, 1, 6, 0));
  REQUIRE(d3.delta_terms.size() == 2);
  CHECK(is_monomial(d3.delta_terms[0], 16, 1, 3, 1)); // 16 pi lambda^3
  CHECK(is_monomial(d3.delta_terms[1], 8, 1, 1, 1));  // 8 pi lambda, of Laplacian delta
  CHECK_THROWS_AS(distributional_laplacian_exp(0), DomainError);
}

TEST_CASE("laplacian ladder: smooth part and delta rule") {
  // Radial Laplacian f'' + 2 f'/r by differences reproduces the next level.
  const double lam = 1.3;
  for (int j = 1; j <= 6; ++j) {
    const auto s = distributional_laplacian_exp(j), t = distributional_laplacian_exp(j + 1);
    for (double r : {0.4, 1.0, 2.5}) {
      const double h = 1e-3;
      auto f = [&](double x) { return s.smooth_value(x, lam); };
      const double d2 = (-f(r + 2 * h) + 16 * f(r + h) - 30 * f(r) + 16 * f(r - h) - f(r - 2 * h)) / (12 * h * h);
      const double d1 = (-f(r + 2 * h) + 8 * f(r + h) - 8 * f(r - h) + f(r - 2 * h)) / (12 * h);
      const double lap = d2 + 2 * d1 / r;
      CHECK_THAT(lap, WithinRel(t.smooth_value(r, lam), 1e-7));
    }
    // the 1/r part feeds -4 pi alpha delta; older deltas move up one Laplacian
    REQUIRE(!t.delta_terms.empty());
    CHECK(t.delta_terms[0] == s.smooth_over_r.times(-4, 0, 1));
    for (std::size_t i = 0; i < s.delta_terms.size(); ++i)
      CHECK(t.delta_terms[i + 1] == s.delta_terms[i]);
    // closed pattern: alpha_j = -2j lambda^{2j-1}, beta_j = lambda^{2j}
    CHECK(is_monomial(s.smooth_over_r, -2 * j, 1, 2 * j - 1, 0));
    CHECK(is_monomial(s.smooth_plain, 1, 1, 2 * j, 0));
  }
  const auto v = distributional_laplacian_exp(3, 2.0);
  CHECK_THAT(v.delta_terms[0], WithinRel(16 * pi * 8, 1e-15));
  CHECK_THAT(v.delta_terms[1], WithinRel(16 * pi, 1e-15));
}
