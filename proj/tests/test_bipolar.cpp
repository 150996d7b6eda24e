#include "bipolar/cartesian.hpp"
#include "bipolar/expansion.hpp"
#include "bipolar/oracle.hpp"
#include "verify.hpp"

#include <Eigen/Geometry>
#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace bipolar;
using namespace bipolar::expansion;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

BipolarGeometry geom(Vec3 b, Vec3 a, Vec3 R) { return {b, a, R}; }

ExpansionValue eval_form(int f, const BipolarGeometry &g, int L) {
  switch (f) {
  case 1:
    return eval_form1(g, {L, 0});
  case 2:
    return eval_form2(g, {L, 0});
  case 3:
    return eval_form3(g, {L, 0});
  default:
    return eval_form4(g, {L, 0});
  }
}

// Single-center multipole expansion of 1/|b - R| by Legendre polynomials.
double legendre_series(const Vec3 &b, const Vec3 &R, int L) {
  const double c = b.dot(R) / (b.norm() * R.norm());
  double s = 0;
  for (int l = 0; l <= L; ++l)
    s += std::pow(b.norm(), l) / std::pow(R.norm(), l + 1) * std::legendre(l, c);
  return s;
}

// (l = 1, l' = 1) block by inclusion-exclusion of l_max = 1 sums.
double dipole_dipole_block(int f, const BipolarGeometry &g) {
  const Vec3 z = Vec3::Zero();
  return eval_form(f, g, 1).value - eval_form(f, geom(g.b, z, g.R), 1).value -
         eval_form(f, geom(z, g.a, g.R), 1).value + eval_form(f, geom(z, z, g.R), 1).value;
}

} // namespace

TEST_CASE("inverse distance direct") {
  CHECK(inverse_distance_direct(geom({0, 0, 0}, {0, 0, 0}, {0, 0, 2})) == 0.5);
  // collinear: |b - a - R| = |0.1 + 0.1 - 1|
  CHECK_THAT(inverse_distance_direct(geom({0, 0, 0.1}, {0, 0, -0.1}, {0, 0, 1})), WithinRel(1 / 0.8, 1e-15));
  CHECK_THAT(inverse_distance_direct(geom({0, 0, -0.1}, {0, 0, 0.1}, {0, 0, 1})), WithinRel(1 / 1.2, 1e-15));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    const auto g = verify::random_geometry(rng);
    const Vec3 d = g.b - g.a - g.R;
    CHECK_THAT(inverse_distance_direct(g), WithinRel(1 / std::sqrt(d.dot(d)), 1e-15));
  }
  CHECK_THROWS_AS(inverse_distance_direct(geom({0, 0, 1}, {0, 0, 0}, {0, 0, 1})), SingularityError);
}

TEST_CASE("form 1 examples") {
  for (int L : {0, 3, 8})
    CHECK_THAT(eval_form1(geom({0, 0, 0}, {0, 0, 0}, {0.3, 0, 1.2}), {L, 0}).value,
               WithinRel(1 / Vec3(0.3, 0, 1.2).norm(), 1e-14));
  const auto g = geom({0, 0, 0.1}, {0, 0, 0.1}, {0, 0, 1});
  const auto v = eval_form1(g, {8, 0});
  CHECK(std::abs(v.value - inverse_distance_direct(g)) < 1e-6 * inverse_distance_direct(g));
  CHECK(v.nonoverlap);
  CHECK_THAT(eval_form1(geom({0.1, 0, 0}, {0, 0.1, 0}, {0, 0, 1}), {0, 0}).value, WithinRel(1.0, 1e-15));
  CHECK_THROWS_AS(eval_form1(geom({0, 0, 0}, {0, 0, 0}, {0, 0, 0}), {2, 0}), SingularityError);
  CHECK_THROWS_AS(eval_form1(geom({0, 0, 0}, {0, 0, 0}, {0, 0, 1}), {-1, 0}), DomainError);
}

TEST_CASE("form 2 against form 1") {
  const auto g = geom({0, 0, 0.2}, {0, 0, 0.3}, {0, 0, 2});
  CHECK(std::abs(form2_term(g, 1, 0, 1, 0) - form1_term(g, 1, 0, 1, 0)) < 1e-12);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 5; ++i) {
    const auto h = verify::random_geometry(rng);
    for (int l = 0; l <= 4; ++l)
      for (int lp = 0; lp <= 4; ++lp)
        for (int m = -l; m <= l; ++m)
          for (int mp = -lp; mp <= lp; ++mp)
            REQUIRE(std::abs(form2_term(h, l, m, lp, mp) - form1_term(h, l, m, lp, mp)) <
                    1e-12 * std::max(1.0, std::abs(form1_term(h, l, m, lp, mp))));
  }
  for (const auto &h : {geom({0, 0, 0}, {0, 0, 0}, {0, 0, 2}), g,
                        geom({0.1, 0, 0}, {0, 0.1, 0}, {0, 0, 1})})
    for (int L : {0, 2, 6})
      CHECK_THAT(eval_form2(h, {L, 0}).value, WithinAbs(eval_form1(h, {L, 0}).value, 1e-12));

  // a = 0: single-center expansion of 1/|b - R|
  const Vec3 b(0.2, -0.1, 0.3), R(0.4, 0.5, 1.1);
  for (int L : {0, 1, 4, 9})
    CHECK_THAT(eval_form2(geom(b, {0, 0, 0}, R), {L, 0}).value, WithinRel(legendre_series(b, R, L), 1e-13));
}

TEST_CASE("cartesian forms") {
  CHECK_THAT(eval_form3(geom({0, 0, 0}, {0, 0, 0}, {0, 0, 2}), {3, 0}).value, WithinRel(0.5, 1e-15));
  CHECK_THAT(eval_form4(geom({0, 0, 0}, {0, 0, 0}, {0, 0, 2}), {3, 0}).value, WithinRel(0.5, 1e-15));
  std::mt19937_64 rng(23);
  for (int i = 0; i < 10; ++i) {
    const auto g = verify::random_geometry(rng);
    CHECK_THAT(eval_form3(g, {2, 0}).value, WithinAbs(eval_form1(g, {2, 0}).value, 1e-10));
    for (int L : {0, 2, 5})
      CHECK_THAT(eval_form4(g, {L, 0}).value, WithinAbs(eval_form3(g, {L, 0}).value, 1e-12));
  }
  // collinear dipole-dipole block: d_a d_b 1/(R + a - b) = -2/R^3
  const double bz = 0.2, az = 0.3, Rz = 2.0;
  const auto axial = geom({0, 0, bz}, {0, 0, az}, {0, 0, Rz});
  for (int f = 1; f <= 4; ++f)
    CHECK_THAT(dipole_dipole_block(f, axial), WithinRel(-2 * bz * az / (Rz * Rz * Rz), 1e-12));
  complex t = 0;
  for (int m = -1; m <= 1; ++m)
    for (int mp = -1; mp <= 1; ++mp)
      t += form1_term(axial, 1, m, 1, mp);
  CHECK_THAT(t.real(), WithinRel(-2 * bz * az / (Rz * Rz * Rz), 1e-12));

  CHECK(compressed_term_count(2, 2) == 36);
  CHECK(std::pow(3, 2) * std::pow(3, 2) == 81);
  CHECK_THROWS_AS(eval_form3(axial, {cartesian_l_max + 1, 0}), DomainError);
}

TEST_CASE("cartesian derivatives of 1/r") {
  CHECK(cartesian_deriv_inverse_r({0, 0, 0}, Vec3(0, 0, 2)) == 0.5);
  CHECK_THAT(cartesian_deriv_inverse_r({0, 0, 1}, Vec3(0, 0, 1)), WithinRel(-1.0, 1e-15));
  auto inv = [](const Vec3 &r) { return 1.0 / r.norm(); };
  const Vec3 r(1, 1, 1);
  const double h = 1e-3;
  const double fd = (inv(r + Vec3(h, 0, 0)) - 2 * inv(r) + inv(r - Vec3(h, 0, 0))) / (h * h);
  CHECK_THAT(cartesian_deriv_inverse_r({2, 0, 0}, r), WithinAbs(fd, 1e-6));
  // closed forms: d_x^2 = (3x^2 - r^2)/r^5, d_x d_y d_z = -15 xyz/r^7
  const Vec3 s(0.3, -0.7, 1.1);
  const double n = s.norm();
  CHECK_THAT(cartesian_deriv_inverse_r({2, 0, 0}, s), WithinRel((3 * s.x() * s.x() - n * n) / std::pow(n, 5), 1e-14));
  CHECK_THAT(cartesian_deriv_inverse_r({1, 1, 1}, s), WithinRel(-15 * s.x() * s.y() * s.z() / std::pow(n, 7), 1e-14));
  // harmonicity: the Laplacian of any derivative vanishes
  for (int k = 0; k <= 8; ++k)
    for (const auto &p : exponent_triples(k)) {
      double lap = 0, mag = 0;
      for (int i = 0; i < 3; ++i) {
        Exponents q = p;
        q[static_cast<std::size_t>(i)] += 2;
        const double v = cartesian_deriv_inverse_r(q, s);
        lap += v;
        mag = std::max(mag, std::abs(v));
      }
      CHECK(std::abs(lap) <= 1e-12 * mag);
    }
  CHECK_THROWS_AS(cartesian_deriv_inverse_r({1, 0, 0}, Vec3::Zero()), SingularityError);
}

TEST_CASE("addition theorem") {
  CHECK(addition_theorem_residual(0, 0, 3, 2, Vec3(0.3, 0.2, 1)) < 1e-14);
  CHECK(addition_theorem_residual(1, 0, 1, 0, Vec3(0, 0, 1)) < 1e-12);
  CHECK(addition_theorem_residual(2, 1, 1, -1, Vec3(0.5, 0.5, 1)) < 1e-10);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec3 R = u(rng) * oracle::random_unit(rng);
    for (int l = 0; l <= 6; ++l)
      for (int lp = 0; l + lp <= 6; ++lp)
        for (int m = -l; m <= l; ++m)
          for (int mp = -lp; mp <= lp; ++mp) {
            const double mag = std::abs(sf::irregular_solid_applied({l + lp, m + mp}, R));
            REQUIRE(addition_theorem_residual(l, m, lp, mp, R) < 1e-10 * std::max(1.0, mag));
          }
  }
  CHECK_THROWS_AS(addition_theorem_residual(1, 0, 1, 0, Vec3::Zero()), SingularityError);
}

TEST_CASE("rayleigh expansion") {
  const Vec3 k(0.4, -1.1, 0.7), b(0.3, 0.2, -0.5);
  CHECK(std::abs(rayleigh_partial_sum(k, b, b, 10) - 1.0) < 1e-10);
  Vec3 d(0.2, 0.6, -0.3);
  const Vec3 a(0.1, -0.2, 0.4);
  const Vec3 kk = k.normalized() / d.norm();
  const Vec3 bb = a + d;
  CHECK(std::abs(rayleigh_partial_sum(kk, bb, a, 10) - std::polar(1.0, kk.dot(bb - a))) < 1e-9);
  const Vec3 kp = d.cross(Vec3(1, 0, 0)).normalized() * 1.3;
  CHECK(std::abs(rayleigh_partial_sum(kp, bb, a, 20) - 1.0) < 1e-10);
  // k = 0 and zero vectors only feed l = 0
  CHECK(std::abs(rayleigh_partial_sum(Vec3::Zero(), b, a, 3) - 1.0) < 1e-15);
  CHECK(std::abs(rayleigh_partial_sum(k, Vec3::Zero(), Vec3::Zero(), 3) - 1.0) < 1e-15);
}

TEST_CASE("four forms agree on random nonoverlap geometries") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 25; ++i) {
    const auto g = verify::random_geometry(rng);
    REQUIRE(g.nonoverlap());
    double v[4];
    for (int f = 1; f <= 4; ++f) {
      const auto e = eval_form(f, g, 6);
      v[f - 1] = e.value;
      CHECK(e.imag_residue < 1e-10 * std::abs(e.value));
    }
    for (int x = 0; x < 4; ++x)
      for (int y = x + 1; y < 4; ++y)
        CHECK(std::abs(v[x] - v[y]) < 1e-9 * std::abs(v[0]));
  }
}

TEST_CASE("truncation error decays geometrically") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 10; ++i) {
    const auto g = verify::random_geometry(rng, 0.2, 0.6);
    const double exact = inverse_distance_direct(g);
    const double ratio = g.convergence_ratio();
    const double s = g.a.norm() + g.b.norm(), R = g.R.norm();
    for (int f = 1; f <= 4; ++f) {
      const auto e = eval_form(f, g, 10);
      REQUIRE(e.partial_sums.size() == 11);
      // every (l, l') with l + l' > L is bounded by the expansion of 1/(R - s)
      for (int L = 0; L <= 10; ++L)
        CHECK(std::abs(e.partial_sums[static_cast<std::size_t>(L)] - exact) <=
              std::pow(ratio, L + 1) / (R - s) * (1 + 1e-9) + 1e-14);
      CHECK(verify::log_error_slope(e.partial_sums, exact) <= std::log(ratio) + 1e-9);
    }
  }
}

TEST_CASE("rotational invariance") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 10; ++i) {
    const auto g = verify::random_geometry(rng);
    const Eigen::Matrix3d Q = Eigen::AngleAxisd(0.3 + i, oracle::random_unit(rng)).toRotationMatrix();
    const auto h = geom(Q * g.b, Q * g.a, Q * g.R);
    CHECK_THAT(eval_form1(h, {6, 0}).value, WithinRel(eval_form1(g, {6, 0}).value, 1e-10));
  }
}

TEST_CASE("term conjugation symmetry") {
  std::mt19937_64 rng(43);
  const auto g = verify::random_geometry(rng);
  for (int l = 0; l <= 4; ++l)
    for (int lp = 0; lp <= 4; ++lp)
      for (int m = -l; m <= l; ++m)
        for (int mp = -lp; mp <= lp; ++mp) {
          const complex t = form1_term(g, l, m, lp, mp);
          CHECK(std::abs(t - std::conj(form1_term(g, l, -m, lp, -mp))) <= 1e-14 * std::max(1.0, std::abs(t)));
        }
}

TEST_CASE("overlap geometries are flagged") {
  const auto g = geom({0, 0, 0.8}, {0, 0, -0.5}, {0, 0, 1});
  const auto v = eval_form1(g, {4, 0});
  CHECK_FALSE(v.nonoverlap);
  CHECK(std::isfinite(v.value));
}

TEST_CASE("truncation limits are reported as domain errors") {
  const auto g = geom({0, 0, 0.1}, {0.05, 0, 0}, {0, 0, 1});
  const double exact = inverse_distance_direct(g);
  CHECK_THAT(eval_form1(g, {spherical_l_max, 0}).value, WithinRel(exact, 1e-14));
  CHECK_THAT(eval_form2(g, {spherical_l_max, 0}).value, WithinRel(exact, 1e-14));
  CHECK_THROWS_AS(eval_form1(g, {spherical_l_max + 1, 0}), DomainError);
  CHECK_THROWS_AS(eval_form2(g, {spherical_l_max + 1, 0}), DomainError);
  CHECK_THROWS_AS(eval_form3(g, {cartesian_l_max + 1, 0}), DomainError);
  CHECK_THROWS_AS(eval_form4(g, {cartesian_l_max + 1, 0}), DomainError);
}
