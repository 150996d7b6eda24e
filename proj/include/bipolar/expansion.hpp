#pragma once

/// \file expansion.hpp
///
/// Bipolar expansion of 1/|b - a - R| in four equivalent forms: spherical
/// (two solid-harmonic operators or one Gaunt-coupled operator), raw
/// Cartesian index contraction, and compressed Cartesian contraction.
///
/// Pointwise, every term with n + n' >= 1 carries a power of the Laplacian
/// acting on 1/R and vanishes for R != 0, so the evaluators sum the
/// n = n' = 0 sector over l, l' <= l_max. The series converges where
/// |R| > |a| + |b|; elsewhere the partial sums are returned with the
/// nonoverlap flag cleared.

#include "bipolar/cartesian.hpp"
#include "bipolar/errors.hpp"
#include "bipolar/polynomial.hpp"
#include "bipolar/specfun.hpp"
#include "bipolar/vec.hpp"

#include <string>
#include <vector>

namespace bipolar::expansion {

struct Truncation {
  int l_max = 0;
  int n_max = 0;

  void validate() const {
    if (l_max < 0 || n_max < 0)
      throw DomainError("truncation: l_max and n_max must be non-negative");
  }
};

struct BipolarGeometry {
  Vec3 b = Vec3::Zero(); // point of distribution 1, from the origin
  Vec3 a = Vec3::Zero(); // point of distribution 2, from its center
  Vec3 R = Vec3::Zero(); // center separation

  bool nonoverlap() const { return R.norm() > a.norm() + b.norm(); }
  double convergence_ratio() const { return (a.norm() + b.norm()) / R.norm(); }
};

struct ExpansionValue {
  double value = 0.0;
  double imag_residue = 0.0;
  bool nonoverlap = false;
  /// partial_sums[s] is the sum over max(l, l') <= s.
  std::vector<double> partial_sums;
};

inline double inverse_distance_direct(const BipolarGeometry &g) {
  const double d = (g.b - g.a - g.R).norm();
  if (!(d > 0.0))
    throw SingularityError("inverse distance: coincident points");
  return 1.0 / d;
}

/// Largest l_max of the spherical forms; beyond it the factorials in the
/// solid-harmonic normalizations overflow double.
inline constexpr int spherical_l_max = 42;

namespace detail {

inline void require_separated(const BipolarGeometry &g, const Truncation &t) {
  t.validate();
  if (t.l_max > spherical_l_max)
    throw DomainError("bipolar expansion supports l_max <= " + std::to_string(spherical_l_max));
  if (!(g.R.norm() > 0.0))
    throw SingularityError("bipolar expansion evaluated at R = 0");
}

inline ExpansionValue finish(const BipolarGeometry &g, const std::vector<complex> &shells) {
  ExpansionValue out;
  out.nonoverlap = g.nonoverlap();
  complex acc = 0.0;
  for (const auto &s : shells) {
    acc += s;
    out.partial_sums.push_back(acc.real());
  }
  out.value = acc.real();
  out.imag_residue = std::abs(acc.imag());
  return out;
}

inline double spherical_prefactor(int l, int lp) {
  return sign_pow(lp) * four_pi * four_pi /
         (sf::double_factorial_real(2 * l + 1) * sf::double_factorial_real(2 * lp + 1));
}

inline double cartesian_prefactor(int l, int lp) {
  return sign_pow(lp) * (2.0 * l + 1.0) * (2.0 * lp + 1.0) /
         (sf::double_factorial_real(2 * l + 1) * sf::double_factorial_real(2 * lp + 1));
}

inline double multinomial_denominator(const Exponents &p) {
  return sf::factorial(p[0]) * sf::factorial(p[1]) * sf::factorial(p[2]);
}

} // namespace detail

/// One (l, m, l', m') term of the two-operator spherical form; the operator
/// product Y_lm(-grad) Y_l'm'(-grad)(1/R) is reduced with the Gaunt
/// coefficient.
inline complex form1_term(const BipolarGeometry &g, int l, int m, int lp, int mp) {
  sf::require_valid({l, m});
  sf::require_valid({lp, mp});
  const complex yb = std::conj(sf::regular_solid_harmonic({l, m}, g.b));
  const complex ya = std::conj(sf::regular_solid_harmonic({lp, mp}, g.a));
  const complex op =
      sf::gaunt(l, m, lp, mp) * sf::irregular_solid_applied({l + lp, m + mp}, g.R);
  return detail::spherical_prefactor(l, lp) * yb * ya * op;
}

/// Same term written with (-1)^l and Y_{l+l', m+m'}(+grad)(1/R).
inline complex form2_term(const BipolarGeometry &g, int l, int m, int lp, int mp) {
  sf::require_valid({l, m});
  sf::require_valid({lp, mp});
  const int L = l + lp;
  const complex yb = std::conj(sf::regular_solid_harmonic({l, m}, g.b));
  const complex ya = std::conj(sf::regular_solid_harmonic({lp, mp}, g.a));
  const complex grad_plus = sign_pow(L) * sf::irregular_solid_applied({L, m + mp}, g.R);
  const double pref = sign_pow(l) * four_pi * four_pi /
                      (sf::double_factorial_real(2 * l + 1) * sf::double_factorial_real(2 * lp + 1));
  return pref * sf::gaunt(l, m, lp, mp) * yb * ya * grad_plus;
}

inline ExpansionValue eval_form1(const BipolarGeometry &g, const Truncation &t) {
  detail::require_separated(g, t);
  const int L = t.l_max;
  const auto rb = sf::regular_solid_table(L, g.b);
  const auto ra = sf::regular_solid_table(L, g.a);
  const auto irr = sf::irregular_applied_table(2 * L, g.R);
  std::vector<complex> shells(static_cast<std::size_t>(L + 1), 0.0);
  for (int l = 0; l <= L; ++l)
    for (int lp = 0; lp <= L; ++lp) {
      const double pref = detail::spherical_prefactor(l, lp);
      complex s = 0.0;
      for (int m = -l; m <= l; ++m)
        for (int mp = -lp; mp <= lp; ++mp) {
          const complex op = sf::gaunt(l, m, lp, mp) *
                             irr[static_cast<std::size_t>(sf::lm_index(l + lp, m + mp))];
          s += std::conj(rb[static_cast<std::size_t>(sf::lm_index(l, m))]) *
               std::conj(ra[static_cast<std::size_t>(sf::lm_index(lp, mp))]) * op;
        }
      shells[static_cast<std::size_t>(std::max(l, lp))] += pref * s;
    }
  return detail::finish(g, shells);
}

inline ExpansionValue eval_form2(const BipolarGeometry &g, const Truncation &t) {
  detail::require_separated(g, t);
  const int L = t.l_max;
  const auto rb = sf::regular_solid_table(L, g.b);
  const auto ra = sf::regular_solid_table(L, g.a);
  // Y_LM(+grad)(1/R) = (-1)^L Y_LM(-grad)(1/R).
  auto irr = sf::irregular_applied_table(2 * L, g.R);
  for (int J = 0; J <= 2 * L; ++J)
    for (int M = -J; M <= J; ++M)
      irr[static_cast<std::size_t>(sf::lm_index(J, M))] *= sign_pow(J);
  std::vector<complex> shells(static_cast<std::size_t>(L + 1), 0.0);
  for (int l = 0; l <= L; ++l)
    for (int lp = 0; lp <= L; ++lp) {
      const double pref = sign_pow(l) * four_pi * four_pi /
                          (sf::double_factorial_real(2 * l + 1) *
                           sf::double_factorial_real(2 * lp + 1));
      complex s = 0.0;
      for (int m = -l; m <= l; ++m)
        for (int mp = -lp; mp <= lp; ++mp)
          s += sf::gaunt(l, m, lp, mp) *
               std::conj(rb[static_cast<std::size_t>(sf::lm_index(l, m))]) *
               std::conj(ra[static_cast<std::size_t>(sf::lm_index(lp, mp))]) *
               irr[static_cast<std::size_t>(sf::lm_index(l + lp, m + mp))];
      shells[static_cast<std::size_t>(std::max(l, lp))] += pref * s;
    }
  return detail::finish(g, shells);
}

/// Largest l_max supported by the Cartesian forms (derivatives of 1/R up
/// to order 2 l_max).
inline constexpr int cartesian_l_max = max_inverse_r_order / 2;

/// Raw Cartesian form: full contraction over index tuples i_1..i_l and
/// j_1..j_l'. b^{2l+1} d^p(1/b) is the numerator polynomial N_p(b), so the
/// factors stay finite at b = 0 and a = 0. The j-independent partial
/// contraction over i-tuples is shared across j-tuples with the same
/// exponent triple.
inline ExpansionValue eval_form3(const BipolarGeometry &g, const Truncation &t) {
  detail::require_separated(g, t);
  const int L = t.l_max;
  if (L > cartesian_l_max)
    throw DomainError("Cartesian forms support l_max <= " + std::to_string(cartesian_l_max));
  const InverseRDerivativeTable D(2 * L, g.R);
  const int base = 2 * L + 1;
  auto idx = [&](const Exponents &p) { return D.index(p); };
  std::vector<double> Nb(static_cast<std::size_t>(base * base * base), 0.0);
  std::vector<double> Na(Nb.size(), 0.0);
  for (int l = 0; l <= L; ++l)
    for (const auto &p : exponent_triples(l)) {
      Nb[static_cast<std::size_t>(idx(p))] = scaled_deriv_inverse_r(p, g.b);
      Na[static_cast<std::size_t>(idx(p))] = scaled_deriv_inverse_r(p, g.a);
    }
  const int step[3] = {idx({1, 0, 0}), idx({0, 1, 0}), idx({0, 0, 1})};

  // Enumerates every index tuple of length n, calling f(linear index of its
  // exponent triple).
  auto for_each_tuple = [&](int n, auto &&f) {
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    int lin = n * step[0];
    while (true) {
      f(lin);
      int pos = 0;
      while (pos < n) {
        int &d = digits[static_cast<std::size_t>(pos)];
        lin -= step[d];
        if (d < 2) {
          ++d;
          lin += step[d];
          break;
        }
        d = 0;
        lin += step[0];
        ++pos;
      }
      if (pos == n)
        return;
    }
  };

  std::vector<complex> shells(static_cast<std::size_t>(L + 1), 0.0);
  for (int l = 0; l <= L; ++l) {
    // S[q] = sum over i-tuples of N_{p(i)}(b) d^{p(i)+q}(1/R), for |q| <= L.
    std::vector<double> S(Nb.size(), 0.0);
    std::vector<int> qs;
    for (int lp = 0; lp <= L; ++lp)
      for (const auto &q : exponent_triples(lp))
        qs.push_back(idx(q));
    for_each_tuple(l, [&](int pi) {
      const double bp = Nb[static_cast<std::size_t>(pi)];
      if (bp == 0.0)
        return;
      for (int qi : qs)
        S[static_cast<std::size_t>(qi)] += bp * D.at_index(pi + qi);
    });
    for (int lp = 0; lp <= L; ++lp) {
      double s = 0.0;
      for_each_tuple(lp, [&](int qi) {
        s += Na[static_cast<std::size_t>(qi)] * S[static_cast<std::size_t>(qi)];
      });
      const double pref =
          detail::cartesian_prefactor(l, lp) / (sf::factorial(l) * sf::factorial(lp));
      shells[static_cast<std::size_t>(std::max(l, lp))] += pref * s;
    }
  }
  return detail::finish(g, shells);
}

/// Compressed Cartesian form: sum over exponent triples p (|p| = l) and
/// q (|q| = l') with weights 1/(p! q!).
inline ExpansionValue eval_form4(const BipolarGeometry &g, const Truncation &t) {
  detail::require_separated(g, t);
  const int L = t.l_max;
  if (L > cartesian_l_max)
    throw DomainError("Cartesian forms support l_max <= " + std::to_string(cartesian_l_max));
  const InverseRDerivativeTable D(2 * L, g.R);
  std::vector<complex> shells(static_cast<std::size_t>(L + 1), 0.0);
  for (int l = 0; l <= L; ++l)
    for (int lp = 0; lp <= L; ++lp) {
      double s = 0.0;
      for (const auto &p : exponent_triples(l)) {
        const double bp = scaled_deriv_inverse_r(p, g.b) / detail::multinomial_denominator(p);
        if (bp == 0.0)
          continue;
        for (const auto &q : exponent_triples(lp))
          s += bp * scaled_deriv_inverse_r(q, g.a) / detail::multinomial_denominator(q) *
               D(p + q);
      }
      shells[static_cast<std::size_t>(std::max(l, lp))] += detail::cartesian_prefactor(l, lp) * s;
    }
  return detail::finish(g, shells);
}

/// Number of (p, q) pairs in the compressed double sum for fixed (l, l').
inline int compressed_term_count(int l, int lp) {
  return static_cast<int>(exponent_triples(l).size() * exponent_triples(lp).size());
}

/// |Y_lm(-grad) Y_l'm'(-grad)(1/R) - gaunt * Y_{l+l',m+m'}(-grad)(1/R)|.
///
/// The left side is built without the addition theorem: the product of the
/// two solid-harmonic polynomials is expanded into monomials and each
/// monomial x^p becomes (-1)^{|p|} d^p(1/R) via exact Cartesian
/// derivatives.
inline double addition_theorem_residual(int l, int m, int lp, int mp, const Vec3 &R) {
  sf::require_valid({l, m});
  sf::require_valid({lp, mp});
  if (!(R.norm() > 0.0))
    throw SingularityError("addition theorem evaluated at R = 0");
  const ComplexPoly product = solid_harmonic_polynomial(l, m) * solid_harmonic_polynomial(lp, mp);
  complex lhs = 0.0;
  for (const auto &[p, c] : product.terms())
    lhs += c * sign_pow(degree(p)) * cartesian_deriv_inverse_r(p, R);
  const complex rhs =
      sf::gaunt(l, m, lp, mp) * sf::irregular_solid_applied({l + lp, m + mp}, R);
  return std::abs(lhs - rhs);
}

/// Partial sum over l, l' <= l_max of the plane-wave expansion
///   sum j_l(kb) conj(j_l'(ka)) Y*_lm(b_hat) Y*_l'm'(a_hat) Y_lm(k_hat) Y_l'm'(k_hat)
/// with the 4 pi i^l Bessel convention; tends to exp(i k.(b - a)).
inline complex rayleigh_partial_sum(const Vec3 &k, const Vec3 &b, const Vec3 &a, int l_max) {
  if (l_max < 0)
    throw DomainError("rayleigh_partial_sum: l_max must be non-negative");
  // A zero vector only feeds l = 0 (all higher Bessel factors vanish), so
  // any direction serves for its harmonics.
  auto dir = [](const Vec3 &v) { return v.norm() > 0.0 ? v : Vec3(0, 0, 1); };
  const auto yk = sf::sph_harm_table(l_max, dir(k));
  const auto yb = sf::sph_harm_table(l_max, dir(b));
  const auto ya = sf::sph_harm_table(l_max, dir(a));
  const double kn = k.norm();
  complex sb = 0.0, sa = 0.0;
  for (int l = 0; l <= l_max; ++l) {
    complex ab = 0.0, aa = 0.0;
    for (int m = -l; m <= l; ++m) {
      const auto i = static_cast<std::size_t>(sf::lm_index(l, m));
      ab += std::conj(yb[i]) * yk[i];
      aa += std::conj(ya[i]) * yk[i];
    }
    sb += sf::phased_bessel(l, kn * b.norm()) * ab;
    sa += std::conj(sf::phased_bessel(l, kn * a.norm())) * aa;
  }
  return sb * sa;
}

} // namespace bipolar::expansion
