#pragma once

/// \file charge.hpp
///
/// Analytic charge-density models and their mean square radii
///
///   rbar_{lm}^{2n} = sqrt(4 pi/(2l+1)) \int r^{l+2n} conj(Y_lm(r_hat)) rho(r) d^3r,
///
/// taken about the model's own center, in spherical and Cartesian
/// (compressed symmetric tensor) form. Units are Gaussian with e = a0 = 1.

#include "bipolar/cartesian.hpp"
#include "bipolar/errors.hpp"
#include "bipolar/polynomial.hpp"
#include "bipolar/specfun.hpp"
#include "bipolar/vec.hpp"

#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace bipolar::charge {

enum class Kind { point, uniform_sphere, exponential, gaussian, hydrogen1s, superposition };

inline std::string to_string(Kind k) {
  switch (k) {
  case Kind::point:
    return "point";
  case Kind::uniform_sphere:
    return "uniform_sphere";
  case Kind::exponential:
    return "exponential";
  case Kind::gaussian:
    return "gaussian";
  case Kind::hydrogen1s:
    return "hydrogen1s";
  case Kind::superposition:
    return "superposition";
  }
  return "unknown";
}

/// Elementary spherically symmetric piece of a model, positioned relative to
/// the model's center. Hydrogen and superpositions flatten into these.
enum class Shape { point, sphere, exponential, gaussian };

struct Component {
  Shape shape;
  double amplitude; // charge q (point) or density prefactor C
  double scale;     // radius a (sphere) or decay lambda; unused for point
  Vec3 center;

  bool is_point() const noexcept { return shape == Shape::point; }
};

/// Immutable tagged charge distribution.
class DensityModel {
public:
  static DensityModel point(double q, const Vec3 &offset = Vec3::Zero()) {
    return DensityModel(Kind::point, q, 0.0, offset, {});
  }
  /// C theta(a - |r - offset|).
  static DensityModel uniform_sphere(double C, double a, const Vec3 &offset = Vec3::Zero()) {
    return DensityModel(Kind::uniform_sphere, C, a, offset, {});
  }
  /// C exp(-lambda |r - offset|).
  static DensityModel exponential(double C, double lambda, const Vec3 &offset = Vec3::Zero()) {
    return DensityModel(Kind::exponential, C, lambda, offset, {});
  }
  /// C exp(-lambda |r - offset|^2).
  static DensityModel gaussian(double C, double lambda, const Vec3 &offset = Vec3::Zero()) {
    return DensityModel(Kind::gaussian, C, lambda, offset, {});
  }
  /// Proton of charge e at offset plus the 1s electron cloud -e |psi_1s|^2.
  static DensityModel hydrogen1s(double e = 1.0, double a0 = 1.0,
                                 const Vec3 &offset = Vec3::Zero()) {
    return DensityModel(Kind::hydrogen1s, e, a0, offset, {});
  }
  static DensityModel superposition(std::vector<DensityModel> children,
                                    const Vec3 &offset = Vec3::Zero()) {
    return DensityModel(Kind::superposition, 0.0, 0.0, offset, std::move(children));
  }

  Kind kind() const noexcept { return kind_; }
  double amplitude() const noexcept { return amplitude_; }
  double scale() const noexcept { return scale_; }
  const Vec3 &offset() const noexcept { return offset_; }
  const std::vector<DensityModel> &children() const noexcept { return children_; }

  /// Same model with every amplitude multiplied by f.
  DensityModel scaled(double f) const {
    DensityModel out = *this;
    out.amplitude_ *= f;
    for (auto &c : out.children_)
      c = c.scaled(f);
    return out;
  }

  /// Spherical components with centers relative to this model's center.
  std::vector<Component> components() const {
    std::vector<Component> out;
    append_components(out, Vec3::Zero());
    return out;
  }

  bool spherically_symmetric_about_center() const {
    for (const auto &c : components())
      if (c.center.norm() != 0.0)
        return false;
    return true;
  }

private:
  DensityModel(Kind kind, double amplitude, double scale, const Vec3 &offset,
               std::vector<DensityModel> children)
      : kind_(kind), amplitude_(amplitude), scale_(scale), offset_(offset),
        children_(std::move(children)) {
    if (!offset_.allFinite() || !std::isfinite(amplitude_))
      throw DomainError("density model: non-finite amplitude or offset");
    if (kind_ == Kind::superposition) {
      if (children_.empty())
        throw DomainError("superposition needs at least one child");
    } else if (kind_ != Kind::point && !(scale_ > 0.0 && std::isfinite(scale_))) {
      throw DomainError("density model '" + to_string(kind_) + "': scale must be > 0");
    }
  }

  void append_components(std::vector<Component> &out, const Vec3 &shift) const {
    const Vec3 c = shift + offset_;
    switch (kind_) {
    case Kind::point:
      out.push_back({Shape::point, amplitude_, 0.0, c});
      break;
    case Kind::uniform_sphere:
      out.push_back({Shape::sphere, amplitude_, scale_, c});
      break;
    case Kind::exponential:
      out.push_back({Shape::exponential, amplitude_, scale_, c});
      break;
    case Kind::gaussian:
      out.push_back({Shape::gaussian, amplitude_, scale_, c});
      break;
    case Kind::hydrogen1s: {
      const double a0 = scale_;
      out.push_back({Shape::point, amplitude_, 0.0, c});
      out.push_back({Shape::exponential, -amplitude_ / (pi * a0 * a0 * a0), 2.0 / a0, c});
      break;
    }
    case Kind::superposition:
      for (const auto &child : children_)
        child.append_components(out, c);
      break;
    }
  }

  Kind kind_;
  double amplitude_;
  double scale_;
  Vec3 offset_;
  std::vector<DensityModel> children_;
};

// ---------------------------------------------------------------------------
// Single-component kernels (component centered at its own origin).

inline double component_charge(const Component &c) {
  switch (c.shape) {
  case Shape::point:
    return c.amplitude;
  case Shape::sphere:
    return four_pi * c.amplitude * ipow(c.scale, 3) / 3.0;
  case Shape::exponential:
    return 8.0 * pi * c.amplitude / ipow(c.scale, 3);
  case Shape::gaussian:
    return c.amplitude * std::pow(pi / c.scale, 1.5);
  }
  return 0.0;
}

/// \int s^{2t} rho(s) d^3s about the component's center.
inline double component_even_moment(const Component &c, int t) {
  switch (c.shape) {
  case Shape::point:
    return t == 0 ? c.amplitude : 0.0;
  case Shape::sphere:
    return four_pi * c.amplitude * ipow(c.scale, 2 * t + 3) / (2.0 * t + 3.0);
  case Shape::exponential:
    return four_pi * c.amplitude * sf::factorial(2 * t + 2) / ipow(c.scale, 2 * t + 3);
  case Shape::gaussian:
    return 2.0 * pi * c.amplitude * std::tgamma(t + 1.5) / std::pow(c.scale, t + 1.5);
  }
  return 0.0;
}

/// Radial density value; point components have none.
inline double component_density(const Component &c, double s) {
  switch (c.shape) {
  case Shape::point:
    throw UnsupportedEvaluation("point charge has no pointwise density");
  case Shape::sphere:
    return s <= c.scale ? c.amplitude : 0.0;
  case Shape::exponential:
    return c.amplitude * std::exp(-c.scale * s);
  case Shape::gaussian:
    return c.amplitude * std::exp(-c.scale * s * s);
  }
  return 0.0;
}

/// Exact electrostatic potential at distance t from the component center.
inline double component_potential(const Component &c, double t) {
  const double q = component_charge(c);
  switch (c.shape) {
  case Shape::point:
    if (!(t > 0.0))
      throw SingularityError("potential of a point charge at its position");
    return q / t;
  case Shape::sphere:
    if (t >= c.scale)
      return q / t;
    return 2.0 * pi * c.amplitude * (c.scale * c.scale - t * t / 3.0);
  case Shape::exponential: {
    const double x = c.scale * t;
    if (x == 0.0)
      return 0.5 * q * c.scale;
    return q * (-std::expm1(-x) - 0.5 * x * std::exp(-x)) / t;
  }
  case Shape::gaussian: {
    const double x = std::sqrt(c.scale) * t;
    if (x < 1e-8)
      return q * 2.0 * std::sqrt(c.scale / pi) * (1.0 - x * x / 3.0);
    return q * std::erf(x) / t;
  }
  }
  return 0.0;
}

/// \int e^{i k . r} rho(r) d^3r for the centered component (real, |k| only).
inline double component_form_factor(const Component &c, double k) {
  switch (c.shape) {
  case Shape::point:
    return c.amplitude;
  case Shape::sphere: {
    const double x = k * c.scale;
    if (x == 0.0)
      return component_charge(c);
    return four_pi * c.amplitude * ipow(c.scale, 3) * sf::spherical_bessel_std(1, x) / x;
  }
  case Shape::exponential: {
    const double d = c.scale * c.scale + k * k;
    return 8.0 * pi * c.amplitude * c.scale / (d * d);
  }
  case Shape::gaussian:
    return component_charge(c) * std::exp(-k * k / (4.0 * c.scale));
  }
  return 0.0;
}

/// Characteristic length (used for quadrature cutoffs); 0 for points.
inline double component_length(const Component &c) {
  switch (c.shape) {
  case Shape::point:
    return 0.0;
  case Shape::sphere:
    return c.scale;
  case Shape::exponential:
    return 1.0 / c.scale;
  case Shape::gaussian:
    return 1.0 / std::sqrt(c.scale);
  }
  return 0.0;
}

/// Radius beyond which the density (times any moment weight used here) is
/// negligible against its peak.
inline double component_cutoff(const Component &c) {
  switch (c.shape) {
  case Shape::point:
    return 0.0;
  case Shape::sphere:
    return c.scale;
  case Shape::exponential:
    return 60.0 / c.scale;
  case Shape::gaussian:
    return std::sqrt(60.0 / c.scale);
  }
  return 0.0;
}

/// \int P(r) rho_c(|r - center|) d^3r for a polynomial P, reduced exactly to
/// the component's even radial moments by averaging P(center + s omega) over
/// the sphere.
template <typename T> T polynomial_moment(const Component &c, const Poly3<T> &P) {
  if (c.is_point())
    return c.amplitude * P(c.center);
  const auto avg = P.shifted(c.center).sphere_average_by_power();
  T sum{};
  for (std::size_t t = 0; t < avg.size(); ++t)
    sum += avg[t] * component_even_moment(c, static_cast<int>(t));
  return sum;
}

// ---------------------------------------------------------------------------
// Model-level operations.

/// Smooth part of rho at r. Point components are excluded; a model with no
/// smooth part throws UnsupportedEvaluation.
inline double eval_density(const DensityModel &model, const Vec3 &r) {
  bool any_smooth = false;
  double sum = 0.0;
  for (const auto &c : model.components()) {
    if (c.is_point())
      continue;
    any_smooth = true;
    sum += component_density(c, (r - c.center).norm());
  }
  if (!any_smooth)
    throw UnsupportedEvaluation("pointwise density of a pure point-charge model");
  return sum;
}

inline double total_charge(const DensityModel &model) {
  if (model.kind() == Kind::hydrogen1s)
    return 0.0;
  double q = 0.0;
  for (const auto &c : model.components())
    q += component_charge(c);
  return q;
}

/// rho~(k) for a wavevector: offset components carry e^{i k . c}.
inline complex radial_fourier(const DensityModel &model, const Vec3 &k) {
  const double kn = k.norm();
  complex sum = 0.0;
  for (const auto &c : model.components())
    sum += component_form_factor(c, kn) * std::polar(1.0, k.dot(c.center));
  return sum;
}

/// Orientation-averaged rho~(|k|); equals rho~(k) exactly for models
/// spherically symmetric about their center.
inline double radial_fourier(const DensityModel &model, double k) {
  if (k < 0.0)
    throw DomainError("radial_fourier: k must be non-negative");
  double sum = 0.0;
  for (const auto &c : model.components())
    sum += component_form_factor(c, k) * sf::spherical_bessel_std(0, k * c.center.norm());
  return sum;
}

/// Spherical mean square radius rbar_{lm}^{2n} about the model center.
inline complex msr_spherical(const DensityModel &model, int l, int m, int n) {
  sf::require_valid({l, m});
  if (n < 0)
    throw DomainError("msr_spherical: n must be non-negative");
  const double norm = std::sqrt(four_pi / (2.0 * l + 1.0));
  complex sum = 0.0;
  ComplexPoly P;
  bool have_poly = false;
  for (const auto &c : model.components()) {
    if (c.is_point()) {
      sum += c.amplitude * norm * ipow(c.center.norm(), 2 * n) *
             std::conj(sf::regular_solid_harmonic({l, m}, c.center));
    } else if (c.center.norm() == 0.0) {
      if (l == 0)
        sum += component_even_moment(c, n);
    } else {
      if (!have_poly) {
        P = to_complex(r_squared_power(n)) * solid_harmonic_polynomial(l, m).conj();
        have_poly = true;
      }
      sum += norm * polynomial_moment(c, P);
    }
  }
  return sum;
}

/// Table of rbar_{lm}^{2n} for l <= l_max, all m, n <= n_max.
class SphericalMSR {
public:
  SphericalMSR() = default;
  SphericalMSR(int l_max, int n_max) : l_max_(l_max), n_max_(n_max) {}

  static SphericalMSR of(const DensityModel &model, int l_max, int n_max) {
    SphericalMSR t(l_max, n_max);
    for (int l = 0; l <= l_max; ++l)
      for (int m = -l; m <= l; ++m)
        for (int n = 0; n <= n_max; ++n)
          t.set(l, m, n, msr_spherical(model, l, m, n));
    return t;
  }

  void set(int l, int m, int n, complex v) { entries_[{l, m, n}] = v; }
  bool contains(int l, int m, int n) const { return entries_.count({l, m, n}) > 0; }
  complex at(int l, int m, int n) const {
    auto it = entries_.find({l, m, n});
    if (it == entries_.end())
      throw DomainError("SphericalMSR: missing entry (" + std::to_string(l) + "," +
                        std::to_string(m) + "," + std::to_string(n) + ")");
    return it->second;
  }
  int l_max() const noexcept { return l_max_; }
  int n_max() const noexcept { return n_max_; }
  const std::map<std::tuple<int, int, int>, complex> &entries() const noexcept {
    return entries_;
  }

private:
  int l_max_ = 0;
  int n_max_ = 0;
  std::map<std::tuple<int, int, int>, complex> entries_;
};

/// Totally symmetric rank-l tensor stored by exponent triple (p_x, p_y, p_z).
class CartesianMSR {
public:
  CartesianMSR(int rank, int order) : rank_(rank), order_(order) {
    for (const auto &p : exponent_triples(rank))
      components_[p] = 0.0;
  }

  int rank() const noexcept { return rank_; }
  int order() const noexcept { return order_; }
  const std::map<Exponents, double> &components() const noexcept { return components_; }

  double &operator[](const Exponents &p) {
    auto it = components_.find(p);
    if (it == components_.end())
      throw DomainError("CartesianMSR: exponent triple of wrong rank");
    return it->second;
  }
  double operator[](const Exponents &p) const { return components_.at(p); }

  /// Full-index access T_{i1...il}, indices in {0, 1, 2}.
  double full(const std::vector<int> &indices) const {
    if (static_cast<int>(indices.size()) != rank_)
      throw DomainError("CartesianMSR: wrong number of indices");
    Exponents p{0, 0, 0};
    for (int i : indices)
      p[static_cast<std::size_t>(i)] += 1;
    return components_.at(p);
  }

  /// Trace over one index pair (the same for every pair): rank l-2 entries
  /// sum_i T_{p + 2 e_i}.
  std::map<Exponents, double> trace() const {
    std::map<Exponents, double> out;
    if (rank_ < 2)
      return out;
    for (const auto &p : exponent_triples(rank_ - 2)) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i) {
        Exponents q = p;
        q[static_cast<std::size_t>(i)] += 2;
        s += components_.at(q);
      }
      out[p] = s;
    }
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto &[p, v] : components_)
      m = std::max(m, std::abs(v));
    return m;
  }

private:
  int rank_;
  int order_;
  std::map<Exponents, double> components_;
};

/// Cartesian mean square radius
///   rbar^{2n}_{i1..il} = ((-1)^l/(2l-1)!!) \int r^{2l+2n+1} rho(r) d_{i1}..d_{il}(1/r) d^3r.
/// The kernel r^{2l+1} d^p(1/r) is the exact numerator polynomial N_p.
inline CartesianMSR msr_cartesian(const DensityModel &model, int l, int n) {
  if (l < 0 || n < 0)
    throw DomainError("msr_cartesian: l and n must be non-negative");
  CartesianMSR out(l, n);
  const double pref = sign_pow(l) / sf::double_factorial_real(2 * l - 1);
  const RealPoly r2n = r_squared_power(n);
  const auto comps = model.components();
  for (const auto &p : exponent_triples(l)) {
    const RealPoly P = r2n * inverse_r_numerator(p).to_real_poly();
    double s = 0.0;
    for (const auto &c : comps)
      s += polynomial_moment(c, P);
    out[p] = pref * s;
  }
  return out;
}

/// Cartesian tensor from the spherical table via the operator identity
///   sum_m rbar_lm Y_lm(-grad) = (2l-1)!! sqrt((2l+1)/4pi) ((-1)^l/l!) rbar_{i1..il} d_{i1}..d_{il}.
/// Both sides are harmonic polynomials in grad, so coefficients match
/// monomial by monomial.
inline CartesianMSR convert_msr_spherical_to_cartesian(const SphericalMSR &msr, int l, int n) {
  for (int m = -l; m <= l; ++m)
    if (!msr.contains(l, m, n))
      throw DomainError("convert_msr_spherical_to_cartesian: table lacks (l=" +
                        std::to_string(l) + ", m=" + std::to_string(m) +
                        ", n=" + std::to_string(n) + ")");
  CartesianMSR out(l, n);
  const double denom = sf::double_factorial_real(2 * l - 1) * std::sqrt((2.0 * l + 1.0) / four_pi);
  std::vector<ComplexPoly> harmonics;
  for (int m = -l; m <= l; ++m)
    harmonics.push_back(solid_harmonic_polynomial(l, m));
  for (const auto &p : exponent_triples(l)) {
    complex s = 0.0;
    for (int m = -l; m <= l; ++m)
      s += msr.at(l, m, n) * harmonics[static_cast<std::size_t>(m + l)].coefficient(p);
    const double pfact = sf::factorial(p[0]) * sf::factorial(p[1]) * sf::factorial(p[2]);
    out[p] = (s * pfact / denom).real();
  }
  return out;
}

/// <r^{2n}> over the hydrogen 1s probability density: a0^{2n} (2n+2)!/2^{2n+1}.
inline double hydrogen_even_moment(int n, double a0 = 1.0) {
  if (n < 0)
    throw DomainError("hydrogen_even_moment: n must be non-negative");
  return ipow(a0, 2 * n) * sf::factorial(2 * n + 2) / ipow(2.0, 2 * n + 1);
}

/// Form factor rebuilt from the mean square radii,
///   rho~(k) = sum_{l,m,n} sqrt(4 pi (2l+1)) i^l (-1)^n k^{l+2n} Y_lm(k_hat)
///             rbar_{lm}^{2n} / (2^n n! (2l+2n+1)!!),
/// truncated at l <= l_max, n <= n_max. Converges to radial_fourier(model, k).
inline complex form_factor_from_msr(const SphericalMSR &msr, const Vec3 &k) {
  static const complex ipow4[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const double kn = k.norm();
  if (kn == 0.0)
    return msr.at(0, 0, 0);
  const auto y = sf::sph_harm_table(msr.l_max(), k);
  complex sum = 0.0;
  for (int l = 0; l <= msr.l_max(); ++l) {
    const double ang = std::sqrt(four_pi * (2.0 * l + 1.0));
    for (int n = 0; n <= msr.n_max(); ++n) {
      const double radial = sign_pow(n) * ipow(kn, l + 2 * n) /
                            (ipow(2.0, n) * sf::factorial(n) * sf::double_factorial_real(2 * l + 2 * n + 1));
      for (int m = -l; m <= l; ++m)
        sum += ang * ipow4[l % 4] * radial * y[static_cast<std::size_t>(sf::lm_index(l, m))] *
               msr.at(l, m, n);
    }
  }
  return sum;
}

} // namespace bipolar::charge
