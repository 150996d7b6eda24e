#pragma once

/// \file delta_series.hpp
///
/// Exact bookkeeping for distributional Laplacians of e^{-lambda r}:
///
///   Delta^j e^{-lambda r} = alpha e^{-lambda r}/r + beta e^{-lambda r}
///                           + sum_i c_i Delta^i delta(r),
///
/// using Delta(1/r) = -4 pi delta(r). Coefficients are polynomials in lambda
/// and pi with rational coefficients.

#include "bipolar/errors.hpp"
#include "bipolar/vec.hpp"

#include <boost/rational.hpp>

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace bipolar::energy {

using Rational = boost::rational<long long>;

/// Finite sum of c * lambda^p * pi^q with rational c.
class LambdaPoly {
public:
  using Key = std::pair<int, int>; // (power of lambda, power of pi)

  LambdaPoly() = default;
  static LambdaPoly monomial(Rational c, int lambda_power, int pi_power = 0) {
    LambdaPoly out;
    out.add(c, lambda_power, pi_power);
    return out;
  }

  void add(Rational c, int lambda_power, int pi_power = 0) {
    // boost::rational's mixed-type == recurses forever in Boost 1.74, so
    // zero tests go through the numerator.
    if (c.numerator() == 0)
      return;
    auto &slot = terms_[{lambda_power, pi_power}];
    slot += c;
    if (slot.numerator() == 0)
      terms_.erase({lambda_power, pi_power});
  }

  LambdaPoly &operator+=(const LambdaPoly &o) {
    for (const auto &[k, c] : o.terms_)
      add(c, k.first, k.second);
    return *this;
  }
  friend LambdaPoly operator+(LambdaPoly a, const LambdaPoly &b) { return a += b; }

  /// Multiplies by c * lambda^p * pi^q.
  LambdaPoly times(Rational c, int lambda_power, int pi_power = 0) const {
    LambdaPoly out;
    for (const auto &[k, v] : terms_)
      out.add(v * c, k.first + lambda_power, k.second + pi_power);
    return out;
  }

  bool operator==(const LambdaPoly &o) const { return terms_ == o.terms_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Key, Rational> &terms() const noexcept { return terms_; }

  double operator()(double lambda) const {
    double s = 0.0;
    for (const auto &[k, c] : terms_)
      s += boost::rational_cast<double>(c) * std::pow(lambda, k.first) *
           std::pow(pi, k.second);
    return s;
  }

  std::string str() const {
    if (terms_.empty())
      return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[k, c] : terms_) {
      if (!first)
        os << " + ";
      first = false;
      os << c.numerator();
      if (c.denominator() != 1)
        os << "/" << c.denominator();
      if (k.second == 1)
        os << "*pi";
      else if (k.second != 0)
        os << "*pi^" << k.second;
      if (k.first == 1)
        os << "*lambda";
      else if (k.first != 0)
        os << "*lambda^" << k.first;
    }
    return os.str();
  }

private:
  std::map<Key, Rational> terms_;
};

struct DeltaSeries {
  int order = 0;             // j in Delta^j e^{-lambda r}
  LambdaPoly smooth_over_r;  // alpha
  LambdaPoly smooth_plain;   // beta
  /// delta_terms[i] multiplies Delta^i delta(r).
  std::vector<LambdaPoly> delta_terms;

  /// One more Laplacian. Away from the origin
  ///   Delta(e^{-lr}/r) = l^2 e^{-lr}/r,  Delta e^{-lr} = l^2 e^{-lr} - 2l e^{-lr}/r,
  /// and the 1/r singularity contributes -4 pi alpha delta(r).
  DeltaSeries laplacian() const {
    DeltaSeries out;
    out.order = order + 1;
    out.smooth_over_r = smooth_over_r.times(1, 2) + smooth_plain.times(-2, 1);
    out.smooth_plain = smooth_plain.times(1, 2);
    out.delta_terms.push_back(smooth_over_r.times(-4, 0, 1));
    for (const auto &d : delta_terms)
      out.delta_terms.push_back(d);
    while (!out.delta_terms.empty() && out.delta_terms.back().is_zero())
      out.delta_terms.pop_back();
    return out;
  }

  /// Smooth part at r > 0 for a numeric lambda.
  double smooth_value(double r, double lambda) const {
    const double e = std::exp(-lambda * r);
    return smooth_over_r(lambda) * e / r + smooth_plain(lambda) * e;
  }
};

/// Delta^j e^{-lambda r} as a DeltaSeries (symbolic in lambda).
inline DeltaSeries distributional_laplacian_exp(int j) {
  if (j < 1)
    throw DomainError("distributional_laplacian_exp: j must be >= 1");
  DeltaSeries s;
  s.order = 1;
  s.smooth_over_r = LambdaPoly::monomial(-2, 1);
  s.smooth_plain = LambdaPoly::monomial(1, 2);
  for (int i = 1; i < j; ++i)
    s = s.laplacian();
  return s;
}

/// Numeric coefficients of Delta^j e^{-lambda r} at a given lambda.
struct DeltaSeriesValues {
  double smooth_over_r = 0.0;
  double smooth_plain = 0.0;
  std::vector<double> delta_terms;
};

inline DeltaSeriesValues distributional_laplacian_exp(int j, double lambda) {
  if (!(lambda > 0.0))
    throw DomainError("distributional_laplacian_exp: lambda must be > 0");
  const DeltaSeries s = distributional_laplacian_exp(j);
  DeltaSeriesValues v{s.smooth_over_r(lambda), s.smooth_plain(lambda), {}};
  for (const auto &d : s.delta_terms)
    v.delta_terms.push_back(d(lambda));
  return v;
}

} // namespace bipolar::energy
