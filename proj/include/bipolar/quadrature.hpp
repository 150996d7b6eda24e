#pragma once

/// \file quadrature.hpp
///
/// Adaptive Gauss-Kronrod integration (Boost.Math nodes and weights) and an integrator
/// for semi-infinite oscillatory tails amp(k) * sin/cos(omega k): panels
/// between consecutive zeros of the trigonometric factor, accelerated with
/// the Wynn epsilon algorithm.

#include "bipolar/errors.hpp"
#include "bipolar/vec.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <algorithm>
#include <deque>
#include <limits>
#include <vector>

namespace bipolar::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;

  Result &operator+=(const Result &o) {
    value += o.value;
    error += o.error;
    return *this;
  }
};

namespace detail {

struct Panel {
  double a, b, value, error, l1;
  bool operator<(const Panel &o) const { return error < o.error; }
};

/// 31-point Kronrod rule with its embedded 15-point Gauss rule on [a, b];
/// nodes and weights come from Boost.Math.
template <typename F> Panel gk31(F &f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  using G = boost::math::quadrature::gauss<double, 15>;
  const auto &x = GK::abscissa();
  const auto &wk = GK::weights();
  const auto &wg = G::weights();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const double f0 = f(mid);
  double k = f0 * wk[0], l1 = std::abs(f0) * wk[0];
  // 15-point Gauss has an odd node count: node 0 is shared, Gauss nodes
  // sit at the even Kronrod indices.
  double g = f0 * wg[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fp = f(mid + half * x[i]), fm = f(mid - half * x[i]);
    k += (fp + fm) * wk[i];
    l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 0)
      g += (fp + fm) * wg[i / 2];
  }
  return {a, b, k * half, std::abs((k - g) * half), l1 * std::abs(half)};
}

} // namespace detail

/// Globally adaptive G-K 31 on [a, b]; b may be +infinity (mapped by
/// x = a + t/(1 - t)). Stops when the summed error is below
/// max(abs_tol, rel_tol |I|) or at the round-off floor of the L1 norm.
namespace detail {

template <typename F>
Result integrate_finite(F &f, double a, double b, double rel_tol, double abs_tol,
                        int max_panels) {
  std::vector<Panel> heap{gk31(f, a, b)};
  double value = heap[0].value, error = heap[0].error, l1 = heap[0].l1;
  const double eps = std::numeric_limits<double>::epsilon();
  while (error > std::max(abs_tol, rel_tol * std::abs(value)) && error > 50.0 * eps * l1 &&
         static_cast<int>(heap.size()) < max_panels) {
    std::pop_heap(heap.begin(), heap.end());
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end());
      break;
    }
    const Panel left = gk31(f, worst.a, mid);
    const Panel right = gk31(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    for (const auto &p : {left, right}) {
      heap.push_back(p);
      std::push_heap(heap.begin(), heap.end());
    }
  }
  // Re-sum to shed the drift of the incremental updates.
  value = error = 0.0;
  for (const auto &p : heap) {
    value += p.value;
    error += p.error;
  }
  if (!std::isfinite(value))
    throw NumericError("quadrature produced a non-finite value");
  return {value, error};
}

} // namespace detail

template <typename F>
Result integrate(F &&f, double a, double b, double rel_tol = 1e-13, double abs_tol = 0.0,
                 int max_panels = 4000) {
  if (a == b)
    return {};
  if (std::isinf(b)) {
    auto g = [&](double t) {
      const double u = 1.0 - t;
      return f(a + t / u) / (u * u);
    };
    return detail::integrate_finite(g, 0.0, 1.0, rel_tol, abs_tol, max_panels);
  }
  return detail::integrate_finite(f, a, b, rel_tol, abs_tol, max_panels);
}

/// Sum of integrate() over consecutive intervals between sorted breakpoints.
template <typename F>
Result integrate_pieces(F &&f, const std::vector<double> &points, double rel_tol = 1e-13) {
  Result total;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i + 1] > points[i])
      total += integrate(f, points[i], points[i + 1], rel_tol);
  }
  return total;
}

/// Wynn epsilon extrapolation of a sequence of partial sums.
class WynnEpsilon {
public:
  explicit WynnEpsilon(std::size_t window = 24) : window_(window) {}

  /// Pushes the next partial sum and returns the current limit estimate.
  double push(double s) {
    sums_.push_back(s);
    if (sums_.size() > window_)
      sums_.pop_front();
    return estimate();
  }

  double estimate() const {
    const std::size_t n = sums_.size();
    if (n < 3)
      return sums_.empty() ? 0.0 : sums_.back();
    std::vector<double> prev(n, 0.0), cur(sums_.begin(), sums_.end());
    double best = cur.back();
    for (std::size_t k = 1; k < n; ++k) {
      std::vector<double> next(n - k);
      for (std::size_t i = 0; i + k < n; ++i) {
        const double diff = cur[i + 1] - cur[i];
        if (diff == 0.0)
          return cur[i + 1];
        next[i] = prev[i + 1] + 1.0 / diff;
        if (!std::isfinite(next[i]))
          return best;
      }
      prev = std::move(cur);
      cur = std::move(next);
      if (k % 2 == 0)
        best = cur.back();
    }
    return best;
  }

private:
  std::size_t window_;
  std::deque<double> sums_;
};

enum class Trig { sin, cos };

/// \int_{k0}^\infty amp(k) trig(omega k) dk for a smooth, non-oscillatory,
/// decaying amplitude. omega = 0 integrates amp (cos) or returns 0 (sin).
/// abs_tol is an absolute floor used in the stopping rule.
template <typename F>
Result integrate_oscillatory_tail(F &&amp, double omega, Trig trig, double k0,
                                  double abs_tol = 1e-17, double rel_tol = 1e-14,
                                  int max_panels = 4000) {
  if (omega == 0.0) {
    if (trig == Trig::sin)
      return {};
    return integrate(amp, k0, std::numeric_limits<double>::infinity());
  }
  auto f = [&](double k) {
    return amp(k) * (trig == Trig::sin ? std::sin(omega * k) : std::cos(omega * k));
  };
  const double half = pi / omega;
  const double shift = trig == Trig::sin ? 0.0 : 0.5;
  double n = std::ceil(k0 / half - shift);
  double z = (n + shift) * half;
  if (z < k0)
    z += half;

  Result head = integrate(f, k0, z);
  double sum = head.value;
  double err = head.error;
  WynnEpsilon wynn;
  wynn.push(sum);
  double last_est = sum;
  int stable = 0;
  for (int i = 0; i < max_panels; ++i) {
    const double z1 = z + half;
    const Result panel = integrate(f, z, z1);
    z = z1;
    sum += panel.value;
    err += panel.error;
    const double est = wynn.push(sum);
    const double tol = rel_tol * std::abs(est) + abs_tol;
    if (std::abs(panel.value) < tol) {
      return {sum, err + std::abs(panel.value)};
    }
    if (i >= 6 && std::abs(est - last_est) < tol) {
      if (++stable >= 3)
        return {est, err + std::abs(est - last_est)};
    } else {
      stable = 0;
    }
    last_est = est;
  }
  throw NumericError("oscillatory tail integral failed to converge");
}

} // namespace bipolar::quad
