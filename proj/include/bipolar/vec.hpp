#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace bipolar {

using Vec3 = Eigen::Vector3d;
using complex = std::complex<double>;

/// Exponent triple (p_x, p_y, p_z) of a Cartesian monomial or derivative.
using Exponents = std::array<int, 3>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double four_pi = 4.0 * std::numbers::pi;

inline int degree(const Exponents &p) { return p[0] + p[1] + p[2]; }

inline Exponents operator+(const Exponents &a, const Exponents &b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

/// All exponent triples with p_x + p_y + p_z = l, in lexicographically
/// descending p_x, then p_y order.
inline std::vector<Exponents> exponent_triples(int l) {
  std::vector<Exponents> out;
  out.reserve(static_cast<std::size_t>((l + 1) * (l + 2) / 2));
  for (int px = l; px >= 0; --px)
    for (int py = l - px; py >= 0; --py)
      out.push_back({px, py, l - px - py});
  return out;
}

inline double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i)
    r *= x;
  return r;
}

inline double sign_pow(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

} // namespace bipolar
