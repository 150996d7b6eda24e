// Interaction energy of a uniform sphere and a Gaussian cloud by every
// route, over a few separations.

#include "bipolar/bipolar.hpp"

#include <cstdio>

int main() {
  using namespace bipolar;
  const auto sphere = charge::DensityModel::uniform_sphere(1.0, 1.0);
  const auto cloud = charge::DensityModel::gaussian(1.0, 2.0);

  std::printf("%6s %18s %18s %18s %18s\n", "R", "direct", "fourier", "multipole", "overlap");
  for (double R : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const energy::TwoBodySystem sys{sphere, cloud, Vec3(0, 0, R)};
    const double d = energy::energy_direct(sys).value;
    const double f = energy::energy_fourier(sys).value;
    if (R == 0.0) {
      std::printf("%6.2f %18.12f %18.12f %18s %18s\n", R, d, f, "-", "-");
      continue;
    }
    const energy::Truncation t{8, 4};
    std::printf("%6.2f %18.12f %18.12f %18.12f %18.12f\n", R, d, f, energy::energy_multipole(sys, t).value,
                energy::overlap_correction(sys, t).value);
  }
  std::printf("closed form at R=0: %.12f\n", energy::closed_sphere_gaussian(1.0, 1.0, 1.0, 2.0));
}
