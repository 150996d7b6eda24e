// First-order H-H and H-proton energies: closed form, numeric inversion of
// the k-space result, and the classical cloud energy.

#include "bipolar/bipolar.hpp"

#include <cstdio>

int main() {
  using namespace bipolar;
  const perturb::PerturbSystem hp{perturb::SystemKind::hydrogen_proton};
  const perturb::PerturbSystem hh{perturb::SystemKind::hydrogen_hydrogen};
  const auto H = charge::DensityModel::hydrogen1s();
  const auto p = charge::DensityModel::point(1.0);

  std::printf("%6s %16s %16s %16s | %16s %16s %16s\n", "R", "hp closed", "hp numeric", "hp cloud", "hh closed",
              "hh numeric", "hh cloud");
  for (double R : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0}) {
    const Vec3 Rv(0, 0, R);
    std::printf("%6.2f %16.10f %16.10f %16.10f | %16.10f %16.10f %16.10f\n", R, perturb::e1_closed(hp, R),
                perturb::e1_numeric(hp, R), energy::energy_fourier({H, p, Rv}).value, perturb::e1_closed(hh, R),
                perturb::e1_numeric(hh, R), energy::energy_fourier({H, H, Rv}).value);
  }
}
