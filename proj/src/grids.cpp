#include "fock/grids.hpp"

#include <cmath>

namespace fock {

std::vector<CVec> sphere_directions(int d, int n, std::uint64_t seed) {
  std::vector<CVec> dirs;
  dirs.reserve(n);
  if (d == 1) {
    // golden-angle sequence on the circle, rotated by the seed
    const double golden = 0.6180339887498949;
    const double offset = double(seed % 997) / 997.0;
    for (int j = 0; j < n; ++j) {
      const double th = 2.0 * M_PI * std::fmod(offset + golden * j, 1.0);
      CVec u(1);
      u[0] = std::polar(1.0, th);
      dirs.push_back(u);
    }
    return dirs;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int j = 0; j < n; ++j) {
    CVec u(d);
    do {
      for (int i = 0; i < d; ++i) u[i] = Complex(gauss(rng), gauss(rng));
    } while (u.norm() < 1e-8);
    u /= u.norm();
    dirs.push_back(u);
  }
  return dirs;
}

Grid sweep_grid(int d, const GridSpec& spec, std::uint64_t seed) {
  Grid g;
  const double llo = std::log(spec.rmin), lhi = std::log(spec.rmax);
  for (int i = 0; i < spec.radii; ++i)
    g.radii.push_back(spec.radii == 1
                          ? spec.rmax
                          : std::exp(llo + (lhi - llo) * i / (spec.radii - 1.0)));
  g.directions = sphere_directions(d, spec.directions, seed);
  return g;
}

CVec random_point(int d, double max_radius, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  CVec u(d);
  do {
    for (int i = 0; i < d; ++i) u[i] = Complex(gauss(rng), gauss(rng));
  } while (u.norm() < 1e-8);
  u /= u.norm();
  // uniform in radius (favors the interior less than uniform in volume would)
  return (max_radius * unif(rng)) * u;
}

CMat random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMat> qr(a);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix column phases so the factorization is unique and well-spread
  for (int j = 0; j < n; ++j) {
    const Complex rjj = r(j, j);
    if (std::abs(rjj) > 0) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

CMat random_psd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
  CMat s = a * a.adjoint();
  return s / double(n);
}

}  // namespace fock
