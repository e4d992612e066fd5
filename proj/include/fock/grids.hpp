#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fock/types.hpp"

namespace fock {

struct GridSpec {
  double rmin = 0.1;
  double rmax = 8.0;
  int radii = 24;
  int directions = 32;
};

// Sweep grid: log-spaced radii times a fixed set of unit directions.
// Radius-major iteration lets radial kernel data be computed once per shell.
struct Grid {
  std::vector<double> radii;
  std::vector<CVec> directions;
  size_t size() const { return radii.size() * directions.size(); }
};

std::vector<CVec> sphere_directions(int d, int n, std::uint64_t seed);
Grid sweep_grid(int d, const GridSpec& spec, std::uint64_t seed);

CVec random_point(int d, double max_radius, std::mt19937_64& rng);
CMat random_unitary(int n, std::mt19937_64& rng);
CMat random_psd(int n, std::mt19937_64& rng);  // hermitian PSD, unit-ish scale

}  // namespace fock
