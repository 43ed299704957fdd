#pragma once

// Shared helpers for the test suites: seeded generators and a few stock
// grids. Oracle transcriptions stay inside the individual test files so they
// remain independent of the library code they check.

#include <random>

#include "nuctrace/grid.hpp"

namespace nuctrace::testing {

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

inline CVector random_complex_vector(std::mt19937_64& gen, Eigen::Index n, Real scale = 1.0) {
  std::uniform_real_distribution<Real> dist(-scale, scale);
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(dist(gen), dist(gen));
  return v;
}

inline SampledFunction random_function(std::mt19937_64& gen, const GridPtr& grid,
                                       Real scale = 1.0) {
  return SampledFunction(grid, random_complex_vector(gen, grid->size(), scale));
}

inline GridPtr unit_torus_grid(int n) {
  return ProductGrid::make({Axis::periodic_uniform(n, 1.0)});
}

inline GridPtr unit_torus_grid_2d(int nx, int ny) {
  return ProductGrid::make({Axis::periodic_uniform(nx, 1.0), Axis::periodic_uniform(ny, 1.0)});
}

}  // namespace nuctrace::testing
