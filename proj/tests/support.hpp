#pragma once

#include <algorithm>
#include <cstdint>

#include "fmsys/realization.hpp"

namespace fmsys::testing {

inline double max_abs(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline SystemRealization seeded_system(std::uint64_t seed, const SystemDims& dims, double target = 0.95) {
  Rng rng(seed);
  return random_dissipative(rng, dims, target);
}

// Largest singular value by power iteration on m^* m.
inline double power_iteration_norm(const ComplexMatrix& m, int iterations = 2000) {
  Rng rng(99);
  ComplexVector v = random_vector(rng, static_cast<int>(m.cols()));
  v.normalize();
  double sigma_sq = 0.0;
  for (int i = 0; i < iterations; ++i) {
    ComplexVector w = m.adjoint() * (m * v);
    sigma_sq = w.norm();
    if (sigma_sq == 0.0) {
      return 0.0;
    }
    v = w / sigma_sq;
  }
  return std::sqrt(sigma_sq);
}

}  // namespace fmsys::testing
