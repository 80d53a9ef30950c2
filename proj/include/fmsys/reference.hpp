#pragma once

// Serial, unoptimised counterparts of the parallel kernels. They follow the defining
// formulas as literally as possible and exist for cross-checking and benchmarking.

#include "fmsys/commutative.hpp"
#include "fmsys/io_operators.hpp"
#include "fmsys/noncommutative.hpp"

namespace fmsys::reference {

/// Lattice recursion evaluated by memoised descent from each n.
LatticeTrajectory simulate(const SystemRealization& sys, const LatticeSequence& u, const ComplexVector& x0, int level);

/// Level recursion with the block operators A~_L, B~_L, C~_L, D~_L materialised densely.
LevelTrajectory simulate_levels(const SystemRealization& sys, const WordSequence& u, const ComplexVector& x_empty,
                                int level);

/// nc_ztransform of the stored output of simulate_words.
ComplexMatrix nc_output_transform(const SystemRealization& sys, const WordSequence& u, const ComplexVector& x_empty,
                                  const RowContractionTuple& t, int level);

/// Word-enumeration form of the transfer series (enumerate_words + explicit products).
ComplexMatrix nc_transfer_series(const SystemRealization& sys, const RowContractionTuple& t, int level);

/// T_Sigma and W_Sigma from dense products of the materialised level operators.
IOOperatorPair build_io_pair(const SystemRealization& sys, int level);

}  // namespace fmsys::reference
