#pragma once

#include <vector>

#include "fmsys/linalg.hpp"
#include "fmsys/noncommutative.hpp"
#include "fmsys/realization.hpp"

namespace fmsys {

/// Default truncation cap for build_io_pair: 8 for d <= 2, 6 for d = 3, and the largest
/// N with d^N <= 729 beyond that.
int io_level_cap(int d);

/// Truncated input-output operator T_Sigma and observation operator W_Sigma.
///
/// Rows and columns are level-stacked: block n covers the d^n words of length n in nu order,
/// each word contributing dim_Y rows (resp. dim_U columns).
struct IOOperatorPair {
  int level = 0;
  SystemDims dims;
  ComplexMatrix t_sigma;
  ComplexMatrix w_sigma;
  /// Row offset of output block n; output_offsets[level + 1] is the total height.
  std::vector<Eigen::Index> output_offsets;
  /// Column offset of input block m; input_offsets[level + 1] is the total width.
  std::vector<Eigen::Index> input_offsets;

  auto t_block(int n, int m) const {
    return t_sigma.block(output_offsets[n], input_offsets[m], output_offsets[n + 1] - output_offsets[n],
                         input_offsets[m + 1] - input_offsets[m]);
  }
  auto w_block(int n) const {
    return w_sigma.middleRows(output_offsets[n], output_offsets[n + 1] - output_offsets[n]);
  }
};

/// A~_L : X^{d^L} -> X^{d^{L+1}} with block row k equal to I_{d^L} (x) A_k, so that word
/// alpha feeds word k.alpha under nu.
ComplexMatrix level_state_operator(const SystemRealization& sys, int level);
/// B~_L : U^{d^L} -> X^{d^{L+1}}, same layout as level_state_operator.
ComplexMatrix level_input_operator(const SystemRealization& sys, int level);
/// C~_L = I_{d^L} (x) C.
ComplexMatrix level_output_operator(const SystemRealization& sys, int level);
/// D~_L = I_{d^L} (x) D.
ComplexMatrix level_feedthrough_operator(const SystemRealization& sys, int level);

/// Assembles T_Sigma and W_Sigma up to `level`:
///   T(n, m) = D~_n (n = m),  C~_n A~_{n-1} ... A~_{m+1} B~_m (n > m),  0 (n < m)
///   W(n)    = C~_n A~_{n-1} ... A~_0.
/// Block columns are built in parallel by pushing B~_m through the level operators
/// without materialising them. Throws RangeError if level exceeds level_cap.
IOOperatorPair build_io_pair(const SystemRealization& sys, int level, int level_cap = -1);

/// ||[T_Sigma W_Sigma]||.
double io_contractivity_norm(const IOOperatorPair& pair);

/// y = T_Sigma u + W_Sigma x0, returned word-indexed.
WordSequence io_apply(const IOOperatorPair& pair, const WordSequence& u, const ComplexVector& x0);

}  // namespace fmsys
