#include "fmsys/io_operators.hpp"

#include <cmath>
#include <string>

#include "fmsys/errors.hpp"

namespace fmsys {

int io_level_cap(int d) {
  if (d <= 2) {
    return 8;
  }
  if (d == 3) {
    return 6;
  }
  int n = 0;
  std::uint64_t count = 1;
  while (count * static_cast<std::uint64_t>(d) <= 729) {
    count *= static_cast<std::uint64_t>(d);
    ++n;
  }
  return n;
}

namespace {

Eigen::Index words_at(int d, int level) { return static_cast<Eigen::Index>(word_count(d, level)); }

ComplexMatrix level_extension(const std::vector<ComplexMatrix>& blocks, int d, int level) {
  const Eigen::Index width = words_at(d, level);
  const Eigen::Index rows = blocks.front().rows();
  const Eigen::Index cols = blocks.front().cols();
  ComplexMatrix out = ComplexMatrix::Zero(rows * width * d, cols * width);
  for (int k = 0; k < d; ++k) {
    for (Eigen::Index j = 0; j < width; ++j) {
      out.block((k * width + j) * rows, j * cols, rows, cols) = blocks[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

// Applies A~_L to the columns of `x` (stacked level-L states).
ComplexMatrix apply_state_level(const SystemRealization& sys, int level, const ComplexMatrix& x) {
  const Eigen::Index nx = sys.dim_x();
  const Eigen::Index width = words_at(sys.d(), level);
  ComplexMatrix out(nx * width * sys.d(), x.cols());
  for (int k = 1; k <= sys.d(); ++k) {
    for (Eigen::Index j = 0; j < width; ++j) {
      out.middleRows(((k - 1) * width + j) * nx, nx).noalias() = sys.a(k) * x.middleRows(j * nx, nx);
    }
  }
  return out;
}

ComplexMatrix apply_output_level(const SystemRealization& sys, int level, const ComplexMatrix& x) {
  const Eigen::Index nx = sys.dim_x();
  const Eigen::Index ny = sys.dim_y();
  const Eigen::Index width = words_at(sys.d(), level);
  ComplexMatrix out(ny * width, x.cols());
  for (Eigen::Index j = 0; j < width; ++j) {
    out.middleRows(j * ny, ny).noalias() = sys.c() * x.middleRows(j * nx, nx);
  }
  return out;
}

std::vector<Eigen::Index> offsets(int d, int level, Eigen::Index per_word) {
  std::vector<Eigen::Index> out{0};
  for (int l = 0; l <= level; ++l) {
    out.push_back(out.back() + per_word * words_at(d, l));
  }
  return out;
}

}  // namespace

ComplexMatrix level_state_operator(const SystemRealization& sys, int level) {
  return level_extension(sys.a_blocks(), sys.d(), level);
}

ComplexMatrix level_input_operator(const SystemRealization& sys, int level) {
  return level_extension(sys.b_blocks(), sys.d(), level);
}

ComplexMatrix level_output_operator(const SystemRealization& sys, int level) {
  const Eigen::Index width = words_at(sys.d(), level);
  return kron(ComplexMatrix::Identity(width, width), sys.c());
}

ComplexMatrix level_feedthrough_operator(const SystemRealization& sys, int level) {
  const Eigen::Index width = words_at(sys.d(), level);
  return kron(ComplexMatrix::Identity(width, width), sys.dmat());
}

IOOperatorPair build_io_pair(const SystemRealization& sys, int level, int level_cap) {
  const int cap = level_cap < 0 ? io_level_cap(sys.d()) : level_cap;
  if (level < 0 || level > cap) {
    throw RangeError("build_io_pair: level " + std::to_string(level) + " outside 0.." + std::to_string(cap));
  }
  const int d = sys.d();
  IOOperatorPair pair;
  pair.level = level;
  pair.dims = sys.dims();
  pair.output_offsets = offsets(d, level, sys.dim_y());
  pair.input_offsets = offsets(d, level, sys.dim_u());
  pair.t_sigma = ComplexMatrix::Zero(pair.output_offsets.back(), pair.input_offsets.back());
  pair.w_sigma = ComplexMatrix::Zero(pair.output_offsets.back(), sys.dim_x());

  // Block column m of T_Sigma (m = 0..level) and, as column index level + 1, W_Sigma.
#pragma omp parallel for schedule(dynamic)
  for (int m = 0; m <= level + 1; ++m) {
    const bool observation = m == level + 1;
    ComplexMatrix carried;
    int n = 0;
    if (observation) {
      carried = ComplexMatrix::Identity(sys.dim_x(), sys.dim_x());
      n = 0;
    } else {
      pair.t_sigma.block(pair.output_offsets[m], pair.input_offsets[m],
                         pair.output_offsets[m + 1] - pair.output_offsets[m],
                         pair.input_offsets[m + 1] - pair.input_offsets[m]) = level_feedthrough_operator(sys, m);
      if (m == level) {
        continue;
      }
      carried = level_input_operator(sys, m);
      n = m + 1;
    }
    // carried holds A~_{n-1} ... B~_m (or A~_{n-1} ... A~_0) acting into level n states.
    for (; n <= level; ++n) {
      const ComplexMatrix block = apply_output_level(sys, n, carried);
      if (observation) {
        pair.w_sigma.middleRows(pair.output_offsets[n], block.rows()) = block;
      } else {
        pair.t_sigma.block(pair.output_offsets[n], pair.input_offsets[m], block.rows(), block.cols()) = block;
      }
      if (n < level) {
        carried = apply_state_level(sys, n, carried);
      }
    }
  }
  return pair;
}

double io_contractivity_norm(const IOOperatorPair& pair) {
  ComplexMatrix joined(pair.t_sigma.rows(), pair.t_sigma.cols() + pair.w_sigma.cols());
  joined << pair.t_sigma, pair.w_sigma;
  if (joined.size() == 0) {
    return 0.0;
  }
  return operator_norm(joined);
}

WordSequence io_apply(const IOOperatorPair& pair, const WordSequence& u, const ComplexVector& x0) {
  if (u.d() != pair.dims.d || u.space_dim() != pair.dims.input) {
    throw DimensionError("io_apply: input sequence does not match the operator's alphabet or input size");
  }
  if (x0.size() != pair.dims.state) {
    throw DimensionError("io_apply: initial state has size " + std::to_string(x0.size()) + ", expected " +
                         std::to_string(pair.dims.state));
  }
  if (u.level() < pair.level) {
    throw RangeError("io_apply: input truncated at level " + std::to_string(u.level()) + " < " +
                     std::to_string(pair.level));
  }
  ComplexVector stacked(pair.input_offsets.back());
  for (int l = 0; l <= pair.level; ++l) {
    const ComplexMatrix& block = u.level_block(l);
    stacked.segment(pair.input_offsets[l], block.size()) = Eigen::Map<const ComplexVector>(block.data(), block.size());
  }
  const ComplexVector y = pair.t_sigma * stacked + pair.w_sigma * x0;
  std::vector<ComplexVector> levels;
  for (int l = 0; l <= pair.level; ++l) {
    levels.emplace_back(y.segment(pair.output_offsets[l], pair.output_offsets[l + 1] - pair.output_offsets[l]));
  }
  return from_level_stacked(pair.dims.d, pair.dims.output, levels);
}

}  // namespace fmsys
