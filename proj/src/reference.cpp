#include "fmsys/reference.hpp"

#include <functional>
#include <map>

namespace fmsys::reference {

LatticeTrajectory simulate(const SystemRealization& sys, const LatticeSequence& u, const ComplexVector& x0,
                           int level) {
  const int d = sys.d();
  std::map<MultiIndex, ComplexVector> memo;
  std::function<ComplexVector(const MultiIndex&)> state = [&](const MultiIndex& n) -> ComplexVector {
    if (n.degree() == 0) {
      return x0;
    }
    if (auto it = memo.find(n); it != memo.end()) {
      return it->second;
    }
    ComplexVector acc = ComplexVector::Zero(sys.dim_x());
    for (int j = 0; j < d; ++j) {
      if (n[j] == 0) {
        continue;
      }
      std::vector<int> c = n.components();
      --c[static_cast<std::size_t>(j)];
      const MultiIndex m(c);
      acc += sys.a(j + 1) * state(m) + sys.b(j + 1) * u.at(m);
    }
    memo.emplace(n, acc);
    return acc;
  };

  LatticeTrajectory traj{LatticeSequence(d, level, sys.dim_x()), LatticeSequence(d, level, sys.dim_y())};
  for (int l = 0; l <= level; ++l) {
    for (const auto& n : multi_indices_of_degree(d, l)) {
      const ComplexVector xn = state(n);
      traj.x.set(n, xn);
      traj.y.set(n, sys.c() * xn + sys.dmat() * u.at(n));
    }
  }
  return traj;
}

namespace {

ComplexVector stacked_input(const WordSequence& u, int level) {
  const auto width = static_cast<Eigen::Index>(word_count(u.d(), level));
  if (level > u.level()) {
    return ComplexVector::Zero(u.space_dim() * width);
  }
  const ComplexMatrix& block = u.level_block(level);
  return Eigen::Map<const ComplexVector>(block.data(), block.size());
}

}  // namespace

LevelTrajectory simulate_levels(const SystemRealization& sys, const WordSequence& u, const ComplexVector& x_empty,
                                int level) {
  LevelTrajectory out;
  ComplexVector x = x_empty;
  for (int l = 0; l <= level; ++l) {
    const ComplexVector ul = stacked_input(u, l);
    out.x.push_back(x);
    out.y.push_back(level_output_operator(sys, l) * x + level_feedthrough_operator(sys, l) * ul);
    if (l < level) {
      x = level_state_operator(sys, l) * x + level_input_operator(sys, l) * ul;
    }
  }
  return out;
}

ComplexMatrix nc_output_transform(const SystemRealization& sys, const WordSequence& u, const ComplexVector& x_empty,
                                  const RowContractionTuple& t, int level) {
  WordSequence padded(u.d(), level, u.space_dim());
  for (int l = 0; l <= std::min(level, u.level()); ++l) {
    padded.level_block(l) = u.level_block(l);
  }
  return nc_ztransform(simulate_words(sys, padded, x_empty, level).y, t, level);
}

ComplexMatrix nc_transfer_series(const SystemRealization& sys, const RowContractionTuple& t, int level) {
  const Eigen::Index k = t.dim_k();
  ComplexMatrix acc = kron(sys.dmat(), ComplexMatrix::Identity(k, k));
  for (int l = 0; l <= level; ++l) {
    for (const Word& alpha : enumerate_words(sys.d(), l, level)) {
      ComplexMatrix a_alpha = ComplexMatrix::Identity(sys.dim_x(), sys.dim_x());
      for (int letter : alpha.letters()) {
        a_alpha = a_alpha * sys.a(letter);
      }
      for (int j = 1; j <= sys.d(); ++j) {
        const Word alpha_j = concat(alpha, Word(sys.d(), {j}));
        acc += kron(sys.c() * a_alpha * sys.b(j), word_calculus(t, alpha_j));
      }
    }
  }
  return acc;
}

IOOperatorPair build_io_pair(const SystemRealization& sys, int level) {
  const int d = sys.d();
  IOOperatorPair pair;
  pair.level = level;
  pair.dims = sys.dims();
  pair.output_offsets = {0};
  pair.input_offsets = {0};
  for (int l = 0; l <= level; ++l) {
    const auto width = static_cast<Eigen::Index>(word_count(d, l));
    pair.output_offsets.push_back(pair.output_offsets.back() + width * sys.dim_y());
    pair.input_offsets.push_back(pair.input_offsets.back() + width * sys.dim_u());
  }
  pair.t_sigma = ComplexMatrix::Zero(pair.output_offsets.back(), pair.input_offsets.back());
  pair.w_sigma = ComplexMatrix::Zero(pair.output_offsets.back(), sys.dim_x());
  for (int n = 0; n <= level; ++n) {
    for (int m = 0; m <= n; ++m) {
      ComplexMatrix block;
      if (n == m) {
        block = level_feedthrough_operator(sys, n);
      } else {
        ComplexMatrix chain = level_input_operator(sys, m);
        for (int l = m + 1; l < n; ++l) {
          chain = level_state_operator(sys, l) * chain;
        }
        block = level_output_operator(sys, n) * chain;
      }
      pair.t_sigma.block(pair.output_offsets[n], pair.input_offsets[m], block.rows(), block.cols()) = block;
    }
    ComplexMatrix chain = ComplexMatrix::Identity(sys.dim_x(), sys.dim_x());
    for (int l = 0; l < n; ++l) {
      chain = level_state_operator(sys, l) * chain;
    }
    const ComplexMatrix block = level_output_operator(sys, n) * chain;
    pair.w_sigma.middleRows(pair.output_offsets[n], block.rows()) = block;
  }
  return pair;
}

}  // namespace fmsys::reference
