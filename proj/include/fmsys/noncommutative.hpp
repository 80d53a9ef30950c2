#pragma once

#include <cstdint>
#include <vector>

#include "fmsys/commutative.hpp"
#include "fmsys/linalg.hpp"
#include "fmsys/realization.hpp"
#include "fmsys/words.hpp"

namespace fmsys {

/// Margin by which a row contraction must stay inside the unit ball.
inline constexpr double kStrictRowMargin = 1e-9;
/// Upper bound on the number of words visited by the streaming word-tree kernels.
inline constexpr std::uint64_t kMaxStreamedWords = std::uint64_t{1} << 25;

/// A sequence indexed by words of length <= level over {1..d}.
///
/// Stored densely per level: level L is a space_dim x d^L matrix whose column nu_L(alpha) - 1
/// holds w(alpha). Unset entries are zero, and so is every word beyond the level.
class WordSequence {
 public:
  WordSequence(int d, int level, int space_dim, int level_cap = kDefaultWordLevelCap);

  int d() const { return d_; }
  int level() const { return static_cast<int>(levels_.size()) - 1; }
  int space_dim() const { return space_dim_; }

  void set(const Word& w, const ComplexVector& value);
  ComplexVector at(const Word& w) const;

  /// Level L as a space_dim x d^L matrix in nu order.
  const ComplexMatrix& level_block(int level) const { return levels_[static_cast<std::size_t>(level)]; }
  ComplexMatrix& level_block(int level) { return levels_[static_cast<std::size_t>(level)]; }

 private:
  void check_word(const Word& w) const;

  int d_;
  int space_dim_;
  std::vector<ComplexMatrix> levels_;
};

/// A d-tuple (T_1, ..., T_d) of dim_K x dim_K operators with ||[T_1 ... T_d]|| <= 1 - 1e-9.
class RowContractionTuple {
 public:
  /// Throws DomainError when the tuple is empty, ragged or not a strict row contraction.
  explicit RowContractionTuple(std::vector<ComplexMatrix> t);

  /// The scalar tuple z viewed as 1x1 operators.
  static RowContractionTuple from_point(const EvaluationPoint& z);
  /// Random tuple rescaled to the given row norm (must be < 1).
  static RowContractionTuple random(Rng& rng, int d, int dim_k, double row_norm);

  int d() const { return static_cast<int>(t_.size()); }
  int dim_k() const { return static_cast<int>(t_.front().rows()); }
  const ComplexMatrix& t(int k) const { return t_[static_cast<std::size_t>(k - 1)]; }
  const std::vector<ComplexMatrix>& operators() const { return t_; }

  /// ||[T_1 ... T_d]||.
  double row_norm() const { return row_norm_; }
  /// ||col[T_1; ...; T_d]||.
  double column_norm() const;

 private:
  std::vector<ComplexMatrix> t_;
  double row_norm_ = 0.0;
};

struct WordTrajectory {
  WordSequence x;
  WordSequence y;
};

/// Level-stacked trajectory: entry L is the vector over X^{d^L} (resp. Y^{d^L}) with word
/// blocks in nu_L order.
struct LevelTrajectory {
  std::vector<ComplexVector> x;
  std::vector<ComplexVector> y;
};

/// x(k.alpha) = A_k x(alpha) + B_k u(alpha), y(alpha) = C x(alpha) + D u(alpha), x(empty) = x_empty.
/// Word-by-word serial recursion.
WordTrajectory simulate_words(const SystemRealization& sys, const WordSequence& u, const ComplexVector& x_empty,
                              int level);

/// The same system driven through the level operators
///   x~(L+1) = A~_L x~(L) + B~_L u~(L),  y~(L) = C~_L x~(L) + D~_L u~(L).
/// Words within a level are processed in parallel.
LevelTrajectory simulate_levels(const SystemRealization& sys, const WordSequence& u, const ComplexVector& x_empty,
                                int level);

/// Flattens each level of `w` into a stacked vector (word blocks in nu order).
std::vector<ComplexVector> to_level_stacked(const WordSequence& w);
/// Inverse of to_level_stacked.
WordSequence from_level_stacked(int d, int space_dim, const std::vector<ComplexVector>& stacked);

/// T^alpha = T_{i_N} ... T_{i_1}; the identity for the empty word.
ComplexMatrix word_calculus(const RowContractionTuple& t, const Word& w);

/// T^alpha for every word of length `level`, in nu order.
std::vector<ComplexMatrix> word_powers(const RowContractionTuple& t, int level);

/// sum_{|alpha| <= level} w(alpha) (x) T^alpha, a (space_dim * dim_K) x dim_K matrix.
ComplexMatrix nc_ztransform(const WordSequence& w, const RowContractionTuple& t, int level);

/// Truncated transform sum_{|alpha| <= level} y(alpha) (x) T^alpha of the output of the system
/// driven by u (zero beyond its level) and x_empty. The word tree is walked depth first in
/// parallel subtrees without storing the trajectory, so `level` may exceed the word cap.
ComplexMatrix nc_output_transform(const SystemRealization& sys, const WordSequence& u,
                                  const ComplexVector& x_empty, const RowContractionTuple& t, int level);

/// F(T) = D (x) I + (C (x) I)(I - sum A_k (x) T_k)^{-1}(sum B_k (x) T_k).
ComplexMatrix nc_transfer_eval(const SystemRealization& sys, const RowContractionTuple& t);

/// D (x) I + sum_k sum_{|alpha| <= level} (C A^alpha B_k) (x) T^{alpha.k}, summed word by word.
ComplexMatrix nc_transfer_series(const SystemRealization& sys, const RowContractionTuple& t, int level);

/// W(T) = (C (x) I)(I - sum A_k (x) T_k)^{-1}.
ComplexMatrix nc_observation_eval(const SystemRealization& sys, const RowContractionTuple& t);

/// sum_{|alpha| <= level} (C A^alpha) (x) T^alpha, summed word by word.
ComplexMatrix nc_observation_series(const SystemRealization& sys, const RowContractionTuple& t, int level);

/// Geometric rate bounding the level terms of the transfer/observation series:
/// max(||rowA||, ||colA||) * ||rowT||.
double series_rate(const SystemRealization& sys, const RowContractionTuple& t);

/// Smallest N with rate^{N+1} / (1 - rate) <= tail. Throws DomainError unless 0 <= rate < 1.
int series_level_for_tail(double rate, double tail);

/// ||Y_N(T) - F(T) U(T) - W(T)(x_empty (x) I)|| (operator norm), with Y_N streamed from the
/// simulated output and U taken over the full finite support of u.
double nc_frequency_residual(const SystemRealization& sys, const WordSequence& u, const ComplexVector& x_empty,
                             const RowContractionTuple& t, int level);

/// Aggregates w over abelianization fibres: w_bar(n) = sum_{a(alpha) = n} w(alpha).
LatticeSequence symmetrize(const WordSequence& w, int level);

/// Telescoped energy balance over F_d, unweighted:
///   slack(N) = [sum_{|a|<=N} |u(a)|^2 + |x(empty)|^2] - [sum_{|a|<=N} |y(a)|^2 + sum_{|a|=N+1} |x(a)|^2].
/// The trajectory must reach level + 1, otherwise RangeError.
std::vector<double> nc_energy_slack(const SystemRealization& sys, const WordSequence& u,
                                    const WordTrajectory& traj, const ComplexVector& x_empty, int level);

}  // namespace fmsys
