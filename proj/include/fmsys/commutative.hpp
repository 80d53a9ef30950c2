#pragma once

#include <map>
#include <vector>

#include "fmsys/linalg.hpp"
#include "fmsys/realization.hpp"
#include "fmsys/words.hpp"

namespace fmsys {

/// A sequence on Z_+^d truncated at a level, stored sparsely. Missing entries read as zero.
class LatticeSequence {
 public:
  LatticeSequence(int d, int level, int space_dim);

  int d() const { return d_; }
  int level() const { return level_; }
  int space_dim() const { return space_dim_; }

  /// Throws RangeError if |n| exceeds the level and DimensionError on a size mismatch.
  void set(const MultiIndex& n, ComplexVector value);
  /// v(n), or zero if unset or beyond the level.
  ComplexVector at(const MultiIndex& n) const;
  /// Pointer to the stored value, nullptr when absent.
  const ComplexVector* find(const MultiIndex& n) const;

  const std::map<MultiIndex, ComplexVector>& entries() const { return values_; }

 private:
  int d_;
  int level_;
  int space_dim_;
  std::map<MultiIndex, ComplexVector> values_;
};

/// A point z of the open unit ball B^d. Throws DomainError unless sum |z_j|^2 < 1.
class EvaluationPoint {
 public:
  explicit EvaluationPoint(std::vector<Complex> z);

  int d() const { return static_cast<int>(z_.size()); }
  Complex operator[](int j) const { return z_[static_cast<std::size_t>(j)]; }
  const std::vector<Complex>& coords() const { return z_; }
  /// Euclidean norm of z.
  double norm() const;
  /// z^n = z_1^{n_1} ... z_d^{n_d}.
  Complex power(const MultiIndex& n) const;

 private:
  std::vector<Complex> z_;
};

struct LatticeTrajectory {
  LatticeSequence x;
  LatticeSequence y;
};

/// Runs x(n) = sum_j A_j x(n - e_j) + B_j u(n - e_j), y(n) = C x(n) + D u(n) for |n| <= level,
/// with x(0) = x0. Inputs beyond u's truncation level read as zero. Entries within one
/// level are computed in parallel.
LatticeTrajectory simulate(const SystemRealization& sys, const LatticeSequence& u, const ComplexVector& x0,
                           int level);

/// Weighting of lattice energies.
enum class LatticeWeight {
  /// omega(n) = |n|!/n!, the weighting written for the lattice energy balance.
  multinomial,
  /// 1/omega(n); the weighting obtained by aggregating free-semigroup trajectories.
  inverse_multinomial,
};

double lattice_weight(const MultiIndex& n, LatticeWeight weight);

/// sum_{|n| <= level} w(n) ||v(n)||^2.
double weighted_l2_norm_sq(const LatticeSequence& v, int level, LatticeWeight weight = LatticeWeight::multinomial);

/// Per-level slack of the telescoped energy balance:
///   slack(N) = [sum_{|n|<=N} w(n)|u(n)|^2 + |x0|^2] - [sum_{|n|<=N} w(n)|y(n)|^2 + sum_{|n|=N+1} w(n)|x(n)|^2]
/// for N = 0..level. The trajectory must reach level + 1, otherwise RangeError.
std::vector<double> energy_balance_slack(const SystemRealization& sys, const LatticeSequence& u,
                                         const LatticeTrajectory& traj, const ComplexVector& x0, int level,
                                         LatticeWeight weight = LatticeWeight::multinomial);

/// Truncated Z-transform sum_{|n| <= level} z^n v(n).
ComplexVector ztransform(const LatticeSequence& v, const EvaluationPoint& z, int level);

/// F(z) = D + C (I - sum z_k A_k)^{-1} (sum z_k B_k).
ComplexMatrix transfer_eval(const SystemRealization& sys, const EvaluationPoint& z);

/// W(z) = C (I - sum z_k A_k)^{-1}.
ComplexMatrix observation_eval(const SystemRealization& sys, const EvaluationPoint& z);

/// ||y_hat_N(z) - F(z) u_hat(z) - W(z) x0|| where y_hat_N is the level-N Z-transform of the
/// simulated output and u_hat is taken over the full (finite) support of u.
double frequency_residual(const SystemRealization& sys, const LatticeSequence& u, const ComplexVector& x0,
                          const EvaluationPoint& z, int level);

}  // namespace fmsys
