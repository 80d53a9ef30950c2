#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fmsys/linalg.hpp"

namespace fmsys {

/// Tolerance on the system-matrix norm when a realization is treated as dissipative.
inline constexpr double kDissipativeTol = 1e-9;

/// Block sizes of a realization.
struct SystemDims {
  int d = 1;
  int state = 0;
  int input = 0;
  int output = 0;
};

/// State-space data (A_1..A_d, B_1..B_d, C, D) shared by the lattice and free-semigroup
/// flavours.
///
/// Invariants are checked by the constructor: d >= 1, all blocks sized consistently and
/// all entries finite. Contractivity is not enforced, it is queried with is_dissipative().
class SystemRealization {
 public:
  SystemRealization(std::vector<ComplexMatrix> a, std::vector<ComplexMatrix> b, ComplexMatrix c,
                    ComplexMatrix d);

  /// All-zero realization with the given sizes.
  static SystemRealization zero(const SystemDims& dims);

  int d() const { return static_cast<int>(a_.size()); }
  int dim_x() const { return static_cast<int>(c_.cols()); }
  int dim_u() const { return static_cast<int>(d_.cols()); }
  int dim_y() const { return static_cast<int>(d_.rows()); }
  SystemDims dims() const { return {d(), dim_x(), dim_u(), dim_y()}; }

  /// A_k, B_k for k in 1..d.
  const ComplexMatrix& a(int k) const { return a_[static_cast<std::size_t>(k - 1)]; }
  const ComplexMatrix& b(int k) const { return b_[static_cast<std::size_t>(k - 1)]; }
  const std::vector<ComplexMatrix>& a_blocks() const { return a_; }
  const std::vector<ComplexMatrix>& b_blocks() const { return b_; }
  const ComplexMatrix& c() const { return c_; }
  const ComplexMatrix& dmat() const { return d_; }

  /// [A_1 B_1; ...; A_d B_d; C D] : X (+) U -> X^d (+) Y.
  ComplexMatrix system_matrix() const;
  /// col[A_1; ...; A_d].
  ComplexMatrix state_column() const;
  /// [A_1 ... A_d].
  ComplexMatrix state_row() const;

  double system_norm() const { return operator_norm(system_matrix()); }
  bool is_dissipative(double tol = kDissipativeTol) const { return system_norm() <= 1.0 + tol; }

  /// Rebuilds a realization from a stacked system matrix.
  static SystemRealization from_system_matrix(const ComplexMatrix& m, const SystemDims& dims);

  /// Realization with every block multiplied by `factor`.
  SystemRealization scaled(double factor) const;

  /// The Part-B multiplicity form: A_k (x) I_K, B_k (x) I_K, C (x) I_K, D (x) I_K.
  SystemRealization with_multiplicity(int dim_k) const;

 private:
  std::vector<ComplexMatrix> a_;
  std::vector<ComplexMatrix> b_;
  ComplexMatrix c_;
  ComplexMatrix d_;
};

using Rng = std::mt19937_64;

/// Matrix with independent standard complex Gaussian entries.
ComplexMatrix random_gaussian(Rng& rng, int rows, int cols);

/// Complex Gaussian vector.
ComplexVector random_vector(Rng& rng, int size);

/// Gaussian blocks assembled into the system matrix and clipped to `target_norm`.
SystemRealization random_dissipative(Rng& rng, const SystemDims& dims, double target_norm = 0.95);

}  // namespace fmsys
