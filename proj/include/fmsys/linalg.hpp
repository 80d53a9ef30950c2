#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace fmsys {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Condition-number estimate above which resolvent_solve reports a singular system.
inline constexpr double kSingularConditionLimit = 1e14;

/// Largest singular value. Throws DimensionError on an empty matrix.
double operator_norm(const ComplexMatrix& m);

/// operator_norm(m) <= 1 + tol.
bool is_contraction(const ComplexMatrix& m, double tol = 0.0);

/// Kronecker product; entry (i*p + k, j*q + l) is a(i, j) * b(k, l).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Solves (I - m) x = rhs.
///
/// Uses an LU factorisation with a reciprocal-condition estimate; if the estimate
/// exceeds kSingularConditionLimit a SingularityError is thrown. Callers only form
/// resolvents at points where the spectral radius of m is below one, so hitting the
/// error means the point or the system is outside its domain.
ComplexMatrix resolvent_solve(const ComplexMatrix& m, const ComplexMatrix& rhs);

/// Clips the singular values of m at target_norm. Returns m unchanged when it
/// already satisfies operator_norm(m) <= target_norm.
ComplexMatrix project_to_contraction(const ComplexMatrix& m, double target_norm);

/// Horizontal concatenation [m_1 ... m_d]; all blocks must share a row count.
ComplexMatrix hstack(std::span<const ComplexMatrix> blocks);

/// Vertical concatenation [m_1; ...; m_d]; all blocks must share a column count.
ComplexMatrix vstack(std::span<const ComplexMatrix> blocks);

/// True when every entry is finite.
bool all_finite(const ComplexMatrix& m);

}  // namespace fmsys
