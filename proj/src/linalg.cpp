#include "fmsys/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fmsys/errors.hpp"

namespace fmsys {

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) {
    throw DimensionError("operator_norm: empty matrix");
  }
  if (m.rows() == 1 || m.cols() == 1) {
    return m.norm();
  }
  // BDCSVD falls back to one-sided Jacobi for small blocks.
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

bool is_contraction(const ComplexMatrix& m, double tol) {
  return operator_norm(m) <= 1.0 + tol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index p = b.rows();
  const Eigen::Index q = b.cols();
  ComplexMatrix out(a.rows() * p, a.cols() * q);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out.block(i * p, j * q, p, q) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix resolvent_solve(const ComplexMatrix& m, const ComplexMatrix& rhs) {
  if (m.rows() != m.cols()) {
    throw DimensionError("resolvent_solve: operator is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  }
  if (rhs.rows() != m.rows()) {
    throw DimensionError("resolvent_solve: rhs has " + std::to_string(rhs.rows()) +
                         " rows, operator has " + std::to_string(m.rows()));
  }
  if (m.rows() == 0) {
    return rhs;
  }
  const ComplexMatrix shifted = ComplexMatrix::Identity(m.rows(), m.cols()) - m;
  Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
  const double rcond = lu.rcond();
  if (!(rcond > 0.0) || 1.0 / rcond > kSingularConditionLimit) {
    throw SingularityError("resolvent_solve: I - m is numerically singular (rcond " +
                           std::to_string(rcond) + ")");
  }
  return lu.solve(rhs);
}

ComplexMatrix project_to_contraction(const ComplexMatrix& m, double target_norm) {
  if (!(target_norm > 0.0 && target_norm <= 1.0)) {
    throw DomainError("project_to_contraction: target_norm must lie in (0, 1]");
  }
  if (m.size() == 0 || operator_norm(m) <= target_norm) {
    return m;
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    s(i) = std::min(s(i), target_norm);
  }
  ComplexMatrix out = svd.matrixU() * s.cast<Complex>().asDiagonal() * svd.matrixV().adjoint();
  // Rounding in the reconstruction can overshoot by an ulp or two.
  const double achieved = operator_norm(out);
  if (achieved > target_norm) {
    out *= target_norm / achieved;
  }
  return out;
}

ComplexMatrix hstack(std::span<const ComplexMatrix> blocks) {
  if (blocks.empty()) {
    return {};
  }
  const Eigen::Index rows = blocks.front().rows();
  Eigen::Index cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != rows) {
      throw DimensionError("hstack: row counts differ");
    }
    cols += b.cols();
  }
  ComplexMatrix out(rows, cols);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return out;
}

ComplexMatrix vstack(std::span<const ComplexMatrix> blocks) {
  if (blocks.empty()) {
    return {};
  }
  const Eigen::Index cols = blocks.front().cols();
  Eigen::Index rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != cols) {
      throw DimensionError("vstack: column counts differ");
    }
    rows += b.rows();
  }
  ComplexMatrix out(rows, cols);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  return out;
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace fmsys
