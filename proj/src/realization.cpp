#include "fmsys/realization.hpp"

#include <string>

#include "fmsys/errors.hpp"

namespace fmsys {

namespace {

void require_shape(const ComplexMatrix& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionError(std::string("SystemRealization: ") + name + " is " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  if (!all_finite(m)) {
    throw DomainError(std::string("SystemRealization: ") + name + " has non-finite entries");
  }
}

}  // namespace

SystemRealization::SystemRealization(std::vector<ComplexMatrix> a, std::vector<ComplexMatrix> b,
                                     ComplexMatrix c, ComplexMatrix d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  if (a_.empty()) {
    throw DimensionError("SystemRealization: need at least one state map (d >= 1)");
  }
  if (b_.size() != a_.size()) {
    throw DimensionError("SystemRealization: " + std::to_string(a_.size()) + " state maps but " +
                         std::to_string(b_.size()) + " input maps");
  }
  const Eigen::Index nx = c_.cols();
  const Eigen::Index nu = d_.cols();
  const Eigen::Index ny = d_.rows();
  require_shape(c_, ny, nx, "C");
  require_shape(d_, ny, nu, "D");
  for (std::size_t k = 0; k < a_.size(); ++k) {
    const std::string ak = "A_" + std::to_string(k + 1);
    const std::string bk = "B_" + std::to_string(k + 1);
    require_shape(a_[k], nx, nx, ak.c_str());
    require_shape(b_[k], nx, nu, bk.c_str());
  }
}

SystemRealization SystemRealization::zero(const SystemDims& dims) {
  std::vector<ComplexMatrix> a(static_cast<std::size_t>(dims.d), ComplexMatrix::Zero(dims.state, dims.state));
  std::vector<ComplexMatrix> b(static_cast<std::size_t>(dims.d), ComplexMatrix::Zero(dims.state, dims.input));
  return SystemRealization(std::move(a), std::move(b), ComplexMatrix::Zero(dims.output, dims.state),
                           ComplexMatrix::Zero(dims.output, dims.input));
}

ComplexMatrix SystemRealization::system_matrix() const {
  const Eigen::Index nx = dim_x();
  const Eigen::Index nu = dim_u();
  ComplexMatrix m(d() * nx + dim_y(), nx + nu);
  for (int k = 0; k < d(); ++k) {
    m.block(k * nx, 0, nx, nx) = a_[static_cast<std::size_t>(k)];
    m.block(k * nx, nx, nx, nu) = b_[static_cast<std::size_t>(k)];
  }
  m.block(d() * nx, 0, dim_y(), nx) = c_;
  m.block(d() * nx, nx, dim_y(), nu) = d_;
  return m;
}

ComplexMatrix SystemRealization::state_column() const { return vstack(a_); }

ComplexMatrix SystemRealization::state_row() const { return hstack(a_); }

SystemRealization SystemRealization::from_system_matrix(const ComplexMatrix& m, const SystemDims& dims) {
  const Eigen::Index nx = dims.state;
  const Eigen::Index nu = dims.input;
  if (dims.d < 1 || m.rows() != dims.d * nx + dims.output || m.cols() != nx + nu) {
    throw DimensionError("from_system_matrix: matrix size does not match dims");
  }
  std::vector<ComplexMatrix> a;
  std::vector<ComplexMatrix> b;
  for (int k = 0; k < dims.d; ++k) {
    a.emplace_back(m.block(k * nx, 0, nx, nx));
    b.emplace_back(m.block(k * nx, nx, nx, nu));
  }
  return SystemRealization(std::move(a), std::move(b), m.block(dims.d * nx, 0, dims.output, nx),
                           m.block(dims.d * nx, nx, dims.output, nu));
}

SystemRealization SystemRealization::scaled(double factor) const {
  return from_system_matrix(factor * system_matrix(), dims());
}

SystemRealization SystemRealization::with_multiplicity(int dim_k) const {
  if (dim_k < 1) {
    throw DomainError("with_multiplicity: dim_k must be >= 1");
  }
  const ComplexMatrix id = ComplexMatrix::Identity(dim_k, dim_k);
  std::vector<ComplexMatrix> a;
  std::vector<ComplexMatrix> b;
  for (int k = 1; k <= d(); ++k) {
    a.push_back(kron(this->a(k), id));
    b.push_back(kron(this->b(k), id));
  }
  return SystemRealization(std::move(a), std::move(b), kron(c_, id), kron(d_, id));
}

ComplexMatrix random_gaussian(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  // Column-major fill, real part then imaginary part, so seeds replay identically.
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

ComplexVector random_vector(Rng& rng, int size) { return random_gaussian(rng, size, 1).col(0); }

SystemRealization random_dissipative(Rng& rng, const SystemDims& dims, double target_norm) {
  if (dims.d < 1 || dims.state < 0 || dims.input < 0 || dims.output < 0) {
    throw DimensionError("random_dissipative: invalid dims");
  }
  const ComplexMatrix raw = random_gaussian(rng, dims.d * dims.state + dims.output, dims.state + dims.input);
  return SystemRealization::from_system_matrix(project_to_contraction(raw, target_norm), dims);
}

}  // namespace fmsys
