#include "fmsys/commutative.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "fmsys/errors.hpp"

namespace fmsys {

LatticeSequence::LatticeSequence(int d, int level, int space_dim) : d_(d), level_(level), space_dim_(space_dim) {
  if (d < 1 || level < 0 || space_dim < 0) {
    throw DomainError("LatticeSequence: need d >= 1, level >= 0, space_dim >= 0");
  }
}

void LatticeSequence::set(const MultiIndex& n, ComplexVector value) {
  if (n.dimension() != d_) {
    throw DimensionError("LatticeSequence::set: multi-index dimension " + std::to_string(n.dimension()) +
                         ", expected " + std::to_string(d_));
  }
  if (n.degree() > level_) {
    throw RangeError("LatticeSequence::set: |n| = " + std::to_string(n.degree()) + " beyond level " +
                     std::to_string(level_));
  }
  if (value.size() != space_dim_) {
    throw DimensionError("LatticeSequence::set: value has size " + std::to_string(value.size()) + ", expected " +
                         std::to_string(space_dim_));
  }
  values_.insert_or_assign(n, std::move(value));
}

ComplexVector LatticeSequence::at(const MultiIndex& n) const {
  if (const auto* v = find(n)) {
    return *v;
  }
  return ComplexVector::Zero(space_dim_);
}

const ComplexVector* LatticeSequence::find(const MultiIndex& n) const {
  auto it = values_.find(n);
  return it == values_.end() ? nullptr : &it->second;
}

EvaluationPoint::EvaluationPoint(std::vector<Complex> z) : z_(std::move(z)) {
  if (z_.empty()) {
    throw DomainError("EvaluationPoint: empty coordinate list");
  }
  if (!(norm() < 1.0)) {
    throw DomainError("EvaluationPoint: sum |z_j|^2 = " + std::to_string(norm() * norm()) +
                      " is not inside the unit ball");
  }
}

double EvaluationPoint::norm() const {
  double s = 0.0;
  for (const auto& zj : z_) {
    s += std::norm(zj);
  }
  return std::sqrt(s);
}

Complex EvaluationPoint::power(const MultiIndex& n) const {
  Complex out(1.0, 0.0);
  for (int j = 0; j < n.dimension(); ++j) {
    for (int e = 0; e < n[j]; ++e) {
      out *= z_[static_cast<std::size_t>(j)];
    }
  }
  return out;
}

namespace {

void check_simulation_inputs(const SystemRealization& sys, const LatticeSequence& u, const ComplexVector& x0,
                             int level) {
  if (level < 0) {
    throw RangeError("simulate: negative level");
  }
  if (u.d() != sys.d()) {
    throw DimensionError("simulate: input lattice dimension " + std::to_string(u.d()) + ", system has d = " +
                         std::to_string(sys.d()));
  }
  if (u.space_dim() != sys.dim_u()) {
    throw DimensionError("simulate: input vectors have size " + std::to_string(u.space_dim()) + ", expected " +
                         std::to_string(sys.dim_u()));
  }
  if (x0.size() != sys.dim_x()) {
    throw DimensionError("simulate: x0 has size " + std::to_string(x0.size()) + ", expected " +
                         std::to_string(sys.dim_x()));
  }
}

}  // namespace

LatticeTrajectory simulate(const SystemRealization& sys, const LatticeSequence& u, const ComplexVector& x0,
                           int level) {
  check_simulation_inputs(sys, u, x0, level);
  const int d = sys.d();
  LatticeTrajectory traj{LatticeSequence(d, level, sys.dim_x()), LatticeSequence(d, level, sys.dim_y())};
  const ComplexVector zero_u = ComplexVector::Zero(sys.dim_u());

  auto input_at = [&](const MultiIndex& n) -> const ComplexVector& {
    const auto* v = u.find(n);
    return v ? *v : zero_u;
  };

  traj.x.set(MultiIndex::zero(d), x0);
  for (int lvl = 1; lvl <= level; ++lvl) {
    const std::vector<MultiIndex> points = multi_indices_of_degree(d, lvl);
    std::vector<ComplexVector> states(points.size());
    const auto& prev = traj.x;
    // Each point at level lvl reads only level lvl - 1.
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(points.size()); ++p) {
      const MultiIndex& n = points[static_cast<std::size_t>(p)];
      ComplexVector acc = ComplexVector::Zero(sys.dim_x());
      std::vector<int> c = n.components();
      for (int j = 0; j < d; ++j) {
        if (c[static_cast<std::size_t>(j)] == 0) {
          continue;
        }
        --c[static_cast<std::size_t>(j)];
        const MultiIndex m(c);
        if (const auto* xm = prev.find(m)) {
          acc.noalias() += sys.a(j + 1) * (*xm);
        }
        acc.noalias() += sys.b(j + 1) * input_at(m);
        ++c[static_cast<std::size_t>(j)];
      }
      states[static_cast<std::size_t>(p)] = std::move(acc);
    }
    for (std::size_t p = 0; p < points.size(); ++p) {
      traj.x.set(points[p], std::move(states[p]));
    }
  }
  for (const auto& [n, xn] : traj.x.entries()) {
    traj.y.set(n, sys.c() * xn + sys.dmat() * input_at(n));
  }
  return traj;
}

double lattice_weight(const MultiIndex& n, LatticeWeight weight) {
  const double w = omega_weight(n);
  return weight == LatticeWeight::multinomial ? w : 1.0 / w;
}

double weighted_l2_norm_sq(const LatticeSequence& v, int level, LatticeWeight weight) {
  double s = 0.0;
  for (const auto& [n, vn] : v.entries()) {
    if (n.degree() <= level) {
      s += lattice_weight(n, weight) * vn.squaredNorm();
    }
  }
  return s;
}

std::vector<double> energy_balance_slack(const SystemRealization& sys, const LatticeSequence& u,
                                         const LatticeTrajectory& traj, const ComplexVector& x0, int level,
                                         LatticeWeight weight) {
  if (level < 0) {
    throw RangeError("energy_balance_slack: negative level");
  }
  if (traj.x.level() < level + 1 || traj.y.level() < level) {
    throw RangeError("energy_balance_slack: trajectory reaches level " + std::to_string(traj.x.level()) +
                     ", need " + std::to_string(level + 1));
  }
  if (traj.x.space_dim() != sys.dim_x() || traj.y.space_dim() != sys.dim_y() || u.space_dim() != sys.dim_u() ||
      x0.size() != sys.dim_x()) {
    throw DimensionError("energy_balance_slack: trajectory does not match system dimensions");
  }
  // Per-level sums, indexed by |n|.
  std::vector<double> in(static_cast<std::size_t>(level + 1), 0.0);
  std::vector<double> out(static_cast<std::size_t>(level + 1), 0.0);
  std::vector<double> state(static_cast<std::size_t>(level + 2), 0.0);
  for (const auto& [n, un] : u.entries()) {
    if (n.degree() <= level) {
      in[static_cast<std::size_t>(n.degree())] += lattice_weight(n, weight) * un.squaredNorm();
    }
  }
  for (const auto& [n, yn] : traj.y.entries()) {
    if (n.degree() <= level) {
      out[static_cast<std::size_t>(n.degree())] += lattice_weight(n, weight) * yn.squaredNorm();
    }
  }
  for (const auto& [n, xn] : traj.x.entries()) {
    if (n.degree() <= level + 1) {
      state[static_cast<std::size_t>(n.degree())] += lattice_weight(n, weight) * xn.squaredNorm();
    }
  }
  std::vector<double> slack;
  slack.reserve(static_cast<std::size_t>(level + 1));
  double supplied = x0.squaredNorm();
  double delivered = 0.0;
  for (int lvl = 0; lvl <= level; ++lvl) {
    supplied += in[static_cast<std::size_t>(lvl)];
    delivered += out[static_cast<std::size_t>(lvl)];
    slack.push_back(supplied - (delivered + state[static_cast<std::size_t>(lvl + 1)]));
  }
  return slack;
}

ComplexVector ztransform(const LatticeSequence& v, const EvaluationPoint& z, int level) {
  if (z.d() != v.d()) {
    throw DimensionError("ztransform: point has " + std::to_string(z.d()) + " coordinates, sequence lives on Z_+^" +
                         std::to_string(v.d()));
  }
  ComplexVector out = ComplexVector::Zero(v.space_dim());
  for (const auto& [n, vn] : v.entries()) {
    if (n.degree() <= level) {
      out += z.power(n) * vn;
    }
  }
  return out;
}

namespace {

struct PencilAtPoint {
  ComplexMatrix a;  // sum z_k A_k
  ComplexMatrix b;  // sum z_k B_k
};

PencilAtPoint pencil(const SystemRealization& sys, const EvaluationPoint& z) {
  if (z.d() != sys.d()) {
    throw DimensionError("evaluation point has " + std::to_string(z.d()) + " coordinates, system has d = " +
                         std::to_string(sys.d()));
  }
  PencilAtPoint p{ComplexMatrix::Zero(sys.dim_x(), sys.dim_x()), ComplexMatrix::Zero(sys.dim_x(), sys.dim_u())};
  for (int k = 1; k <= sys.d(); ++k) {
    p.a += z[k - 1] * sys.a(k);
    p.b += z[k - 1] * sys.b(k);
  }
  return p;
}

}  // namespace

ComplexMatrix transfer_eval(const SystemRealization& sys, const EvaluationPoint& z) {
  const PencilAtPoint p = pencil(sys, z);
  return sys.dmat() + sys.c() * resolvent_solve(p.a, p.b);
}

ComplexMatrix observation_eval(const SystemRealization& sys, const EvaluationPoint& z) {
  const PencilAtPoint p = pencil(sys, z);
  return sys.c() * resolvent_solve(p.a, ComplexMatrix::Identity(sys.dim_x(), sys.dim_x()));
}

double frequency_residual(const SystemRealization& sys, const LatticeSequence& u, const ComplexVector& x0,
                          const EvaluationPoint& z, int level) {
  const LatticeTrajectory traj = simulate(sys, u, x0, level);
  const ComplexVector y_hat = ztransform(traj.y, z, level);
  const ComplexVector u_hat = ztransform(u, z, u.level());
  const ComplexVector predicted = transfer_eval(sys, z) * u_hat + observation_eval(sys, z) * x0;
  return (y_hat - predicted).norm();
}

}  // namespace fmsys
