#include <doctest.h>

#include <cmath>

#include "fmsys/commutative.hpp"
#include "fmsys/errors.hpp"
#include "fmsys/reference.hpp"
#include "support.hpp"

using namespace fmsys;
using fmsys::testing::max_abs;
using fmsys::testing::seeded_system;

namespace {

LatticeSequence random_input(Rng& rng, int d, int dim_u, int support, int level) {
  LatticeSequence u(d, level, dim_u);
  for (int l = 0; l <= support; ++l)
    for (const auto& n : multi_indices_of_degree(d, l)) u.set(n, random_vector(rng, dim_u));
  return u;
}

ComplexMatrix scalar(Complex c) { return ComplexMatrix::Constant(1, 1, c); }

// Neumann-series oracle for (I - sum z_k A_k)^{-1}.
ComplexMatrix neumann_resolvent(const SystemRealization& sys, const EvaluationPoint& z, int terms) {
  ComplexMatrix m = ComplexMatrix::Zero(sys.dim_x(), sys.dim_x());
  for (int k = 1; k <= sys.d(); ++k) m += z[k - 1] * sys.a(k);
  ComplexMatrix term = ComplexMatrix::Identity(sys.dim_x(), sys.dim_x());
  ComplexMatrix sum = term;
  for (int i = 0; i < terms; ++i) {
    term = m * term;
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("scalar d = 1 recursion by hand") {
  const SystemRealization sys({scalar(0.5)}, {scalar(1.0)}, scalar(2.0), scalar(0.25));
  LatticeSequence u(1, 4, 1);
  u.set(MultiIndex{0}, ComplexVector::Constant(1, 1.0));
  u.set(MultiIndex{2}, ComplexVector::Constant(1, Complex(0.0, 1.0)));
  const auto traj = simulate(sys, u, ComplexVector::Constant(1, 3.0), 4);
  // x0 = 3, x1 = 1.5 + 1, x2 = 1.25, x3 = 0.625 + i, x4 = 0.3125 + 0.5 i
  const std::vector<Complex> x{3.0, 2.5, 1.25, {0.625, 1.0}, {0.3125, 0.5}};
  for (int n = 0; n <= 4; ++n) {
    CHECK(std::abs(traj.x.at(MultiIndex{n})(0) - x[n]) < 1e-15);
    CHECK(std::abs(traj.y.at(MultiIndex{n})(0) - (2.0 * x[n] + 0.25 * u.at(MultiIndex{n})(0))) < 1e-15);
  }
}

TEST_CASE("d = 2 recursion by hand") {
  Rng rng(17);
  const auto sys = seeded_system(4, {2, 2, 1, 1});
  LatticeSequence u = random_input(rng, 2, 1, 1, 2);
  const ComplexVector x0 = random_vector(rng, 2);
  const auto traj = simulate(sys, u, x0, 2);
  const auto& A1 = sys.a(1);
  const auto& A2 = sys.a(2);
  const auto& B1 = sys.b(1);
  const auto& B2 = sys.b(2);
  const ComplexVector u00 = u.at(MultiIndex{0, 0});
  const ComplexVector x10 = A1 * x0 + B1 * u00;
  const ComplexVector x01 = A2 * x0 + B2 * u00;
  const ComplexVector x11 = A1 * x01 + B1 * u.at(MultiIndex{0, 1}) + A2 * x10 + B2 * u.at(MultiIndex{1, 0});
  const ComplexVector x20 = A1 * x10 + B1 * u.at(MultiIndex{1, 0});
  CHECK(max_abs(traj.x.at(MultiIndex{1, 0}) - x10) < 1e-15);
  CHECK(max_abs(traj.x.at(MultiIndex{0, 1}) - x01) < 1e-15);
  CHECK(max_abs(traj.x.at(MultiIndex{1, 1}) - x11) < 1e-15);
  CHECK(max_abs(traj.x.at(MultiIndex{2, 0}) - x20) < 1e-15);
  CHECK(max_abs(traj.y.at(MultiIndex{1, 1}) - (sys.c() * x11 + sys.dmat() * u.at(MultiIndex{1, 1}))) < 1e-15);
}

TEST_CASE("parallel simulate matches the memoised reference") {
  for (int d = 1; d <= 3; ++d) {
    Rng rng(100 + d);
    const auto sys = seeded_system(200 + d, {d, 3, 2, 2});
    const auto u = random_input(rng, d, 2, 3, 7);
    const ComplexVector x0 = random_vector(rng, 3);
    const auto fast = simulate(sys, u, x0, 7);
    const auto slow = reference::simulate(sys, u, x0, 7);
    for (int l = 0; l <= 7; ++l)
      for (const auto& n : multi_indices_of_degree(d, l)) {
        CHECK(max_abs(fast.x.at(n) - slow.x.at(n)) < 1e-13);
        CHECK(max_abs(fast.y.at(n) - slow.y.at(n)) < 1e-13);
      }
  }
}

TEST_CASE("omega-weighted energy balance fails for a contractive system") {
  // System matrix [0.6 0; 0.6 0; 0.5 0] has norm sqrt(0.97) < 1, yet x(n) = 0.6^|n| omega(n).
  const SystemRealization sys({scalar(0.6), scalar(0.6)}, {scalar(0.0), scalar(0.0)}, scalar(0.5), scalar(0.0));
  REQUIRE(sys.is_dissipative());
  const LatticeSequence u(2, 4, 1);
  const ComplexVector x0 = ComplexVector::Constant(1, 1.0);
  const auto traj = simulate(sys, u, x0, 4);
  CHECK(std::abs(traj.x.at(MultiIndex{2, 1})(0) - Complex(3 * 0.216)) < 1e-15);
  CHECK(weighted_l2_norm_sq(traj.y, 3, LatticeWeight::multinomial) == doctest::Approx(0.25 * (1 + 2 * 0.36 + 10 * 0.1296 + 56 * 0.046656)));
  const auto omega = energy_balance_slack(sys, u, traj, x0, 3, LatticeWeight::multinomial);
  CHECK(omega[3] < -0.5);
  const auto inverse = energy_balance_slack(sys, u, traj, x0, 3, LatticeWeight::inverse_multinomial);
  for (double s : inverse) CHECK(s >= -1e-12);
}

TEST_CASE("inverse-omega energy balance holds on random dissipative systems") {
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 3;
    Rng rng(500 + trial);
    const auto sys = seeded_system(600 + trial, {d, 1 + trial % 4, 1 + (trial / 2) % 4, 1 + (trial / 3) % 4});
    const auto u = random_input(rng, d, sys.dim_u(), 2, 7);
    const ComplexVector x0 = random_vector(rng, sys.dim_x());
    const auto traj = simulate(sys, u, x0, 7);
    for (double s : energy_balance_slack(sys, u, traj, x0, 6, LatticeWeight::inverse_multinomial)) {
      CHECK(s >= -1e-9);
    }
  }
}

TEST_CASE("energy slack needs the next level of states") {
  const auto sys = seeded_system(1, {2, 2, 1, 1});
  const LatticeSequence u(2, 3, 1);
  const ComplexVector x0 = ComplexVector::Ones(2);
  const auto traj = simulate(sys, u, x0, 3);
  CHECK_THROWS_AS(energy_balance_slack(sys, u, traj, x0, 3), RangeError);
  CHECK(energy_balance_slack(sys, u, traj, x0, 2).size() == 3);
}

TEST_CASE("weights") {
  CHECK(lattice_weight(MultiIndex{2, 1}, LatticeWeight::multinomial) == 3.0);
  CHECK(lattice_weight(MultiIndex{2, 1}, LatticeWeight::inverse_multinomial) == doctest::Approx(1.0 / 3.0));
  LatticeSequence v(2, 2, 1);
  v.set(MultiIndex{1, 1}, ComplexVector::Constant(1, Complex(0.0, 2.0)));
  CHECK(weighted_l2_norm_sq(v, 2) == doctest::Approx(8.0));
  CHECK(weighted_l2_norm_sq(v, 1) == 0.0);
}

TEST_CASE("ztransform by hand") {
  LatticeSequence v(2, 2, 1);
  v.set(MultiIndex{0, 0}, ComplexVector::Constant(1, 1.0));
  v.set(MultiIndex{1, 1}, ComplexVector::Constant(1, 2.0));
  v.set(MultiIndex{0, 2}, ComplexVector::Constant(1, 3.0));
  const EvaluationPoint z({Complex(0.5, 0.0), Complex(0.0, 0.5)});
  const Complex expected = 1.0 + 2.0 * Complex(0.5) * Complex(0, 0.5) + 3.0 * Complex(0, 0.5) * Complex(0, 0.5);
  CHECK(std::abs(ztransform(v, z, 2)(0) - expected) < 1e-15);
  CHECK(std::abs(ztransform(v, z, 1)(0) - Complex(1.0)) < 1e-15);
}

TEST_CASE("transfer and observation functions against the Neumann series") {
  const auto sys = seeded_system(21, {3, 3, 2, 2});
  const EvaluationPoint z({Complex(0.2, 0.1), Complex(-0.1, 0.3), Complex(0.0, -0.2)});
  const ComplexMatrix r = neumann_resolvent(sys, z, 200);
  ComplexMatrix zb = ComplexMatrix::Zero(3, 2);
  for (int k = 1; k <= 3; ++k) zb += z[k - 1] * sys.b(k);
  CHECK(max_abs(observation_eval(sys, z) - sys.c() * r) < 1e-13);
  CHECK(max_abs(transfer_eval(sys, z) - (sys.dmat() + sys.c() * r * zb)) < 1e-13);
}

TEST_CASE("frequency identity") {
  for (int d = 1; d <= 3; ++d) {
    Rng rng(40 + d);
    const auto sys = seeded_system(50 + d, {d, 3, 2, 3});
    const auto u = random_input(rng, d, 2, 3, 3);
    const ComplexVector x0 = random_vector(rng, 3);
    ComplexVector zv = random_vector(rng, d);
    zv *= 0.3 / zv.norm();
    const EvaluationPoint z(std::vector<Complex>(zv.data(), zv.data() + d));
    CHECK(frequency_residual(sys, u, x0, z, 20) < 1e-6);
    // residual decreases with the truncation level
    CHECK(frequency_residual(sys, u, x0, z, 20) < frequency_residual(sys, u, x0, z, 5));
  }
}

TEST_CASE("domain checks") {
  CHECK_THROWS_AS(EvaluationPoint({Complex(0.8), Complex(0.6)}), DomainError);
  CHECK_NOTHROW(EvaluationPoint({Complex(0.7), Complex(0.7)}));
  LatticeSequence v(2, 2, 2);
  CHECK_THROWS_AS(v.set(MultiIndex{2, 1}, ComplexVector::Zero(2)), RangeError);
  CHECK_THROWS_AS(v.set(MultiIndex{1, 1}, ComplexVector::Zero(3)), DimensionError);
  CHECK(v.at(MultiIndex{9, 9}).isZero());
  const auto sys = seeded_system(2, {2, 2, 1, 1});
  CHECK_THROWS_AS(simulate(sys, LatticeSequence(3, 2, 1), ComplexVector::Zero(2), 2), DimensionError);
  CHECK_THROWS_AS(simulate(sys, LatticeSequence(2, 2, 1), ComplexVector::Zero(3), 2), DimensionError);
}
