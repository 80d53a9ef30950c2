#include <doctest.h>

#include <vector>

#include "fmsys/errors.hpp"
#include "fmsys/linalg.hpp"
#include "support.hpp"

using namespace fmsys;
using fmsys::testing::max_abs;

TEST_CASE("operator_norm agrees with power iteration") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix m = random_gaussian(rng, 2 + trial % 4, 1 + trial % 5);
    CHECK(operator_norm(m) == doctest::Approx(fmsys::testing::power_iteration_norm(m)).epsilon(1e-10));
  }
}

TEST_CASE("operator_norm of a vector is its Euclidean norm") {
  ComplexMatrix v(3, 1);
  v << Complex(3, 0), Complex(0, 4), Complex(0, 0);
  CHECK(operator_norm(v) == doctest::Approx(5.0));
  CHECK(operator_norm(v.transpose()) == doctest::Approx(5.0));
}

TEST_CASE("operator_norm rejects empty matrices") { CHECK_THROWS_AS(operator_norm(ComplexMatrix(0, 3)), DimensionError); }

TEST_CASE("kron matches the index formula") {
  Rng rng(5);
  const ComplexMatrix a = random_gaussian(rng, 2, 3);
  const ComplexMatrix b = random_gaussian(rng, 4, 2);
  const ComplexMatrix k = kron(a, b);
  REQUIRE(k.rows() == 8);
  REQUIRE(k.cols() == 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 2; ++q) CHECK(k(i * 4 + p, j * 2 + q) == a(i, j) * b(p, q));
}

TEST_CASE("resolvent_solve agrees with the Neumann series") {
  Rng rng(7);
  ComplexMatrix m = random_gaussian(rng, 4, 4);
  m *= 0.4 / operator_norm(m);
  const ComplexMatrix rhs = random_gaussian(rng, 4, 2);
  ComplexMatrix term = rhs;
  ComplexMatrix sum = rhs;
  for (int k = 0; k < 80; ++k) {
    term = m * term;
    sum += term;
  }
  CHECK(max_abs(resolvent_solve(m, rhs) - sum) < 1e-13);
}

TEST_CASE("resolvent_solve detects singular systems") {
  CHECK_THROWS_AS(resolvent_solve(ComplexMatrix::Identity(3, 3), ComplexMatrix::Ones(3, 1)), SingularityError);
  CHECK_THROWS_AS(resolvent_solve(ComplexMatrix::Identity(3, 3), ComplexMatrix::Ones(2, 1)), DimensionError);
}

TEST_CASE("project_to_contraction clips to the target norm") {
  Rng rng(11);
  const ComplexMatrix m = 3.0 * random_gaussian(rng, 5, 3);
  const ComplexMatrix p = project_to_contraction(m, 0.95);
  CHECK(operator_norm(p) <= 0.95 + 1e-15);
  CHECK(operator_norm(p) == doctest::Approx(0.95).epsilon(1e-12));

  const ComplexMatrix small = m * (0.5 / operator_norm(m));
  CHECK(project_to_contraction(small, 0.95) == small);

  CHECK_THROWS_AS(project_to_contraction(m, 0.0), DomainError);
  CHECK_THROWS_AS(project_to_contraction(m, 1.5), DomainError);
}

TEST_CASE("project_to_contraction keeps singular vectors") {
  // diag(2, 0.5) clipped at 0.9 is diag(0.9, 0.5).
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 2.0;
  m(1, 1) = 0.5;
  const ComplexMatrix p = project_to_contraction(m, 0.9);
  CHECK(std::abs(p(0, 0) - Complex(0.9)) < 1e-14);
  CHECK(std::abs(p(1, 1) - Complex(0.5)) < 1e-14);
  CHECK(std::abs(p(0, 1)) < 1e-14);
}

TEST_CASE("is_contraction uses the tolerance") {
  const ComplexMatrix m = ComplexMatrix::Identity(2, 2) * (1.0 + 1e-10);
  CHECK_FALSE(is_contraction(m));
  CHECK(is_contraction(m, 1e-9));
}

TEST_CASE("hstack and vstack") {
  const std::vector<ComplexMatrix> blocks{ComplexMatrix::Ones(2, 1), ComplexMatrix::Zero(2, 3)};
  const ComplexMatrix h = hstack(blocks);
  CHECK(h.rows() == 2);
  CHECK(h.cols() == 4);
  CHECK(h(1, 0) == Complex(1.0));
  CHECK_THROWS_AS(vstack(blocks), DimensionError);
  const std::vector<ComplexMatrix> rows{ComplexMatrix::Ones(1, 2), ComplexMatrix::Zero(3, 2)};
  CHECK(vstack(rows).rows() == 4);
}

TEST_CASE("all_finite") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  CHECK(all_finite(m));
  m(1, 1) = Complex(0.0, std::numeric_limits<double>::quiet_NaN());
  CHECK_FALSE(all_finite(m));
}
