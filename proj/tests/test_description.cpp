#include <doctest.h>

#include <string>

#include "fmsys/description.hpp"
#include "fmsys/errors.hpp"
#include "support.hpp"

using namespace fmsys;
using fmsys::testing::max_abs;

namespace {

void check_same_system(const SystemRealization& a, const SystemRealization& b) {
  REQUIRE(a.d() == b.d());
  for (int k = 1; k <= a.d(); ++k) {
    CHECK(a.a(k) == b.a(k));
    CHECK(a.b(k) == b.b(k));
  }
  CHECK(a.c() == b.c());
  CHECK(a.dmat() == b.dmat());
}

std::string error_of(const std::string& text) {
  try {
    description_from_json(parse_json_text(text, "test.json"));
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("round trip is bit exact") {
  for (auto flavor : {Flavor::commutative, Flavor::noncommutative}) {
    const auto desc = random_description(flavor, {3, 4, 2, 3}, 2, 77);
    const std::string text = dump_json(description_to_json(desc));
    const auto back = description_from_json(parse_json_text(text, "mem"));
    CHECK(back.flavor == flavor);
    CHECK(back.dim_k == 2);
    check_same_system(desc.system, back.system);
    CHECK(dump_json(description_to_json(back)) == text);
  }
}

TEST_CASE("seeded generation is deterministic") {
  const auto a = random_description(Flavor::commutative, {2, 3, 1, 1}, 1, 5);
  const auto b = random_description(Flavor::commutative, {2, 3, 1, 1}, 1, 5);
  const auto c = random_description(Flavor::commutative, {2, 3, 1, 1}, 1, 6);
  CHECK(dump_json(description_to_json(a)) == dump_json(description_to_json(b)));
  CHECK(dump_json(description_to_json(a)) != dump_json(description_to_json(c)));
  CHECK(a.system.system_norm() == doctest::Approx(0.95).epsilon(1e-12));
}

TEST_CASE("seed-only descriptions expand to the seeded random system") {
  const auto expanded = description_from_json(parse_json_text(
      R"({"flavor": "noncommutative", "d": 2, "dims": {"x": 3, "u": 1, "y": 2, "k": 2}, "seed": 11})", "mem"));
  const auto direct = random_description(Flavor::noncommutative, {2, 3, 1, 2}, 2, 11);
  check_same_system(expanded.system, direct.system);
  CHECK(expanded.seed == std::optional<std::uint64_t>(11));
}

TEST_CASE("explicit matrices, real shorthand") {
  const auto desc = description_from_json(parse_json_text(R"({
    "flavor": "commutative", "d": 1, "dims": {"x": 1, "u": 1, "y": 1},
    "A": [[[0.5]]], "B": [[[[0, 1]]]], "C": [[[1, 0]]], "D": [[0.25]]
  })", "mem"));
  CHECK(desc.system.a(1)(0, 0) == Complex(0.5));
  CHECK(desc.system.b(1)(0, 0) == Complex(0, 1));
  CHECK(desc.system.dmat()(0, 0) == Complex(0.25));
}

TEST_CASE("errors name the offending field") {
  CHECK(error_of(R"({"flavor": "commutative", "d": 1, "dims": {"x": 1, "u": 1, "y": 1}})").find("seed") !=
        std::string::npos);
  CHECK(error_of(R"({"flavor": "weird", "d": 1, "dims": {"x": 1, "u": 1, "y": 1}, "seed": 1})").find("flavor") !=
        std::string::npos);
  const std::string shape = error_of(R"({
    "flavor": "commutative", "d": 1, "dims": {"x": 1, "u": 1, "y": 1},
    "A": [[[0.5, 0.1]]], "B": [[[0]]], "C": [[0]], "D": [[0]]
  })");
  CHECK(shape.find("A") != std::string::npos);
  const std::string syntax = error_of("{\n  \"flavor\": ,\n}");
  CHECK(syntax.find("test.json:2:") != std::string::npos);
  CHECK(error_of(R"({"flavor": "commutative", "d": 0, "dims": {"x": 1, "u": 1, "y": 1}, "seed": 1})") != "");
}

TEST_CASE("flavor names") {
  CHECK(parse_flavor("commutative") == Flavor::commutative);
  CHECK(to_string(Flavor::noncommutative) == "noncommutative");
  CHECK_THROWS_AS(parse_flavor("nc"), ParseError);
}

TEST_CASE("matrix json helpers") {
  ComplexMatrix m(2, 1);
  m << Complex(1.0 / 3.0, -2.0), Complex(1e-300, 5e300);
  CHECK(matrix_from_json(matrix_to_json(m), "m") == m);
  CHECK_THROWS_AS(matrix_from_json(parse_json_text("[[[1,2]],[[1,2],[3,4]]]", "m"), "M"), ParseError);
  CHECK_THROWS_AS(complex_from_json(parse_json_text("[1,2,3]", "c"), "c"), ParseError);
}
