#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fmsys/linalg.hpp"
#include "fmsys/realization.hpp"

namespace fmsys {

enum class Flavor { commutative, noncommutative };

std::string to_string(Flavor flavor);
/// Throws ParseError for anything but "commutative" / "noncommutative".
Flavor parse_flavor(const std::string& text);

/// Malformed configuration. The message names the offending field or the line/column.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// On-disk system description.
///
///   {
///     "flavor": "commutative" | "noncommutative",
///     "d": 2,
///     "dims": {"x": 2, "u": 1, "y": 1, "k": 1},
///     "A": [M_1, ..., M_d], "B": [M_1, ..., M_d], "C": M, "D": M,
///     "seed": 7,            // optional
///     "target_norm": 0.95   // optional, used with seed when matrices are omitted
///   }
///
/// Each matrix M is a list of rows, each row a list of [re, im] pairs. When A, B, C, D are
/// all omitted and a seed is given, a random dissipative realization is generated.
struct SystemDescription {
  Flavor flavor = Flavor::commutative;
  int dim_k = 1;
  std::optional<std::uint64_t> seed;
  double target_norm = 0.95;
  SystemRealization system;
};

nlohmann::json matrix_to_json(const ComplexMatrix& m);
/// `field` is used in error messages.
ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& field);

nlohmann::json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const nlohmann::json& j, const std::string& field);

nlohmann::json complex_to_json(Complex c);
Complex complex_from_json(const nlohmann::json& j, const std::string& field);

SystemDescription description_from_json(const nlohmann::json& j);
nlohmann::json description_to_json(const SystemDescription& desc);

/// Parses JSON text; syntax errors are reported with line and column.
nlohmann::json parse_json_text(const std::string& text, const std::string& source);
SystemDescription load_description(const std::filesystem::path& path);

/// Seeded random description with explicit matrices.
SystemDescription random_description(Flavor flavor, const SystemDims& dims, int dim_k, std::uint64_t seed,
                                     double target_norm = 0.95);

/// Serialises JSON as text; doubles use the shortest representation that round-trips exactly.
std::string dump_json(const nlohmann::json& j);

}  // namespace fmsys
