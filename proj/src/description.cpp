#include "fmsys/description.hpp"

#include <fstream>
#include <sstream>

#include "fmsys/errors.hpp"

namespace fmsys {

using nlohmann::json;

std::string to_string(Flavor flavor) {
  return flavor == Flavor::commutative ? "commutative" : "noncommutative";
}

Flavor parse_flavor(const std::string& text) {
  if (text == "commutative") {
    return Flavor::commutative;
  }
  if (text == "noncommutative") {
    return Flavor::noncommutative;
  }
  throw ParseError("flavor: expected \"commutative\" or \"noncommutative\", got \"" + text + "\"");
}

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j, const std::string& field) {
  if (j.is_number()) {
    return {j.get<double>(), 0.0};
  }
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("field '" + field + "': expected a [re, im] pair, got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(complex_to_json(m(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) {
    throw ParseError("field '" + field + "': expected a list of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) {
    return ComplexMatrix(0, 0);
  }
  if (!j[0].is_array()) {
    throw ParseError("field '" + field + "[0]': expected a row (list of [re, im] pairs)");
  }
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    const std::string row_field = field + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError("field '" + row_field + "': expected " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = complex_from_json(row[static_cast<std::size_t>(c)], row_field + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

json vector_to_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(complex_to_json(v(i)));
  }
  return out;
}

ComplexVector vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) {
    throw ParseError("field '" + field + "': expected a list of [re, im] pairs");
  }
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

namespace {

int require_count(const json& obj, const char* key, const std::string& field, int minimum) {
  if (!obj.contains(key)) {
    throw ParseError("field '" + field + "': missing");
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < minimum) {
    throw ParseError("field '" + field + "': expected an integer >= " + std::to_string(minimum));
  }
  return v.get<int>();
}

// Matrix with shape `rows` x `cols`, reading a 0 x 0 empty list as the zero-size block.
ComplexMatrix shaped_matrix(const json& j, const std::string& field, int rows, int cols) {
  ComplexMatrix m = matrix_from_json(j, field);
  if (m.size() == 0 && (rows == 0 || cols == 0)) {
    return ComplexMatrix(rows, cols);
  }
  if (m.rows() != rows || m.cols() != cols) {
    throw ParseError("field '" + field + "': is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!all_finite(m)) {
    throw ParseError("field '" + field + "': non-finite entry");
  }
  return m;
}

}  // namespace

SystemDescription description_from_json(const json& j) {
  if (!j.is_object()) {
    throw ParseError("system description: expected a JSON object at top level");
  }
  const Flavor flavor = j.contains("flavor") ? parse_flavor(j.at("flavor").get<std::string>()) : Flavor::commutative;
  const int d = require_count(j, "d", "d", 1);
  if (!j.contains("dims") || !j.at("dims").is_object()) {
    throw ParseError("field 'dims': missing or not an object");
  }
  const json& dj = j.at("dims");
  SystemDims dims{d, require_count(dj, "x", "dims.x", 0), require_count(dj, "u", "dims.u", 0),
                  require_count(dj, "y", "dims.y", 0)};
  const int dim_k = dj.contains("k") ? require_count(dj, "k", "dims.k", 1) : 1;

  std::optional<std::uint64_t> seed;
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) {
      throw ParseError("field 'seed': expected a nonnegative integer");
    }
    seed = j.at("seed").get<std::uint64_t>();
  }
  double target = 0.95;
  if (j.contains("target_norm")) {
    if (!j.at("target_norm").is_number()) {
      throw ParseError("field 'target_norm': expected a number");
    }
    target = j.at("target_norm").get<double>();
    if (!(target > 0.0 && target <= 1.0)) {
      throw ParseError("field 'target_norm': must lie in (0, 1]");
    }
  }

  const bool has_any = j.contains("A") || j.contains("B") || j.contains("C") || j.contains("D");
  if (!has_any) {
    if (!seed) {
      throw ParseError("system description: matrices A, B, C, D are missing and no seed was given");
    }
    return random_description(flavor, dims, dim_k, *seed, target);
  }
  for (const char* key : {"A", "B", "C", "D"}) {
    if (!j.contains(key)) {
      throw ParseError(std::string("field '") + key + "': missing");
    }
  }
  std::vector<ComplexMatrix> a;
  std::vector<ComplexMatrix> b;
  for (const char* key : {"A", "B"}) {
    const json& list = j.at(key);
    if (!list.is_array() || static_cast<int>(list.size()) != d) {
      throw ParseError(std::string("field '") + key + "': expected a list of " + std::to_string(d) + " matrices");
    }
    for (int k = 0; k < d; ++k) {
      const std::string field = std::string(key) + "[" + std::to_string(k + 1) + "]";
      const int cols = key[0] == 'A' ? dims.state : dims.input;
      (key[0] == 'A' ? a : b).push_back(shaped_matrix(list[static_cast<std::size_t>(k)], field, dims.state, cols));
    }
  }
  ComplexMatrix c = shaped_matrix(j.at("C"), "C", dims.output, dims.state);
  ComplexMatrix dm = shaped_matrix(j.at("D"), "D", dims.output, dims.input);
  return SystemDescription{flavor, dim_k, seed, target,
                           SystemRealization(std::move(a), std::move(b), std::move(c), std::move(dm))};
}

json description_to_json(const SystemDescription& desc) {
  const SystemRealization& sys = desc.system;
  json j;
  j["flavor"] = to_string(desc.flavor);
  j["d"] = sys.d();
  j["dims"] = {{"x", sys.dim_x()}, {"u", sys.dim_u()}, {"y", sys.dim_y()}, {"k", desc.dim_k}};
  json a = json::array();
  json b = json::array();
  for (int k = 1; k <= sys.d(); ++k) {
    a.push_back(matrix_to_json(sys.a(k)));
    b.push_back(matrix_to_json(sys.b(k)));
  }
  j["A"] = std::move(a);
  j["B"] = std::move(b);
  j["C"] = matrix_to_json(sys.c());
  j["D"] = matrix_to_json(sys.dmat());
  if (desc.seed) {
    j["seed"] = *desc.seed;
    j["target_norm"] = desc.target_norm;
  }
  return j;
}

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line/column.
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + e.what());
  }
}

SystemDescription load_description(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return description_from_json(parse_json_text(buffer.str(), path.string()));
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const DimensionError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

SystemDescription random_description(Flavor flavor, const SystemDims& dims, int dim_k, std::uint64_t seed,
                                     double target_norm) {
  Rng rng(seed);
  return SystemDescription{flavor, dim_k, seed, target_norm, random_dissipative(rng, dims, target_norm)};
}

std::string dump_json(const json& j) { return j.dump(2); }

}  // namespace fmsys
