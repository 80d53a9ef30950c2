#include "fmsys/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fmsys/commutative.hpp"
#include "fmsys/errors.hpp"
#include "fmsys/noncommutative.hpp"

namespace fmsys {
namespace {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

int random_support(const std::string& text) {
  if (text == "random") {
    return 2;
  }
  const std::string tail = text.substr(7);
  std::size_t used = 0;
  int m = -1;
  try {
    m = std::stoi(tail, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tail.size() || m < 0) {
    throw ParseError("input: expected random:M with M >= 0, got \"" + text + "\"");
  }
  return m;
}

ComplexVector build_state(const StateSpec& spec, int dim_x, Rng& rng) {
  const std::string& s = spec.text;
  if (s == "zero") {
    return ComplexVector::Zero(dim_x);
  }
  if (s == "unit") {
    if (dim_x == 0) {
      throw ParseError("x0: \"unit\" needs a nonzero state dimension");
    }
    return ComplexVector::Unit(dim_x, 0);
  }
  if (s == "random") {
    return random_vector(rng, dim_x);
  }
  const nlohmann::json j = (!s.empty() && s.front() == '[') ? parse_json_text(s, "x0") : read_json_file(s);
  ComplexVector x0 = vector_from_json(j, "x0");
  if (x0.size() != dim_x) {
    throw ParseError("x0: expected " + std::to_string(dim_x) + " entries, got " + std::to_string(x0.size()));
  }
  return x0;
}

// Entries of an input file whose degree exceeds `level` are ignored.
LatticeSequence build_lattice_input(const InputSpec& spec, const SystemRealization& sys, int level, Rng& rng) {
  const int d = sys.d();
  LatticeSequence u(d, level, sys.dim_u());
  const std::string& s = spec.text;
  if (s == "zero") {
    return u;
  }
  if (s == "delta") {
    u.set(MultiIndex::zero(d), ComplexVector::Ones(sys.dim_u()));
    return u;
  }
  if (starts_with(s, "random")) {
    const int m = std::min(random_support(s), level);
    for (int l = 0; l <= m; ++l) {
      for (const auto& n : multi_indices_of_degree(d, l)) {
        u.set(n, random_vector(rng, sys.dim_u()));
      }
    }
    return u;
  }
  const nlohmann::json j = read_json_file(s);
  if (!j.contains("entries") || !j["entries"].is_array()) {
    throw ParseError("input: missing \"entries\" array in " + s);
  }
  for (std::size_t i = 0; i < j["entries"].size(); ++i) {
    const auto& e = j["entries"][i];
    const std::string field = "input.entries[" + std::to_string(i) + "]";
    if (!e.contains("index") || !e.contains("value")) {
      throw ParseError(field + ": expected \"index\" and \"value\"");
    }
    std::vector<int> comps;
    try {
      comps = e["index"].get<std::vector<int>>();
    } catch (const nlohmann::json::exception&) {
      throw ParseError(field + ".index: expected a list of integers");
    }
    if (static_cast<int>(comps.size()) != d) {
      throw ParseError(field + ".index: expected " + std::to_string(d) + " components");
    }
    MultiIndex n(comps);
    if (n.degree() > level) {
      continue;
    }
    ComplexVector v = vector_from_json(e["value"], field + ".value");
    if (v.size() != sys.dim_u()) {
      throw ParseError(field + ".value: expected " + std::to_string(sys.dim_u()) + " entries");
    }
    u.set(n, std::move(v));
  }
  return u;
}

WordSequence build_word_input(const InputSpec& spec, const SystemRealization& sys, int level, Rng& rng) {
  const int d = sys.d();
  WordSequence u(d, level, sys.dim_u());
  const std::string& s = spec.text;
  if (s == "zero") {
    return u;
  }
  if (s == "delta") {
    u.level_block(0).setOnes();
    return u;
  }
  if (starts_with(s, "random")) {
    const int m = std::min(random_support(s), level);
    for (int l = 0; l <= m; ++l) {
      u.level_block(l) = random_gaussian(rng, sys.dim_u(), static_cast<int>(word_count(d, l)));
    }
    return u;
  }
  const nlohmann::json j = read_json_file(s);
  if (!j.contains("entries") || !j["entries"].is_array()) {
    throw ParseError("input: missing \"entries\" array in " + s);
  }
  for (std::size_t i = 0; i < j["entries"].size(); ++i) {
    const auto& e = j["entries"][i];
    const std::string field = "input.entries[" + std::to_string(i) + "]";
    if (!e.contains("word") || !e.contains("value")) {
      throw ParseError(field + ": expected \"word\" and \"value\"");
    }
    std::vector<int> letters;
    try {
      letters = e["word"].get<std::vector<int>>();
    } catch (const nlohmann::json::exception&) {
      throw ParseError(field + ".word: expected a list of integers");
    }
    if (static_cast<int>(letters.size()) > level) {
      continue;
    }
    Word w = [&] {
      try {
        return Word(d, letters);
      } catch (const std::exception& ex) {
        throw ParseError(field + ".word: " + ex.what());
      }
    }();
    ComplexVector v = vector_from_json(e["value"], field + ".value");
    if (v.size() != sys.dim_u()) {
      throw ParseError(field + ".value: expected " + std::to_string(sys.dim_u()) + " entries");
    }
    u.set(w, v);
  }
  return u;
}

std::string csv_rows(const std::string& table, const std::vector<double>& values) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) {
    os << table << ',' << i << ',' << values[i] << '\n';
  }
  return os.str();
}

struct EnergyTables {
  std::vector<double> input;
  std::vector<double> output;
  std::vector<double> boundary;
  std::vector<double> slack;
};

nlohmann::json tables_json(const EnergyTables& t) {
  return {{"input", t.input}, {"output", t.output}, {"state_boundary", t.boundary}, {"slack", t.slack}};
}

std::string tables_csv(const std::string& prefix, const EnergyTables& t) {
  return csv_rows(prefix + "input", t.input) + csv_rows(prefix + "output", t.output) +
         csv_rows(prefix + "state_boundary", t.boundary) + csv_rows(prefix + "slack", t.slack);
}

EnergyTables lattice_tables(const LatticeSequence& u, const LatticeTrajectory& traj, const ComplexVector& x0,
                            int level, LatticeWeight weight) {
  const int d = u.d();
  EnergyTables t;
  double in = 0.0;
  double out = 0.0;
  for (int l = 0; l <= level; ++l) {
    for (const auto& n : multi_indices_of_degree(d, l)) {
      const double w = lattice_weight(n, weight);
      in += w * u.at(n).squaredNorm();
      out += w * traj.y.at(n).squaredNorm();
    }
    double boundary = 0.0;
    for (const auto& n : multi_indices_of_degree(d, l + 1)) {
      boundary += lattice_weight(n, weight) * traj.x.at(n).squaredNorm();
    }
    t.input.push_back(in);
    t.output.push_back(out);
    t.boundary.push_back(boundary);
    t.slack.push_back(in + x0.squaredNorm() - out - boundary);
  }
  return t;
}

SimulateResult simulate_commutative(const SystemDescription& desc, const SimulateRequest& req) {
  const SystemRealization& sys = desc.system;
  Rng rng(req.seed);
  const LatticeSequence u = build_lattice_input(req.input, sys, req.level + 1, rng);
  const ComplexVector x0 = build_state(req.x0, sys.dim_x(), rng);
  const LatticeTrajectory traj = simulate(sys, u, x0, req.level + 1);

  nlohmann::json entries = nlohmann::json::array();
  for (int l = 0; l <= req.level; ++l) {
    for (const auto& n : multi_indices_of_degree(sys.d(), l)) {
      entries.push_back({{"index", n.components()},
                         {"u", vector_to_json(u.at(n))},
                         {"x", vector_to_json(traj.x.at(n))},
                         {"y", vector_to_json(traj.y.at(n))}});
    }
  }
  const EnergyTables omega = lattice_tables(u, traj, x0, req.level, LatticeWeight::multinomial);
  const EnergyTables inverse = lattice_tables(u, traj, x0, req.level, LatticeWeight::inverse_multinomial);
  SimulateResult r;
  r.report = {{"flavor", to_string(desc.flavor)},
              {"d", sys.d()},
              {"level", req.level},
              {"x0", vector_to_json(x0)},
              {"trajectory", entries},
              {"energy", {{"multinomial", tables_json(omega)}, {"inverse_multinomial", tables_json(inverse)}}}};
  r.csv = "table,index,value\n" + tables_csv("multinomial.", omega) + tables_csv("inverse_multinomial.", inverse);
  return r;
}

SimulateResult simulate_noncommutative(const SystemDescription& desc, const SimulateRequest& req) {
  const SystemRealization& sys = desc.system;
  if (req.level + 1 > kDefaultWordLevelCap) {
    throw RangeError("level " + std::to_string(req.level) + " exceeds the word level cap " +
                     std::to_string(kDefaultWordLevelCap - 1));
  }
  Rng rng(req.seed);
  const WordSequence u = build_word_input(req.input, sys, req.level + 1, rng);
  const ComplexVector x0 = build_state(req.x0, sys.dim_x(), rng);
  const WordTrajectory traj = simulate_words(sys, u, x0, req.level + 1);

  nlohmann::json entries = nlohmann::json::array();
  EnergyTables t;
  double in = 0.0;
  double out = 0.0;
  for (int l = 0; l <= req.level; ++l) {
    for (const Word& w : enumerate_words(sys.d(), l)) {
      entries.push_back({{"word", w.letters()},
                         {"u", vector_to_json(u.at(w))},
                         {"x", vector_to_json(traj.x.at(w))},
                         {"y", vector_to_json(traj.y.at(w))}});
    }
    in += u.level_block(l).squaredNorm();
    out += traj.y.level_block(l).squaredNorm();
    const double boundary = traj.x.level_block(l + 1).squaredNorm();
    t.input.push_back(in);
    t.output.push_back(out);
    t.boundary.push_back(boundary);
    t.slack.push_back(in + x0.squaredNorm() - out - boundary);
  }
  SimulateResult r;
  r.report = {{"flavor", to_string(desc.flavor)},
              {"d", sys.d()},
              {"level", req.level},
              {"x0", vector_to_json(x0)},
              {"trajectory", entries},
              {"energy", {{"unweighted", tables_json(t)}}}};
  r.csv = "table,index,value\n" + tables_csv("unweighted.", t);
  return r;
}

RowContractionTuple parse_tuple(const nlohmann::json& j, int d, const std::string& field) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) {
    throw ParseError(field + ": expected a list of " + std::to_string(d) + " matrices");
  }
  std::vector<ComplexMatrix> ops;
  for (std::size_t k = 0; k < j.size(); ++k) {
    ops.push_back(matrix_from_json(j[k], field + "[" + std::to_string(k) + "]"));
  }
  return RowContractionTuple(std::move(ops));
}

EvaluationPoint parse_point(const nlohmann::json& j, int d, const std::string& field) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) {
    throw ParseError(field + ": expected " + std::to_string(d) + " coordinates");
  }
  std::vector<Complex> z;
  for (std::size_t k = 0; k < j.size(); ++k) {
    z.push_back(complex_from_json(j[k], field + "[" + std::to_string(k) + "]"));
  }
  return EvaluationPoint(std::move(z));
}

nlohmann::json series_record(const SystemRealization& sys, const RowContractionTuple& t, int requested,
                             const ComplexMatrix& f, const ComplexMatrix& w) {
  const double rate = series_rate(sys, t);
  const int level = requested >= 0 ? requested : series_level_for_tail(rate, 1e-9);
  std::uint64_t words = 0;
  for (int l = 0; l <= level; ++l) {
    words += word_count(sys.d(), l);
    if (words > kMaxStreamedWords) {
      throw RangeError("series level " + std::to_string(level) + " exceeds the word budget");
    }
  }
  nlohmann::json rec{{"level", level},
                     {"rate", rate},
                     {"transfer_discrepancy", operator_norm(nc_transfer_series(sys, t, level) - f)},
                     {"observation_discrepancy", operator_norm(nc_observation_series(sys, t, level) - w)}};
  if (rate < 1.0) {
    rec["geometric_tail"] = std::pow(rate, level + 1) / (1.0 - rate);
  }
  return rec;
}

}  // namespace

SimulateResult run_simulate(const SystemDescription& desc, const SimulateRequest& request) {
  if (request.level < 0) {
    throw RangeError("level must be non-negative");
  }
  return desc.flavor == Flavor::commutative ? simulate_commutative(desc, request)
                                            : simulate_noncommutative(desc, request);
}

nlohmann::json run_transfer(const SystemDescription& desc, const TransferRequest& request) {
  const SystemRealization& sys = desc.system;
  if (!request.points.is_object() || !request.points.contains("points") || !request.points["points"].is_array()) {
    throw ParseError("points: expected {\"points\": [...]}");
  }
  nlohmann::json out = nlohmann::json::array();
  const auto& points = request.points["points"];
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const std::string field = "points[" + std::to_string(i) + "]";
    nlohmann::json rec{{"index", i}};
    try {
      std::optional<RowContractionTuple> tuple;
      ComplexMatrix f;
      ComplexMatrix w;
      if (p.contains("z")) {
        const EvaluationPoint z = parse_point(p["z"], sys.d(), field + ".z");
        rec["kind"] = "z";
        f = transfer_eval(sys, z);
        w = observation_eval(sys, z);
        tuple = RowContractionTuple::from_point(z);
      } else if (p.contains("T")) {
        tuple = parse_tuple(p["T"], sys.d(), field + ".T");
        rec["kind"] = "T";
        f = nc_transfer_eval(sys, *tuple);
        w = nc_observation_eval(sys, *tuple);
      } else {
        throw ParseError(field + ": expected \"z\" or \"T\"");
      }
      rec["F"] = matrix_to_json(f);
      rec["W"] = matrix_to_json(w);
      if (request.series_level) {
        rec["series"] = series_record(sys, *tuple, *request.series_level, f, w);
      }
    } catch (const std::exception& e) {
      rec = {{"index", i}, {"error", e.what()}};
    }
    out.push_back(std::move(rec));
  }
  return {{"flavor", to_string(desc.flavor)}, {"d", sys.d()}, {"points", out}};
}

}  // namespace fmsys
