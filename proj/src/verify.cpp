#include "fmsys/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "fmsys/commutative.hpp"
#include "fmsys/errors.hpp"
#include "fmsys/io_operators.hpp"
#include "fmsys/noncommutative.hpp"

namespace fmsys {

ToleranceProfile tolerance_profile(const std::string& name) {
  ToleranceProfile p;
  if (name == "default") {
    return p;
  }
  if (name == "loose") {
    p.name = "loose";
    p.equality *= 1e3;
    p.norm *= 1e3;
    p.residual *= 1e3;
    p.series *= 1e3;
    return p;
  }
  throw ParseError("tol-profile: expected \"default\" or \"loose\", got \"" + name + "\"");
}

bool VerifyReport::all_pass() const {
  return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.pass || !p.gating; });
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : properties) {
    nlohmann::json row{{"name", p.name},
                       {"measured", p.measured},
                       {"threshold", p.threshold},
                       {"relation", p.relation == Relation::at_most ? "<=" : ">="},
                       {"pass", p.pass},
                       {"gating", p.gating}};
    if (!p.note.empty()) {
      row["note"] = p.note;
    }
    rows.push_back(std::move(row));
  }
  return {{"flavor", to_string(flavor)}, {"properties", rows}, {"pass", all_pass()}};
}

namespace {

class Suite {
 public:
  explicit Suite(VerifyReport& report) : report_(report) {}

  // Evaluates `measure`; exceptions turn into a failed row carrying the message.
  void check(const std::string& name, Relation relation, double threshold, const std::function<double()>& measure,
             bool gating = true, std::string note = {}) {
    PropertyResult r{name, 0.0, threshold, relation, false, gating, std::move(note)};
    try {
      r.measured = measure();
      r.pass = std::isfinite(r.measured) &&
               (relation == Relation::at_most ? r.measured <= threshold : r.measured >= threshold);
    } catch (const std::exception& e) {
      r.measured = std::numeric_limits<double>::quiet_NaN();
      r.note = e.what();
    }
    report_.properties.push_back(std::move(r));
  }

  void skip(const std::string& name, std::string note) {
    report_.properties.push_back({name, 0.0, 0.0, Relation::at_most, true, false, std::move(note)});
  }

 private:
  VerifyReport& report_;
};

LatticeSequence random_lattice_input(Rng& rng, const SystemRealization& sys, int support, int level) {
  LatticeSequence u(sys.d(), level, sys.dim_u());
  for (int l = 0; l <= std::min(support, level); ++l) {
    for (const auto& n : multi_indices_of_degree(sys.d(), l)) {
      u.set(n, random_vector(rng, sys.dim_u()));
    }
  }
  return u;
}

WordSequence random_word_input(Rng& rng, const SystemRealization& sys, int support, int level) {
  WordSequence u(sys.d(), level, sys.dim_u());
  for (int l = 0; l <= std::min(support, level); ++l) {
    u.level_block(l) = random_gaussian(rng, sys.dim_u(), static_cast<int>(word_count(sys.d(), l)));
  }
  return u;
}

EvaluationPoint random_point(Rng& rng, int d, double radius) {
  ComplexVector z = random_vector(rng, d);
  z *= radius / z.norm();
  return EvaluationPoint(std::vector<Complex>(z.data(), z.data() + z.size()));
}

// Deepest level whose word tree stays within `budget` words.
int affordable_level(int d, int wanted, std::uint64_t budget) {
  int n = 0;
  std::uint64_t total = 1;
  while (n < wanted) {
    const std::uint64_t next = word_count(d, n + 1);
    if (total + next > budget) {
      break;
    }
    total += next;
    ++n;
  }
  return n;
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

void commutative_suite(Suite& suite, const SystemDescription& desc, const VerifyOptions& opt) {
  const SystemRealization& sys = desc.system;
  const int level = opt.level;
  Rng rng(opt.seed);
  const LatticeSequence u = random_lattice_input(rng, sys, 2, level + 1);
  const ComplexVector x0 = random_vector(rng, sys.dim_x());
  const LatticeTrajectory traj = simulate(sys, u, x0, level + 1);

  suite.check("energy_balance_min_slack", Relation::at_least, -opt.tol.norm, [&] {
    return min_of(energy_balance_slack(sys, u, traj, x0, level, LatticeWeight::inverse_multinomial));
  }, true, "lattice energies weighted by 1/omega(n)");
  suite.check("energy_balance_min_slack_omega", Relation::at_least, -opt.tol.norm, [&] {
    return min_of(energy_balance_slack(sys, u, traj, x0, level, LatticeWeight::multinomial));
  }, false, "omega(n)-weighted form; not implied by contractivity, informational");
  suite.check("output_energy_excess", Relation::at_most, opt.tol.norm, [&] {
    const auto w = LatticeWeight::inverse_multinomial;
    return weighted_l2_norm_sq(traj.y, level, w) - weighted_l2_norm_sq(u, level, w) - x0.squaredNorm();
  });

  const LatticeSequence u_short = random_lattice_input(rng, sys, 3, 3);
  std::vector<EvaluationPoint> points;
  for (int p = 0; p < opt.points; ++p) {
    points.push_back(random_point(rng, sys.d(), 0.3));
  }
  suite.check("frequency_residual_max", Relation::at_most, opt.tol.residual, [&] {
    double worst = 0.0;
    for (const auto& z : points) {
      worst = std::max(worst, frequency_residual(sys, u_short, x0, z, opt.frequency_level));
    }
    return worst;
  });
}

void noncommutative_suite(Suite& suite, const SystemDescription& desc, const VerifyOptions& opt) {
  const SystemRealization& sys = desc.system;
  const int d = sys.d();
  const int level = std::min(opt.level, kDefaultWordLevelCap - 1);
  Rng rng(opt.seed);
  const WordSequence u = random_word_input(rng, sys, 2, level + 1);
  const ComplexVector x0 = random_vector(rng, sys.dim_x());
  const WordTrajectory traj = simulate_words(sys, u, x0, level + 1);

  suite.check("nc_energy_balance_min_slack", Relation::at_least, -opt.tol.norm,
              [&] { return min_of(nc_energy_slack(sys, u, traj, x0, level)); });

  const int dim_k = std::max(desc.dim_k, 1);
  const int freq_level = affordable_level(d, opt.frequency_level, std::uint64_t{1} << 21);
  const double t_norm = d <= 2 ? 0.5 : 0.25;
  const WordSequence u_short = random_word_input(rng, sys, 3, std::min(3, freq_level));
  std::vector<RowContractionTuple> tuples;
  for (int p = 0; p < opt.points; ++p) {
    tuples.push_back(RowContractionTuple::random(rng, d, dim_k, t_norm));
  }
  suite.check("nc_frequency_residual_max", Relation::at_most, opt.tol.residual, [&] {
    double worst = 0.0;
    for (const auto& t : tuples) {
      worst = std::max(worst, nc_frequency_residual(sys, u_short, x0, t, freq_level));
    }
    return worst;
  }, true, "truncation level " + std::to_string(freq_level));

  const RowContractionTuple t_series = RowContractionTuple::random(rng, d, dim_k, d <= 2 ? 0.3 : 0.15);
  suite.check("series_resolvent_discrepancy", Relation::at_most, opt.tol.series, [&] {
    const int n = series_level_for_tail(series_rate(sys, t_series), 1e-9);
    const double transfer = operator_norm(nc_transfer_series(sys, t_series, n) - nc_transfer_eval(sys, t_series));
    const double observation =
        operator_norm(nc_observation_series(sys, t_series, n) - nc_observation_eval(sys, t_series));
    return std::max(transfer, observation);
  });

  suite.check("symmetrization_recursion_error", Relation::at_most, opt.tol.equality, [&] {
    const LatticeSequence u_bar = symmetrize(u, level);
    const LatticeSequence x_bar = symmetrize(traj.x, level);
    const LatticeSequence y_bar = symmetrize(traj.y, level);
    const LatticeTrajectory lattice = simulate(sys, u_bar, x0, level);
    double worst = 0.0;
    for (int l = 0; l <= level; ++l) {
      for (const auto& n : multi_indices_of_degree(d, l)) {
        worst = std::max(worst, (lattice.x.at(n) - x_bar.at(n)).cwiseAbs().maxCoeff());
        worst = std::max(worst, (lattice.y.at(n) - y_bar.at(n)).cwiseAbs().maxCoeff());
      }
    }
    return worst;
  });

  const int io_level = std::min(level, io_level_cap(d));
  suite.check("io_contractivity_norm", Relation::at_most, 1.0 + opt.tol.norm, [&] {
    double previous = 0.0;
    double current = 0.0;
    for (int n = 0; n <= io_level; ++n) {
      current = io_contractivity_norm(build_io_pair(sys, n));
      if (current < previous - opt.tol.equality) {
        throw DomainError("norm decreased from " + std::to_string(previous) + " at level " + std::to_string(n));
      }
      previous = current;
    }
    return current;
  }, true, "levels 0.." + std::to_string(io_level) + ", monotone");
  suite.check("io_simulation_mismatch", Relation::at_most, opt.tol.equality, [&] {
    const WordSequence y = io_apply(build_io_pair(sys, io_level), u, x0);
    double worst = 0.0;
    for (int l = 0; l <= io_level; ++l) {
      worst = std::max(worst, (y.level_block(l) - traj.y.level_block(l)).cwiseAbs().maxCoeff());
    }
    return worst;
  });

  const double col_a = operator_norm(sys.state_column());
  if (col_a < 1.0) {
    suite.check("l2_state_bound_excess", Relation::at_most, opt.tol.norm, [&] {
      const WordSequence zero(d, 0, sys.dim_u());
      const WordTrajectory free = simulate_words(sys, zero, x0, level);
      const double bound = x0.squaredNorm() / (1.0 - col_a * col_a);
      double partial = 0.0;
      double worst = -std::numeric_limits<double>::infinity();
      for (int l = 0; l <= level; ++l) {
        partial += free.x.level_block(l).squaredNorm();
        worst = std::max(worst, partial - bound);
      }
      return worst;
    });
  } else {
    suite.skip("l2_state_bound_excess", "||col A|| >= 1, condition does not apply");
  }
}

}  // namespace

VerifyReport run_verify(const SystemDescription& desc, const VerifyOptions& options) {
  VerifyReport report;
  report.flavor = desc.flavor;
  Suite suite(report);
  suite.check("system_matrix_norm", Relation::at_most, 1.0 + options.tol.norm,
              [&] { return desc.system.system_matrix().size() ? desc.system.system_norm() : 0.0; });
  if (desc.flavor == Flavor::commutative) {
    commutative_suite(suite, desc, options);
  } else {
    noncommutative_suite(suite, desc, options);
  }
  return report;
}

}  // namespace fmsys
