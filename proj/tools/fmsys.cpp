#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fmsys/commands.hpp"
#include "fmsys/description.hpp"
#include "fmsys/errors.hpp"
#include "fmsys/verify.hpp"

namespace {

using namespace fmsys;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot write " + path);
  }
  out << text;
}

struct Common {
  std::string config;
  std::string out;
  std::uint64_t seed = 1;
  bool seed_set = false;
};

SystemDescription load(const Common& c) {
  if (c.config.empty()) {
    throw ParseError("--config is required");
  }
  return load_description(c.config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fornasini-Marchesini system toolkit"};
  app.require_subcommand(1);

  Common sim_opts;
  SimulateRequest sim_req;
  std::string csv_path;
  auto* sim = app.add_subcommand("simulate", "Run a system on a truncated input and report energies");
  sim->add_option("--config", sim_opts.config, "System description (JSON)")->required();
  sim->add_option("--level", sim_req.level, "Truncation level N")->check(CLI::NonNegativeNumber);
  sim->add_option("--seed", sim_req.seed, "Seed for random inputs and initial states");
  sim->add_option("--input", sim_req.input.text, "zero | delta | random[:M] | <file.json>");
  sim->add_option("--x0", sim_req.x0.text, "zero | unit | random | <json vector> | <file.json>");
  sim->add_option("--out", sim_opts.out, "Report path (stdout when omitted)");
  sim->add_option("--csv", csv_path, "Also write the per-level energy tables as CSV");

  Common tr_opts;
  std::string points_path;
  std::string series_text;
  auto* tr = app.add_subcommand("transfer", "Evaluate transfer and observation functions");
  tr->add_option("--config", tr_opts.config, "System description (JSON)")->required();
  tr->add_option("--points", points_path, "Evaluation points (JSON)")->required();
  tr->add_option("--series", series_text, "Compare with the truncated series: N | auto");
  tr->add_option("--out", tr_opts.out, "Report path (stdout when omitted)");

  Common ver_opts;
  VerifyOptions ver_req;
  std::string tol_profile = "default";
  auto* ver = app.add_subcommand("verify", "Run the property suite; exit 1 on any failed gating check");
  ver->add_option("--config", ver_opts.config, "System description (JSON)")->required();
  ver->add_option("--level", ver_req.level, "Level for energy, io and symmetrisation checks")
      ->check(CLI::NonNegativeNumber);
  ver->add_option("--frequency-level", ver_req.frequency_level, "Truncation of the Z-transform checks")
      ->check(CLI::NonNegativeNumber);
  ver->add_option("--seed", ver_req.seed, "Seed for test inputs and evaluation points");
  ver->add_option("--tol-profile", tol_profile, "default | loose");
  ver->add_option("--out", ver_opts.out, "Report path (stdout when omitted)");

  std::string rnd_flavor = "commutative";
  SystemDims rnd_dims{2, 2, 1, 1};
  int rnd_k = 1;
  std::uint64_t rnd_seed = 1;
  double rnd_target = 0.95;
  std::string rnd_out;
  auto* rnd = app.add_subcommand("random-system", "Emit a seeded random dissipative system description");
  rnd->add_option("--flavor", rnd_flavor, "commutative | noncommutative");
  rnd->add_option("--d", rnd_dims.d, "Number of shifts")->check(CLI::PositiveNumber);
  rnd->add_option("--dim-x", rnd_dims.state, "State dimension")->check(CLI::NonNegativeNumber);
  rnd->add_option("--dim-u", rnd_dims.input, "Input dimension")->check(CLI::NonNegativeNumber);
  rnd->add_option("--dim-y", rnd_dims.output, "Output dimension")->check(CLI::NonNegativeNumber);
  rnd->add_option("--dim-k", rnd_k, "Operator-argument dimension")->check(CLI::PositiveNumber);
  rnd->add_option("--seed", rnd_seed, "Seed");
  rnd->add_option("--target-norm", rnd_target, "Norm of the system matrix after clipping");
  rnd->add_option("--out", rnd_out, "Output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (*sim) {
      const SimulateResult r = run_simulate(load(sim_opts), sim_req);
      write_text(sim_opts.out, dump_json(r.report) + "\n");
      if (!csv_path.empty()) {
        write_text(csv_path, r.csv);
      }
      return kExitPass;
    }
    if (*tr) {
      TransferRequest req;
      std::ifstream in(points_path);
      if (!in) {
        throw ParseError("cannot open " + points_path);
      }
      const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      req.points = parse_json_text(text, points_path);
      if (series_text == "auto") {
        req.series_level = -1;
      } else if (!series_text.empty()) {
        std::size_t used = 0;
        int n = -1;
        try {
          n = std::stoi(series_text, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != series_text.size() || n < 0) {
          throw ParseError("--series: expected a non-negative level or \"auto\"");
        }
        req.series_level = n;
      }
      write_text(tr_opts.out, dump_json(run_transfer(load(tr_opts), req)) + "\n");
      return kExitPass;
    }
    if (*ver) {
      ver_req.tol = tolerance_profile(tol_profile);
      const VerifyReport report = run_verify(load(ver_opts), ver_req);
      write_text(ver_opts.out, dump_json(report.to_json()) + "\n");
      return report.all_pass() ? kExitPass : kExitFail;
    }
    if (*rnd) {
      const SystemDescription desc =
          random_description(parse_flavor(rnd_flavor), rnd_dims, rnd_k, rnd_seed, rnd_target);
      write_text(rnd_out, dump_json(description_to_json(desc)) + "\n");
      return kExitPass;
    }
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitConfig;
}
