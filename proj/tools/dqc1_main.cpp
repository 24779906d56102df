// dqc1: command-line runner for DQC1 simulations and theorem checks.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dqc1/entpower.hpp"
#include "dqc1/experiment.hpp"
#include "dqc1/measurement.hpp"
#include "dqc1/unitary_spec.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

using nlohmann::ordered_json;

std::string unitary_spec(const std::string& spec, const std::string& file) {
  if (!file.empty()) {
    if (spec != "haar") throw dqc1::ValidationError("give either --unitary or --unitary-file");
    return "file:" + file;
  }
  return spec;
}

void emit(const std::vector<dqc1::ResultRow>& rows, const std::string& out,
          dqc1::OutputFormat format) {
  if (out.empty()) {
    std::cout << dqc1::format_results(rows, format);
    std::cout.flush();
  } else {
    dqc1::write_results(rows, out, format);
  }
}

void print_json(const ordered_json& j) { std::cout << j.dump(2) << '\n'; }

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<int> n;
  std::optional<double> alpha;
  std::vector<std::int64_t> shots;
};

int cmd_run(const RunArgs& a) {
  dqc1::ExperimentConfig cfg = dqc1::load_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (a.out) cfg.output = *a.out;
  if (a.format) cfg.format = dqc1::parse_format(*a.format);
  if (a.n) cfg.n = *a.n;
  if (a.alpha) {
    cfg.alpha = *a.alpha;
    cfg.bloch.reset();
  }
  if (!a.shots.empty()) cfg.shots = a.shots;
  dqc1::validate_config(cfg);
  emit(dqc1::run_experiment(cfg), cfg.output, cfg.format);
  return 0;
}

struct TraceArgs {
  int n = 1;
  double alpha = 1.0;
  std::string unitary = "haar";
  std::string unitary_file;
  std::int64_t shots = 1000;
  std::uint64_t seed = 0;
};

int cmd_estimate_trace(const TraceArgs& a) {
  dqc1::SeededRng urng(a.seed, 1);
  const auto u = dqc1::unitary_from_spec(unitary_spec(a.unitary, a.unitary_file), a.n, urng);
  const dqc1::Dqc1Instance inst(u, dqc1::ControlQubit::polarized(a.alpha));
  dqc1::SeededRng rng(a.seed, 0);
  const auto est = dqc1::estimate_trace(inst, a.shots, rng);
  const auto t = dqc1::normalized_trace(u);
  print_json(ordered_json{{"n", est.n},
                          {"alpha", est.alpha},
                          {"shots_x", est.shots_x},
                          {"shots_y", est.shots_y},
                          {"mean_x", est.mean_x},
                          {"mean_y", est.mean_y},
                          {"stderr_x", est.stderr_x},
                          {"stderr_y", est.stderr_y},
                          {"trace_estimate", {est.trace_estimate.real(), est.trace_estimate.imag()}},
                          {"trace_exact", {t.real(), t.imag()}},
                          {"seed", a.seed}});
  return 0;
}

struct EntpowerArgs {
  int n = 1;
  double alpha = 1.0;
  std::string unitary = "haar";
  std::string unitary_file;
  std::uint64_t seed = 0;
};

int cmd_entpower(const EntpowerArgs& a) {
  dqc1::SeededRng urng(a.seed, 1);
  const auto u = dqc1::unitary_from_spec(unitary_spec(a.unitary, a.unitary_file), a.n, urng);
  dqc1::ControlQubit::polarized(a.alpha);
  const auto t = dqc1::normalized_trace(u);
  print_json(ordered_json{{"n", a.n},
                          {"alpha", a.alpha},
                          {"normalized_trace", {t.real(), t.imag()}},
                          {"entpower_standard", dqc1::entpower_standard(u)},
                          {"entpower_alpha", dqc1::entpower_alpha(u, a.alpha)}});
  return 0;
}

struct VerifyArgs {
  std::string theorem;
  int n = 1;
  int samples = 100;
  std::uint64_t seed = 0;
  std::optional<double> alpha;
  std::string unitary = "haar";
  std::string unitary_file;
  std::string rho = "random";
  std::string rho_file;
  std::string out;
  std::string format = "csv";
};

int cmd_verify(const VerifyArgs& a) {
  dqc1::ExperimentConfig cfg;
  cfg.experiment = dqc1::parse_experiment_kind("verify-" + a.theorem);
  cfg.n = a.n;
  cfg.samples = a.samples;
  cfg.seed = a.seed;
  cfg.unitary = unitary_spec(a.unitary, a.unitary_file);
  if (cfg.experiment == dqc1::ExperimentKind::verify_theorem3) {
    cfg.rho = a.rho_file.empty() ? a.rho : "file:" + a.rho_file;
    if (a.alpha) cfg.alpha = *a.alpha;
  } else if (a.alpha) {
    cfg.alphas = {*a.alpha};
  }
  cfg.output = a.out;
  cfg.format = dqc1::parse_format(a.format);
  dqc1::validate_config(cfg);

  const auto rows = dqc1::run_experiment(cfg);
  emit(rows, cfg.output, cfg.format);
  const auto failures = dqc1::verification_failures(rows);
  for (const auto& f : failures) std::cerr << "FAIL " << f << '\n';
  std::cerr << a.theorem << ": " << rows.size() - failures.size() << '/' << rows.size()
            << " rows hold\n";
  return failures.empty() ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DQC1 circuit simulator and entangling-power experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dqc1 0.1.0");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment from a JSON config");
  run_cmd->add_option("config", run.config, "Config file")->required();
  run_cmd->add_option("--seed", run.seed, "Master seed override");
  run_cmd->add_option("--out", run.out, "Output path (default: stdout)");
  run_cmd->add_option("--format", run.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--n", run.n, "Number of system qubits");
  run_cmd->add_option("--alpha", run.alpha, "Control polarization");
  run_cmd->add_option("--shots", run.shots, "Shot grid, comma separated")->delimiter(',');

  TraceArgs trace;
  auto* trace_cmd = app.add_subcommand("estimate-trace", "Estimate Tr U / 2^n from shots");
  trace_cmd->add_option("--n", trace.n, "Number of system qubits");
  trace_cmd->add_option("--alpha", trace.alpha, "Control polarization");
  trace_cmd->add_option("--unitary", trace.unitary, "Unitary spec");
  trace_cmd->add_option("--unitary-file", trace.unitary_file, "Unitary matrix file");
  trace_cmd->add_option("--shots", trace.shots, "Shots per axis");
  trace_cmd->add_option("--seed", trace.seed, "Seed");

  EntpowerArgs ent;
  auto* ent_cmd = app.add_subcommand("entpower", "Closed-form entangling power");
  ent_cmd->add_option("--n", ent.n, "Number of system qubits");
  ent_cmd->add_option("--alpha", ent.alpha, "Control polarization");
  ent_cmd->add_option("--unitary", ent.unitary, "Unitary spec");
  ent_cmd->add_option("--unitary-file", ent.unitary_file, "Unitary matrix file");
  ent_cmd->add_option("--seed", ent.seed, "Seed for random unitaries");

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "Check a theorem against brute-force oracles");
  ver_cmd->add_option("theorem", ver.theorem, "theorem1, theorem2 or theorem3")
      ->required()
      ->check(CLI::IsMember({"theorem1", "theorem2", "theorem3"}));
  ver_cmd->add_option("--n", ver.n, "Number of system qubits");
  ver_cmd->add_option("--samples", ver.samples, "Random decompositions per point");
  ver_cmd->add_option("--seed", ver.seed, "Seed");
  ver_cmd->add_option("--alpha", ver.alpha, "Control polarization");
  ver_cmd->add_option("--unitary", ver.unitary, "Unitary spec");
  ver_cmd->add_option("--unitary-file", ver.unitary_file, "Unitary matrix file");
  ver_cmd->add_option("--rho", ver.rho, "Register state spec (theorem3)");
  ver_cmd->add_option("--rho-file", ver.rho_file, "Register state matrix file (theorem3)");
  ver_cmd->add_option("--out", ver.out, "Output path (default: stdout)");
  ver_cmd->add_option("--format", ver.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*trace_cmd) return cmd_estimate_trace(trace);
    if (*ent_cmd) return cmd_entpower(ent);
    if (*ver_cmd) return cmd_verify(ver);
  } catch (const dqc1::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
