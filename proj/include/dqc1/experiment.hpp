#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dqc1/circuit.hpp"
#include "dqc1/results.hpp"

namespace dqc1 {

enum class ExperimentKind {
  trace_vs_shots,
  entpower_vs_alpha,
  complexity_curve,
  verify_theorem1,
  verify_theorem2,
  verify_theorem3,
};

ExperimentKind parse_experiment_kind(std::string_view name);
std::string_view experiment_name(ExperimentKind kind);

/// Schema or range violation in an experiment config; the message names the
/// offending field.
class ConfigError : public ValidationError {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : ValidationError("config field \"" + field + "\": " + message), field_(field) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::verify_theorem1;
  int n = 1;
  double alpha = 1.0;
  std::optional<BlochVector> bloch;
  std::string unitary = "haar";
  std::string rho = "maximally-mixed";
  std::vector<std::int64_t> shots{1000};
  std::vector<double> alphas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> eps{0.2, 0.1, 0.05};
  double pe = 0.05;
  int samples = 100;
  int repeats = 1;
  /// Decomposition width; 0 picks 2·2^n for system and 4 for control ensembles.
  Index K = 0;
  std::uint64_t seed = 0;
  std::string output;  // empty: stdout
  OutputFormat format = OutputFormat::csv;
  int workers = 0;  // 0: hardware concurrency
  /// Directory that relative `file:` paths resolve against.
  std::filesystem::path base_dir;

  ControlQubit control() const;
  Index system_K() const;
  Index control_K() const;
};

/// Parses and validates a JSON config. Unknown keys are rejected.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Checks cross-field constraints and that referenced files parse.
void validate_config(const ExperimentConfig& cfg);

/// Rows in parameter-point order, independent of the worker count.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

/// Describes every row that breaks the theorem its verification experiment
/// checks; empty when all hold.
std::vector<std::string> verification_failures(const std::vector<ResultRow>& rows);

}  // namespace dqc1
