#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dqc1 {

enum class OutputFormat { csv, json };

OutputFormat parse_format(std::string_view name);
std::string_view format_name(OutputFormat f);

/// One emitted data point. `reference` always comes from a closed form, so
/// `deviation` = |measured − reference| isolates sampling or numerical error.
struct ResultRow {
  std::string experiment;
  std::string param_name;
  double param_value = 0.0;
  double measured = 0.0;
  double reference = 0.0;
  double deviation = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const ResultRow&) const = default;
};

ResultRow make_row(std::string experiment, std::string param_name, double param_value,
                   double measured, double reference, std::uint64_t seed);

inline constexpr std::string_view kCsvHeader =
    "experiment,param_name,param_value,measured,reference,deviation,seed";

/// Serializes rows; reals use 17 significant digits.
std::string format_results(const std::vector<ResultRow>& rows, OutputFormat format);
std::vector<ResultRow> parse_results(std::string_view text, OutputFormat format);

void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path,
                   OutputFormat format);
std::vector<ResultRow> read_results(const std::filesystem::path& path, OutputFormat format);

}  // namespace dqc1
