#include "dqc1/results.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dqc1/numerics.hpp"

namespace dqc1 {

namespace {

std::string real17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

double parse_real(const std::string& s) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ValidationError("results: cannot parse number \"" + s + "\"");
  }
  return v;
}

std::uint64_t parse_seed(const std::string& s) {
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno != 0) {
    throw ValidationError("results: cannot parse seed \"" + s + "\"");
  }
  return v;
}

}  // namespace

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ValidationError("unknown output format \"" + std::string(name) + "\" (csv|json)");
}

std::string_view format_name(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

ResultRow make_row(std::string experiment, std::string param_name, double param_value,
                   double measured, double reference, std::uint64_t seed) {
  return ResultRow{std::move(experiment), std::move(param_name), param_value, measured,
                   reference,            std::abs(measured - reference), seed};
}

std::string format_results(const std::vector<ResultRow>& rows, OutputFormat format) {
  std::string out;
  if (format == OutputFormat::csv) {
    out += kCsvHeader;
    out += '\n';
    for (const auto& r : rows) {
      out += r.experiment + ',' + r.param_name + ',' + real17(r.param_value) + ',' +
             real17(r.measured) + ',' + real17(r.reference) + ',' + real17(r.deviation) + ',' +
             std::to_string(r.seed) + '\n';
    }
    return out;
  }
  out += '[';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out += i == 0 ? "\n  " : ",\n  ";
    out += "{\"experiment\": " + json_string(r.experiment) +
           ", \"param_name\": " + json_string(r.param_name) +
           ", \"param_value\": " + real17(r.param_value) + ", \"measured\": " + real17(r.measured) +
           ", \"reference\": " + real17(r.reference) + ", \"deviation\": " + real17(r.deviation) +
           ", \"seed\": " + std::to_string(r.seed) + "}";
  }
  out += rows.empty() ? "]\n" : "\n]\n";
  return out;
}

std::vector<ResultRow> parse_results(std::string_view text, OutputFormat format) {
  std::vector<ResultRow> rows;
  if (format == OutputFormat::json) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(std::string("results json: ") + e.what());
    }
    if (!j.is_array()) throw ValidationError("results json: expected an array");
    for (const auto& o : j) {
      rows.push_back(ResultRow{o.at("experiment").get<std::string>(),
                               o.at("param_name").get<std::string>(),
                               o.at("param_value").get<double>(), o.at("measured").get<double>(),
                               o.at("reference").get<double>(), o.at("deviation").get<double>(),
                               o.at("seed").get<std::uint64_t>()});
    }
    return rows;
  }
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ValidationError("results csv: missing or unexpected header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 7) throw ValidationError("results csv: expected 7 fields in \"" + line + "\"");
    rows.push_back(ResultRow{f[0], f[1], parse_real(f[2]), parse_real(f[3]), parse_real(f[4]),
                             parse_real(f[5]), parse_seed(f[6])});
  }
  return rows;
}

void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path,
                   OutputFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << format_results(rows, format);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<ResultRow> read_results(const std::filesystem::path& path, OutputFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_results(ss.str(), format);
}

}  // namespace dqc1
