#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "dqc1/experiment.hpp"
#include "dqc1/matrix_io.hpp"
#include "dqc1/random.hpp"
#include "dqc1/unitary_spec.hpp"

using namespace dqc1;

namespace {

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<accepted>";
}

std::size_t count_rows(const std::vector<ResultRow>& rows, const std::string& name) {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.param_name == name;
  return n;
}

}  // namespace

TEST(ParseConfig, MinimalConfigGetsDefaults) {
  const auto cfg = parse_config(R"({"experiment": "verify-theorem1"})");
  EXPECT_EQ(cfg.experiment, ExperimentKind::verify_theorem1);
  EXPECT_EQ(cfg.seed, 0u);
  EXPECT_EQ(cfg.format, OutputFormat::csv);
  EXPECT_EQ(cfg.n, 1);
  EXPECT_EQ(cfg.unitary, "haar");
  EXPECT_TRUE(cfg.output.empty());
  EXPECT_EQ(cfg.system_K(), 4);
  EXPECT_EQ(cfg.control_K(), 4);
}

TEST(ParseConfig, AllFieldsParse) {
  const auto cfg = parse_config(R"({
    "experiment": "trace-vs-shots", "n": 3, "alpha": 0.5, "unitary": "pauli:XYZ",
    "shots": [10, 20], "alphas": [0.5], "eps": [0.1], "pe": 0.1, "samples": 7,
    "repeats": 3, "K": 16, "seed": 18446744073709551615, "output": "out.csv",
    "format": "json", "workers": 2})");
  EXPECT_EQ(cfg.experiment, ExperimentKind::trace_vs_shots);
  EXPECT_EQ(cfg.n, 3);
  EXPECT_EQ(cfg.shots, (std::vector<std::int64_t>{10, 20}));
  EXPECT_EQ(cfg.seed, 18446744073709551615ULL);
  EXPECT_EQ(cfg.format, OutputFormat::json);
  EXPECT_EQ(cfg.system_K(), 16);
  EXPECT_EQ(cfg.workers, 2);
}

TEST(ParseConfig, UnknownKeyIsNamed) {
  try {
    parse_config(R"({"experiment": "verify-theorem1", "foo": 1})");
    FAIL() << "accepted unknown key";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "foo");
    EXPECT_NE(std::string(e.what()).find("foo"), std::string::npos);
  }
}

TEST(ParseConfig, RangeAndTypeErrors) {
  EXPECT_EQ(field_of(R"({"experiment": "verify-theorem1", "n": 11})"), "n");
  EXPECT_EQ(field_of(R"({"experiment": "verify-theorem1", "n": 0})"), "n");
  EXPECT_EQ(field_of(R"({"experiment": "verify-theorem1", "n": "two"})"), "n");
  EXPECT_EQ(field_of(R"({"experiment": "nope"})"), "experiment");
  EXPECT_EQ(field_of(R"({"n": 2})"), "experiment");
  EXPECT_EQ(field_of(R"({"experiment": "trace-vs-shots", "shots": []})"), "shots");
  EXPECT_EQ(field_of(R"({"experiment": "trace-vs-shots", "shots": [0]})"), "shots");
  EXPECT_EQ(field_of(R"({"experiment": "verify-theorem2", "alphas": []})"), "alphas");
  EXPECT_EQ(field_of(R"({"experiment": "verify-theorem2", "alphas": [1.5]})"), "alphas");
  EXPECT_EQ(field_of(R"({"experiment": "complexity-curve", "eps": []})"), "eps");
  EXPECT_EQ(field_of(R"({"experiment": "verify-theorem1", "alpha": 2})"), "alpha");
  EXPECT_EQ(field_of(R"({"experiment": "verify-theorem1", "seed": -1})"), "seed");
  EXPECT_EQ(field_of(R"({"experiment": "verify-theorem1", "format": "xml"})"), "format");
  EXPECT_EQ(field_of(R"({"experiment": "verify-theorem1", "rho": "random"})"), "rho");
  EXPECT_EQ(field_of(R"({"experiment": "verify-theorem3", "bloch": [1, 1, 0]})"), "bloch");
  EXPECT_EQ(field_of(R"({"experiment": "verify-theorem3", "bloch": [1, 0]})"), "bloch");
  EXPECT_EQ(field_of(R"({"experiment": "verify-theorem1", "unitary": "pauli:XX"})"), "unitary");
  EXPECT_EQ(field_of(R"({"experiment": "verify-theorem3", "rho": "file:/nonexistent.json"})"),
            "rho");
  EXPECT_EQ(field_of(R"({"experiment": "complexity-curve", "unitary": "pauli:X"})"), "unitary");
  EXPECT_EQ(field_of(R"({"experiment": "trace-vs-shots", "alpha": 0})"), "alpha");
  EXPECT_EQ(field_of(R"({"experiment": "verify-theorem1", "samples": 0})"), "samples");
}

TEST(ParseConfig, MalformedJsonReportsPosition) {
  try {
    parse_config("{\"experiment\": \"verify-theorem1\",\n  \"n\": }");
    FAIL() << "accepted malformed JSON";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_config("[1, 2]"), ValidationError);
}

TEST(LoadConfig, BundledConfigsAreValid) {
  for (const auto& entry : std::filesystem::directory_iterator(DQC1_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
  }
  EXPECT_THROW(load_config("/nonexistent/config.json"), ValidationError);
}

TEST(LoadConfig, RelativeFilesResolveAgainstConfigDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "dqc1_experiment_test";
  std::filesystem::create_directories(dir);
  write_matrix_file(dir / "u.json", pauli_string("XZ"));
  {
    std::ofstream out(dir / "cfg.json");
    out << R"({"experiment": "entpower-vs-alpha", "n": 2, "unitary": "file:u.json",
               "alphas": [0.5], "samples": 2})";
  }
  const auto cfg = load_config(dir / "cfg.json");
  const auto rows = run_experiment(cfg);
  EXPECT_DOUBLE_EQ(rows.front().reference, 0.5);
  std::filesystem::remove_all(dir);
}

TEST(RunExperiment, TraceVsShotsIdentity) {
  auto cfg = parse_config(R"({"experiment": "trace-vs-shots", "n": 2, "alpha": 0.8,
                             "unitary": "identity", "shots": [100, 10000], "repeats": 4})");
  const auto rows = run_experiment(cfg);
  ASSERT_EQ(rows.size(), 16u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.reference, r.param_name == "shots.re" ? 1.0 : 0.0);
    EXPECT_LE(r.deviation, 5.0 / (0.8 * std::sqrt(r.param_value)));
  }
}

TEST(RunExperiment, EntpowerVsAlphaTracelessReferenceIsAlpha) {
  auto cfg = parse_config(R"({"experiment": "entpower-vs-alpha", "n": 2, "unitary": "pauli:XY",
                             "samples": 5})");
  const auto rows = run_experiment(cfg);
  for (const auto& r : rows) {
    EXPECT_EQ(r.reference, r.param_value);
    if (r.param_name == "alpha") EXPECT_LE(r.deviation, 1e-9);
    if (r.param_name == "alpha.sampled") EXPECT_LE(r.measured, r.reference + 1e-9);
  }
  EXPECT_EQ(count_rows(rows, "alpha"), 10u);
}

TEST(RunExperiment, VerifyTheorem1) {
  auto cfg = parse_config(R"({"experiment": "verify-theorem1", "n": 2, "samples": 100})");
  const auto rows = run_experiment(cfg);
  ASSERT_EQ(rows.size(), 101u);
  EXPECT_EQ(rows.front().param_name, "fourier");
  EXPECT_LE(rows.front().deviation, 1e-9);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].param_value, static_cast<double>(i - 1));
    EXPECT_LE(rows[i].measured, rows[i].reference + 1e-9);
  }
  EXPECT_TRUE(verification_failures(rows).empty());
}

TEST(RunExperiment, VerifyTheorem2And3HaveNoFailures) {
  for (const char* text :
       {R"({"experiment": "verify-theorem2", "n": 2, "samples": 200})",
        R"({"experiment": "verify-theorem3", "n": 2, "samples": 50, "bloch": [0.3, 0.4, 0.5]})",
        R"({"experiment": "verify-theorem3", "n": 1, "samples": 50, "rho": "commuting"})",
        R"({"experiment": "verify-theorem3", "n": 2, "samples": 50, "alpha": 0.6,
            "rho": "random:2", "unitary": "diag-phase:0,1,2,3"})"}) {
    const auto rows = run_experiment(parse_config(text));
    EXPECT_FALSE(rows.empty());
    const auto failures = verification_failures(rows);
    EXPECT_TRUE(failures.empty()) << text << "\n" << (failures.empty() ? "" : failures.front());
  }
}

TEST(RunExperiment, ComplexityCurveIsSelfConsistent) {
  auto cfg = parse_config(R"({"experiment": "complexity-curve", "n": 2, "alpha": 0.7,
                             "eps": [0.5, 0.2, 0.1]})");
  const auto rows = run_experiment(cfg);
  for (const auto& r : rows) {
    if (r.param_name == "rounds" || r.param_name == "complexity") {
      EXPECT_LE(r.deviation, 1e-9 * r.reference);
    }
    if (r.param_name == "entpower") EXPECT_LE(r.deviation, 1e-12);
  }
  EXPECT_EQ(count_rows(rows, "rounds"), 3u);
}

TEST(RunExperiment, VerificationFailuresAreReported) {
  std::vector<ResultRow> rows{make_row("verify-theorem1", "sample", 0, 0.9, 0.5, 0),
                              make_row("verify-theorem2", "min_mixing", 0.5, 0.5, 0.5, 0),
                              make_row("verify-theorem3", "lower", 0, 0.1, 0.3, 0)};
  EXPECT_EQ(verification_failures(rows).size(), 2u);
}

TEST(RunExperiment, ErrorsNameTheParameterPoint) {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::entpower_vs_alpha;
  cfg.alphas = {0.5, 1.5};
  cfg.samples = 1;
  try {
    run_experiment(cfg);
    FAIL() << "accepted alpha = 1.5";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("alpha=1.5"), std::string::npos) << e.what();
  }
}

TEST(RunExperiment, DeterministicAcrossWorkerCounts) {
  auto cfg = parse_config(R"({"experiment": "verify-theorem1", "n": 2, "samples": 30,
                             "seed": 42})");
  cfg.workers = 1;
  const auto serial = run_experiment(cfg);
  cfg.workers = 4;
  EXPECT_EQ(run_experiment(cfg), serial);
  cfg.seed = 43;
  EXPECT_NE(run_experiment(cfg), serial);

  auto trace = parse_config(R"({"experiment": "trace-vs-shots", "n": 1, "shots": [10, 100, 1000],
                               "repeats": 3, "seed": 7})");
  trace.workers = 1;
  const auto a = run_experiment(trace);
  trace.workers = 3;
  EXPECT_EQ(format_results(run_experiment(trace), OutputFormat::csv),
            format_results(a, OutputFormat::csv));
}

TEST(Results, EmptyCsvIsHeaderOnly) {
  EXPECT_EQ(format_results({}, OutputFormat::csv), std::string(kCsvHeader) + "\n");
  EXPECT_TRUE(parse_results(format_results({}, OutputFormat::csv), OutputFormat::csv).empty());
  EXPECT_TRUE(parse_results(format_results({}, OutputFormat::json), OutputFormat::json).empty());
}

TEST(Results, OneRowCsv) {
  const auto row = make_row("verify-theorem1", "fourier", 0, 0.1 + 0.2, 0.3, 5);
  const auto text = format_results({row}, OutputFormat::csv);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_EQ(parse_results(text, OutputFormat::csv), std::vector<ResultRow>{row});
}

TEST(Results, JsonHasTheCsvFieldNames) {
  const auto row = make_row("trace-vs-shots", "shots.re", 100, 0.25, 0.5, 1);
  const auto j = nlohmann::json::parse(format_results({row, row}, OutputFormat::json));
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 2u);
  std::string names;
  for (const auto& [key, value] : j[0].items()) names += (names.empty() ? "" : ",") + key;
  std::vector<std::string> expected{"experiment", "param_name", "param_value", "measured",
                                    "reference",  "deviation",  "seed"};
  for (const auto& k : expected) EXPECT_TRUE(j[0].contains(k)) << k;
  EXPECT_EQ(j[0].size(), expected.size());
}

TEST(Results, RoundTripPreservesEveryBitAndDeviation) {
  SeededRng rng(1);
  std::vector<ResultRow> rows;
  for (int i = 0; i < 200; ++i) {
    rows.push_back(make_row("verify-theorem3", "upper", rng.normal() * 1e-7, rng.normal(),
                            rng.normal() * 1e5, static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ULL));
  }
  const auto dir = std::filesystem::temp_directory_path();
  for (auto format : {OutputFormat::csv, OutputFormat::json}) {
    const auto path = dir / (std::string("dqc1_results.") + std::string(format_name(format)));
    write_results(rows, path, format);
    const auto back = read_results(path, format);
    EXPECT_EQ(back, rows);
    for (const auto& r : back) EXPECT_LE(std::abs(std::abs(r.measured - r.reference) - r.deviation), 1e-12);
    std::filesystem::remove(path);
  }
}

TEST(Results, RejectsMalformedTables) {
  EXPECT_THROW(parse_results("a,b\n", OutputFormat::csv), ValidationError);
  EXPECT_THROW(parse_results(std::string(kCsvHeader) + "\nx,y,1,2\n", OutputFormat::csv),
               ValidationError);
  EXPECT_THROW(parse_results(std::string(kCsvHeader) + "\nx,y,1,2,q,4,5\n", OutputFormat::csv),
               ValidationError);
  EXPECT_THROW(parse_results("{}", OutputFormat::json), ValidationError);
  EXPECT_THROW(parse_format("tsv"), ValidationError);
}
