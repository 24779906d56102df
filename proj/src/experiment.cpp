#include "dqc1/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dqc1/entpower.hpp"
#include "dqc1/measurement.hpp"
#include "dqc1/unitary_spec.hpp"

namespace dqc1 {

namespace {

constexpr std::uint64_t kUnitaryStream = 0xffffffff00000001ULL;
constexpr std::uint64_t kRhoStream = 0xffffffff00000002ULL;

constexpr std::pair<ExperimentKind, std::string_view> kKinds[] = {
    {ExperimentKind::trace_vs_shots, "trace-vs-shots"},
    {ExperimentKind::entpower_vs_alpha, "entpower-vs-alpha"},
    {ExperimentKind::complexity_curve, "complexity-curve"},
    {ExperimentKind::verify_theorem1, "verify-theorem1"},
    {ExperimentKind::verify_theorem2, "verify-theorem2"},
    {ExperimentKind::verify_theorem3, "verify-theorem3"},
};

using json = nlohmann::json;

template <typename T>
T get_field(const json& value, const std::string& key, const char* expected) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key, std::string("expected ") + expected);
  }
}

double get_number(const json& value, const std::string& key) {
  if (!value.is_number()) throw ConfigError(key, "expected a number");
  return value.get<double>();
}

std::int64_t get_integer(const json& value, const std::string& key) {
  if (!value.is_number_integer()) throw ConfigError(key, "expected an integer");
  return value.get<std::int64_t>();
}

// Evaluates `count` independent points on up to `workers` threads and
// concatenates their rows in point order.
std::vector<ResultRow> run_points(std::size_t count, int workers,
                                  const std::function<std::vector<ResultRow>(std::size_t)>& fn) {
  std::vector<std::vector<ResultRow>> per_point(count);
  std::size_t threads = workers > 0 ? static_cast<std::size_t>(workers)
                                    : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) per_point[i] = fn(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < count; i = next++) per_point[i] = fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
          next = count;
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<ResultRow> rows;
  for (auto& v : per_point) {
    rows.insert(rows.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  }
  return rows;
}

// Re-throws module errors annotated with the parameter point that raised them.
template <typename F>
auto at_point(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(where + ": " + e.what());
  }
}

std::string point_label(std::string_view name, double value) {
  std::ostringstream os;
  os << name << '=' << value;
  return os.str();
}

struct Setup {
  ComplexMatrix u;
  Complex t;
};

Setup make_setup(const ExperimentConfig& cfg) {
  SeededRng rng(cfg.seed, kUnitaryStream);
  ComplexMatrix u = unitary_from_spec(cfg.unitary, cfg.n, rng, cfg.base_dir);
  const Complex t = normalized_trace(u);
  return {std::move(u), t};
}

std::vector<ResultRow> run_trace_vs_shots(const ExperimentConfig& cfg) {
  const auto name = std::string(experiment_name(cfg.experiment));
  const Setup s = make_setup(cfg);
  const Dqc1Instance inst(s.u, cfg.control());
  const std::size_t reps = static_cast<std::size_t>(cfg.repeats);
  return run_points(cfg.shots.size() * reps, cfg.workers, [&](std::size_t p) {
    const std::int64_t shots = cfg.shots[p / reps];
    const double l = static_cast<double>(shots);
    return at_point(point_label("shots", l), [&] {
      SeededRng rng(cfg.seed, p);
      const TraceEstimate est = estimate_trace(inst, shots, rng);
      return std::vector<ResultRow>{
          make_row(name, "shots.re", l, est.trace_estimate.real(), s.t.real(), cfg.seed),
          make_row(name, "shots.im", l, est.trace_estimate.imag(), s.t.imag(), cfg.seed)};
    });
  });
}

std::vector<ResultRow> run_entpower_vs_alpha(const ExperimentConfig& cfg) {
  const auto name = std::string(experiment_name(cfg.experiment));
  const Setup s = make_setup(cfg);
  const PureEnsemble fourier = fourier_ensemble(s.u);
  return run_points(cfg.alphas.size(), cfg.workers, [&](std::size_t p) {
    const double alpha = cfg.alphas[p];
    return at_point(point_label("alpha", alpha), [&] {
      const Dqc1Instance inst(s.u, ControlQubit::polarized(alpha));
      const double reference = entpower_alpha(s.u, alpha);
      SeededRng rng(cfg.seed, p);
      const double sampled = brute_force_entpower(inst, cfg.samples, cfg.system_K(), rng, false);
      return std::vector<ResultRow>{
          make_row(name, "alpha", alpha, ensemble_average(inst, fourier), reference, cfg.seed),
          make_row(name, "alpha.sampled", alpha, sampled, reference, cfg.seed)};
    });
  });
}

std::vector<ResultRow> run_complexity_curve(const ExperimentConfig& cfg) {
  const auto name = std::string(experiment_name(cfg.experiment));
  const Setup s = make_setup(cfg);
  const double alpha = cfg.alpha;
  const Dqc1Instance inst(s.u, ControlQubit::polarized(alpha));
  const double ep = entpower_alpha(s.u, alpha);
  return run_points(cfg.eps.size(), cfg.workers, [&](std::size_t p) {
    const double eps = cfg.eps[p];
    return at_point(point_label("eps", eps), [&] {
      const bool both = s.t.real() != 0.0 && s.t.imag() != 0.0;
      const ErrorBudget budget = both ? balanced_error_budget(eps, cfg.pe, cfg.pe, s.t)
                                      : error_budget(eps, eps, cfg.pe, cfg.pe);
      const RoundsEstimate r = rounds_for_budget(budget, alpha, s.t);
      std::vector<ResultRow> rows{
          make_row(name, "rounds", eps, r.rounds, r.effective_M / (alpha * alpha - ep * ep),
                   cfg.seed),
          make_row(name, "entpower", eps, entpower_from_rounds(alpha, r.effective_M, r.rounds), ep,
                   cfg.seed),
          make_row(name, "complexity", eps, total_complexity(cfg.n, r.rounds),
                   cfg.n * r.effective_M / (alpha * alpha - ep * ep), cfg.seed)};
      SeededRng rng(cfg.seed, p);
      const auto shots = static_cast<std::int64_t>(std::ceil(r.rounds));
      const TraceEstimate est = estimate_trace(inst, shots, rng);
      if (!r.x_dropped) {
        rows.push_back(make_row(name, "relerr.x", eps,
                                relative_error(std::abs(est.trace_estimate.real() - s.t.real()),
                                               s.t.real()),
                                budget.eps_x, cfg.seed));
      }
      if (!r.y_dropped) {
        rows.push_back(make_row(name, "relerr.y", eps,
                                relative_error(std::abs(est.trace_estimate.imag() - s.t.imag()),
                                               s.t.imag()),
                                budget.eps_y, cfg.seed));
      }
      return rows;
    });
  });
}

std::vector<ResultRow> run_theorem1(const ExperimentConfig& cfg) {
  const auto name = std::string(experiment_name(cfg.experiment));
  const Setup s = make_setup(cfg);
  const Dqc1Instance inst(s.u, ControlQubit::polarized(1.0));
  const double reference = entpower_standard(s.u);
  const Index dim = inst.system_dim();
  return run_points(static_cast<std::size_t>(cfg.samples) + 1, cfg.workers, [&](std::size_t p) {
    if (p == 0) {
      return std::vector<ResultRow>{make_row(
          name, "fourier", 0.0, ensemble_average(inst, fourier_ensemble(s.u)), reference, cfg.seed)};
    }
    const double index = static_cast<double>(p - 1);
    return at_point(point_label("sample", index), [&] {
      SeededRng rng(cfg.seed, p);
      const RightUnitary t = random_right_unitary(dim, cfg.system_K(), rng);
      const double measured = ensemble_average(inst, decompose_from_T(inst.system_state(), t));
      return std::vector<ResultRow>{make_row(name, "sample", index, measured, reference, cfg.seed)};
    });
  });
}

std::vector<ResultRow> run_theorem2(const ExperimentConfig& cfg) {
  const auto name = std::string(experiment_name(cfg.experiment));
  const Setup s = make_setup(cfg);
  const PureEnsemble fourier = fourier_ensemble(s.u);
  const double standard = entpower_standard(s.u);
  return run_points(cfg.alphas.size(), cfg.workers, [&](std::size_t p) {
    const double alpha = cfg.alphas[p];
    return at_point(point_label("alpha", alpha), [&] {
      const ControlQubit control = ControlQubit::polarized(alpha);
      const Dqc1Instance inst(s.u, control);
      SeededRng with_analytic(cfg.seed, p);
      SeededRng sampled_only(cfg.seed, p);
      std::vector<ResultRow> rows{
          make_row(name, "min_mixing", alpha,
                   brute_force_min_mixing(control, cfg.samples, cfg.control_K(), with_analytic),
                   alpha, cfg.seed),
          make_row(name, "sampled_min_mixing", alpha,
                   brute_force_min_mixing(control, cfg.samples, cfg.control_K(), sampled_only,
                                          false),
                   alpha, cfg.seed),
          make_row(name, "entpower", alpha, ensemble_average(inst, fourier),
                   entpower_alpha(s.u, alpha), cfg.seed)};
      if (standard > 0.0) {
        rows.push_back(
            make_row(name, "ratio", alpha, entpower_alpha(s.u, alpha) / standard, alpha, cfg.seed));
      }
      return rows;
    });
  });
}

std::vector<ResultRow> run_theorem3(const ExperimentConfig& cfg) {
  const auto name = std::string(experiment_name(cfg.experiment));
  const Setup s = make_setup(cfg);
  SeededRng rho_rng(cfg.seed, kRhoStream);
  const ComplexMatrix rho = density_from_spec(cfg.rho, cfg.n, s.u, rho_rng, cfg.base_dir);
  const ControlQubit control = cfg.control();
  const ControlQubit p3 = ControlQubit::bloch({0.0, 0.0, 1.0});
  const EntpowerBounds bounds = entpower_bounds(s.u, rho);

  return run_points(3, cfg.workers, [&](std::size_t p) -> std::vector<ResultRow> {
    switch (p) {
      case 0: {
        const Dqc1Instance inst(s.u, p3, rho);
        SeededRng rng(cfg.seed, 0);
        const double best = brute_force_entpower(inst, cfg.samples, cfg.system_K(), rng);
        return {make_row(name, "sandwich", 0.0, bounds.lower, bounds.upper, cfg.seed),
                make_row(name, "upper", 0.0, best, bounds.upper, cfg.seed),
                make_row(name, "lower", 0.0, best, bounds.lower, cfg.seed)};
      }
      case 1: {
        const Dqc1Instance inst(s.u, control, rho);
        SeededRng rng(cfg.seed, 0);
        const double best = brute_force_entpower(inst, cfg.samples, cfg.system_K(), rng);
        SeededRng mix_rng(cfg.seed, 1);
        return {make_row(name, "scaled", 0.0, best, entpower_general_scaled(control, bounds.upper),
                         cfg.seed),
                make_row(name, "lambda", 0.0,
                         brute_force_min_mixing(control, cfg.samples, cfg.control_K(), mix_rng),
                         lambda_factor(control), cfg.seed)};
      }
      default: {
        const ComplexMatrix rho_f = general_final_control(control, rho, s.u);
        const double simulated = 1.0 - (rho_f * rho_f).trace().real();
        const double closed = linear_entropy_closed(control.bloch_vector(), (s.u * rho).trace());
        return {make_row(name, "linear_entropy", 0.0, simulated, closed, cfg.seed)};
      }
    }
  });
}

}  // namespace

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (const auto& [kind, label] : kKinds) {
    if (label == name) return kind;
  }
  throw ConfigError("experiment", "unknown experiment \"" + std::string(name) + "\"");
}

std::string_view experiment_name(ExperimentKind kind) {
  for (const auto& [k, label] : kKinds) {
    if (k == kind) return label;
  }
  return "unknown";
}

ControlQubit ExperimentConfig::control() const {
  return bloch ? ControlQubit::bloch(*bloch) : ControlQubit::polarized(alpha);
}

Index ExperimentConfig::system_K() const { return K > 0 ? K : Index{2} << n; }

Index ExperimentConfig::control_K() const { return K > 0 ? K : Index{4}; }

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");

  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  if (!j.contains("experiment")) throw ConfigError("experiment", "required field is missing");
  bool has_alpha = false;

  for (const auto& [key, value] : j.items()) {
    if (key == "experiment") {
      cfg.experiment = parse_experiment_kind(get_field<std::string>(value, key, "a string"));
    } else if (key == "n") {
      const auto n = get_integer(value, key);
      if (n < 1 || n > kMaxQubits) {
        throw ConfigError(key, "out of range [1, " + std::to_string(kMaxQubits) + "]: " +
                                   std::to_string(n));
      }
      cfg.n = static_cast<int>(n);
    } else if (key == "alpha") {
      cfg.alpha = get_number(value, key);
      has_alpha = true;
    } else if (key == "bloch") {
      const auto v = get_field<std::vector<double>>(value, key, "an array of 3 numbers");
      if (v.size() != 3) throw ConfigError(key, "expected an array of 3 numbers");
      cfg.bloch = BlochVector{v[0], v[1], v[2]};
    } else if (key == "unitary") {
      cfg.unitary = get_field<std::string>(value, key, "a unitary spec string");
    } else if (key == "rho") {
      cfg.rho = get_field<std::string>(value, key, "a density spec string");
    } else if (key == "shots") {
      cfg.shots = get_field<std::vector<std::int64_t>>(value, key, "an array of integers");
    } else if (key == "alphas") {
      cfg.alphas = get_field<std::vector<double>>(value, key, "an array of numbers");
    } else if (key == "eps") {
      cfg.eps = get_field<std::vector<double>>(value, key, "an array of numbers");
    } else if (key == "pe") {
      cfg.pe = get_number(value, key);
    } else if (key == "samples") {
      cfg.samples = static_cast<int>(get_integer(value, key));
    } else if (key == "repeats") {
      cfg.repeats = static_cast<int>(get_integer(value, key));
    } else if (key == "K") {
      cfg.K = static_cast<Index>(get_integer(value, key));
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ConfigError(key, "expected a nonnegative integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "output") {
      cfg.output = get_field<std::string>(value, key, "a path string");
    } else if (key == "format") {
      try {
        cfg.format = parse_format(get_field<std::string>(value, key, "\"csv\" or \"json\""));
      } catch (const ConfigError&) {
        throw;
      } catch (const ValidationError& e) {
        throw ConfigError(key, e.what());
      }
    } else if (key == "workers") {
      cfg.workers = static_cast<int>(get_integer(value, key));
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  if (has_alpha && cfg.bloch) throw ConfigError("bloch", "give either alpha or bloch, not both");
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.n < 1 || cfg.n > kMaxQubits) {
    throw ConfigError("n", "out of range [1, " + std::to_string(kMaxQubits) + "]");
  }
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) throw ConfigError("alpha", "must lie in [0, 1]");
  if (cfg.bloch) {
    try {
      ControlQubit::bloch(*cfg.bloch);
    } catch (const ValidationError& e) {
      throw ConfigError("bloch", e.what());
    }
    if (cfg.experiment != ExperimentKind::verify_theorem3 &&
        cfg.experiment != ExperimentKind::trace_vs_shots) {
      throw ConfigError("bloch", "only used by verify-theorem3 and trace-vs-shots");
    }
  }
  if (cfg.shots.empty()) throw ConfigError("shots", "grid is empty");
  for (auto l : cfg.shots) {
    if (l < 1) throw ConfigError("shots", "shot counts must be positive");
  }
  if (cfg.alphas.empty()) throw ConfigError("alphas", "grid is empty");
  for (double a : cfg.alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("alphas", "values must lie in [0, 1]");
  }
  if (cfg.eps.empty()) throw ConfigError("eps", "grid is empty");
  for (double e : cfg.eps) {
    if (!(e > 0.0)) throw ConfigError("eps", "values must be positive");
  }
  if (!(cfg.pe > 0.0 && cfg.pe < 1.0)) throw ConfigError("pe", "must lie in (0, 1)");
  if (cfg.samples < 1) throw ConfigError("samples", "must be at least 1");
  if (cfg.repeats < 1) throw ConfigError("repeats", "must be at least 1");
  if (cfg.K < 0) throw ConfigError("K", "must be nonnegative");
  if (cfg.K > 0 && cfg.K < (Index{1} << cfg.n) &&
      (cfg.experiment == ExperimentKind::verify_theorem1 ||
       cfg.experiment == ExperimentKind::entpower_vs_alpha)) {
    throw ConfigError("K", "must be at least 2^n for system decompositions");
  }
  if (cfg.K == 1) throw ConfigError("K", "must be at least 2");
  if (cfg.workers < 0) throw ConfigError("workers", "must be nonnegative");
  if (cfg.rho != "maximally-mixed" && cfg.experiment != ExperimentKind::verify_theorem3) {
    throw ConfigError("rho", "only used by verify-theorem3");
  }
  const bool needs_information = cfg.experiment == ExperimentKind::trace_vs_shots ||
                                 cfg.experiment == ExperimentKind::complexity_curve;
  if (needs_information && cfg.control().bloch_vector()[1] == 0.0 &&
      cfg.control().bloch_vector()[2] == 0.0) {
    throw ConfigError(cfg.bloch ? "bloch" : "alpha",
                      "the control extracts nothing about U at zero polarization");
  }
  // Parse the specs once so bad names or unreadable files fail validation.
  SeededRng rng(cfg.seed, kUnitaryStream);
  ComplexMatrix u;
  try {
    u = unitary_from_spec(cfg.unitary, cfg.n, rng, cfg.base_dir);
  } catch (const ValidationError& e) {
    throw ConfigError("unitary", e.what());
  }
  if (cfg.experiment == ExperimentKind::verify_theorem3) {
    SeededRng rho_rng(cfg.seed, kRhoStream);
    try {
      density_from_spec(cfg.rho, cfg.n, u, rho_rng, cfg.base_dir);
    } catch (const ValidationError& e) {
      throw ConfigError("rho", e.what());
    }
  }
  if (cfg.experiment == ExperimentKind::complexity_curve) {
    const Complex t = normalized_trace(u);
    if (t.real() == 0.0 && t.imag() == 0.0) {
      throw ConfigError("unitary", "complexity-curve needs a unitary with nonzero trace");
    }
  }
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::trace_vs_shots: return run_trace_vs_shots(cfg);
    case ExperimentKind::entpower_vs_alpha: return run_entpower_vs_alpha(cfg);
    case ExperimentKind::complexity_curve: return run_complexity_curve(cfg);
    case ExperimentKind::verify_theorem1: return run_theorem1(cfg);
    case ExperimentKind::verify_theorem2: return run_theorem2(cfg);
    case ExperimentKind::verify_theorem3: return run_theorem3(cfg);
  }
  throw std::logic_error("run_experiment: unhandled experiment kind");
}

std::vector<std::string> verification_failures(const std::vector<ResultRow>& rows) {
  std::vector<std::string> failures;
  for (const auto& r : rows) {
    const std::string& e = r.experiment;
    const std::string& p = r.param_name;
    bool ok = true;
    if (e == "verify-theorem1") {
      if (p == "fourier") ok = r.deviation <= tol::kTheorem;
      if (p == "sample") ok = r.measured <= r.reference + tol::kTheorem;
    } else if (e == "verify-theorem2") {
      if (p == "min_mixing" || p == "ratio") ok = r.deviation <= tol::kConstruction;
      if (p == "sampled_min_mixing") ok = r.measured >= r.reference - tol::kTheorem;
      if (p == "entpower") ok = r.deviation <= tol::kTheorem;
    } else if (e == "verify-theorem3") {
      if (p == "sandwich" || p == "upper" || p == "scaled") {
        ok = r.measured <= r.reference + tol::kTheorem;
      }
      if (p == "lower" || p == "lambda") ok = r.measured >= r.reference - tol::kTheorem;
      if (p == "linear_entropy") ok = r.deviation <= tol::kConstruction;
    }
    if (!ok) {
      std::ostringstream os;
      os.precision(17);
      os << e << ' ' << p << '=' << r.param_value << ": measured " << r.measured
         << " vs reference " << r.reference;
      failures.push_back(os.str());
    }
  }
  return failures;
}

}  // namespace dqc1
