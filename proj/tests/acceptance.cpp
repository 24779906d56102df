// Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any fail.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dqc1/entpower.hpp"
#include "dqc1/measurement.hpp"
#include "dqc1/unitary_spec.hpp"
#include "oracles.hpp"

using namespace dqc1;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

BlochVector random_bloch(SeededRng& rng) {
  BlochVector p{rng.normal(), rng.normal(), rng.normal()};
  const double norm = std::hypot(p[0], p[1], p[2]);
  const double radius = std::cbrt(rng.uniform());
  for (double& c : p) c *= radius / norm;
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome fourier_saturation() {
  const auto t0 = std::chrono::steady_clock::now();
  SeededRng rng(1001);
  double worst = 0;
  for (int n = 1; n <= 3; ++n) {
    for (int i = 0; i < 100; ++i) {
      const auto u = haar_unitary(Index{1} << n, rng);
      const Dqc1Instance inst(u, ControlQubit::polarized(1.0));
      const double avg = ensemble_average(inst, fourier_ensemble(u));
      const Complex t = oracle::normalized_trace(u);
      worst = std::max(worst, std::abs(avg - std::sqrt(1 - std::norm(t))));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 30,
          fmt("300 unitaries, max |avg - closed form| = %.3g, %.2f s", worst, secs)};
}

Outcome concavity_bound() {
  SeededRng rng(1002);
  int violations = 0;
  double worst = -1;
  for (int i = 0; i < 500; ++i) {
    const int n = 1 + i % 3;
    const Index d = Index{1} << n;
    const auto u = haar_unitary(d, rng);
    const Dqc1Instance inst(u, ControlQubit::polarized(1.0));
    const auto ens = decompose_from_T(identity(d) / double(d), random_right_unitary(d, 2 * d, rng));
    const double excess = ensemble_average(inst, ens) - std::sqrt(1 - std::norm(oracle::normalized_trace(u)));
    worst = std::max(worst, excess);
    violations += excess > 1e-9;
  }
  return {violations == 0,
          fmt("500 ensembles, %g violations, max excess %.3g", violations, worst)};
}

Outcome polarization_scaling() {
  SeededRng rng(1003);
  const auto u = haar_unitary(4, rng);
  double worst_exact = 0, lowest_margin = 1, worst_ratio = 0;
  for (int k = 1; k <= 10; ++k) {
    const double alpha = 0.1 * k;
    const auto c = ControlQubit::polarized(alpha);
    SeededRng sub(1003, k);
    worst_exact = std::max(worst_exact, std::abs(brute_force_min_mixing(c, 1, 4, sub) - alpha));
    SeededRng sampled(1004, k);
    lowest_margin = std::min(lowest_margin,
                             brute_force_min_mixing(c, 10000, 4, sampled, false) - alpha);
    worst_ratio = std::max(worst_ratio,
                           std::abs(entpower_alpha(u, alpha) / entpower_standard(u) - alpha));
  }
  return {worst_exact <= 1e-12 && lowest_margin >= -1e-9 && worst_ratio <= 1e-15,
          fmt("|min - alpha| <= %.3g, sampled min - alpha >= %.3g, ratio error %.3g", worst_exact,
              lowest_margin, worst_ratio)};
}

Outcome general_bounds() {
  SeededRng rng(1005);
  double worst_gap = -1, worst_commuting = 0;
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + i % 3;
    const Index d = Index{1} << n;
    const auto u = haar_unitary(d, rng);
    const auto b = entpower_bounds(u, random_density(d, 1 + i % d, rng));
    worst_gap = std::max(worst_gap, b.lower - b.upper);
    const auto commuting = entpower_bounds(u, density_from_spec("commuting", n, u, rng));
    worst_commuting = std::max(worst_commuting, std::abs(commuting.lower));
  }
  double worst_lambda = 0;
  worst_lambda = std::max(worst_lambda, std::abs(lambda_factor(ControlQubit::bloch({0, 0, 1})) - 1));
  worst_lambda = std::max(worst_lambda, std::abs(lambda_factor(ControlQubit::bloch({0, 0, 0}))));
  for (int k = 0; k <= 10; ++k) {
    const double alpha = 0.1 * k;
    worst_lambda =
        std::max(worst_lambda, std::abs(lambda_factor(ControlQubit::polarized(alpha)) - alpha));
  }
  return {worst_gap <= 1e-9 && worst_commuting <= 1e-10 && worst_lambda <= 1e-12,
          fmt("max(lower - upper) = %.3g, commuting |lower| <= %.3g, lambda error %.3g", worst_gap,
              worst_commuting, worst_lambda)};
}

Outcome linear_entropy() {
  SeededRng rng(1006);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const int d = 1 << (1 + i % 3);
    const auto p = random_bloch(rng);
    const auto u = haar_unitary(d, rng);
    const auto rho = random_density(d, 1 + i % d, rng);
    const auto full = oracle::evolve(oracle::control_density(p[0], p[1], p[2]), rho, u);
    const double simulated = 1 - oracle::purity(oracle::trace_out_system(full, 2, d));
    worst = std::max(worst, std::abs(linear_entropy_closed(p, (u * rho).trace()) - simulated));
  }
  return {worst <= 1e-12, fmt("200 cases, max deviation %.3g", worst)};
}

Outcome trace_estimation() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::int64_t shots = 1000000;
  std::string detail;
  bool pass = true;
  for (double alpha : {0.5, 1.0}) {
    int ok = 0;
    for (int seed = 0; seed < 100; ++seed) {
      SeededRng urng(2000 + seed, 1);
      const auto u = haar_unitary(4, urng);
      const Complex t = oracle::normalized_trace(u);
      SeededRng rng(2000 + seed, 0);
      const auto est = estimate_trace(Dqc1Instance(u, ControlQubit::polarized(alpha)), shots, rng);
      const double bound = 5.0 / (alpha * std::sqrt(double(shots)));
      ok += std::abs(est.trace_estimate.real() - t.real()) <= bound &&
            std::abs(est.trace_estimate.imag() - t.imag()) <= bound;
    }
    pass = pass && ok >= 99;
    detail += fmt("alpha=%.1f: %g/100 seeds within bound; ", alpha, ok);
  }
  const double secs = seconds_since(t0);
  return {pass && secs < 60, detail + fmt("%.2f s", secs)};
}

Outcome complexity_identity() {
  SeededRng rng(1007);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 4;
    const auto u = haar_unitary(Index{1} << n, rng);
    const double alpha = 0.01 + 0.99 * rng.uniform();
    const Complex t = oracle::normalized_trace(u);
    const auto budget = balanced_error_budget(0.01 + 0.5 * rng.uniform(), 0.01 + 0.3 * rng.uniform(),
                                              0.01 + 0.3 * rng.uniform(), t);
    const auto r = rounds_for_budget(budget, alpha, t);
    const double ep = entpower_from_rounds(alpha, r.effective_M, r.rounds);
    worst = std::max(worst, std::abs(ep - alpha * std::sqrt(1 - std::norm(t))));
  }
  return {worst <= 1e-12, fmt("100 cases, max deviation %.3g", worst)};
}

Outcome shot_scaling() {
  SeededRng urng(1008);
  const auto u = haar_unitary(4, urng);
  const Complex t = oracle::normalized_trace(u);
  const double alpha = 0.5, eps = 0.05;
  const Dqc1Instance inst(u, ControlQubit::polarized(alpha));
  const int trials = 2000;
  std::array<double, 3> rates{};
  const std::array<std::int64_t, 3> grid{100, 1000, 10000};
  for (std::size_t g = 0; g < grid.size(); ++g) {
    int failures = 0;
    for (int s = 0; s < trials; ++s) {
      SeededRng rng(1008, g * trials + s);
      const auto est = estimate_trace(inst, grid[g], rng);
      failures += std::abs(est.trace_estimate.real() - t.real()) > eps;
    }
    rates[g] = double(failures) / trials;
  }
  return {rates[0] >= rates[1] && rates[1] >= rates[2],
          fmt("failure rate at L=1e2,1e3,1e4: %.4f, %.4f, %.4f", rates[0], rates[1], rates[2])};
}

std::string capture(const std::string& cmd, int& code) {
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    code = -1;
    return {};
  }
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  code = pclose(pipe);
  return out;
}

Outcome determinism() {
  const std::string cmd = std::string(DQC1_CLI_PATH) + " run " + DQC1_CONFIG_DIR +
                          "/verify_theorem1.json --seed 42";
  int c1 = 0, c2 = 0;
  const std::string a = capture(cmd, c1);
  const std::string b = capture(cmd, c2);
  return {c1 == 0 && c2 == 0 && !a.empty() && a == b,
          fmt("exit codes %g/%g, %g bytes, identical", c1, c2, double(a.size())) +
              (a == b ? "" : " -- OUTPUT DIFFERS")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Fourier ensemble saturates the maximally mixed bound", fourier_saturation},
      {"concavity upper bound", concavity_bound},
      {"polarization scaling of the mixing factor", polarization_scaling},
      {"general-state bounds and lambda factor", general_bounds},
      {"linear entropy from full evolution", linear_entropy},
      {"trace estimation", trace_estimation},
      {"complexity identity", complexity_identity},
      {"shot scaling", shot_scaling},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %zu: %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
