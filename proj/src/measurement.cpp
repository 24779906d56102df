#include "dqc1/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dqc1 {

double expect_pauli(const ComplexMatrix& rho, PauliAxis axis) {
  if (rho.rows() != 2 || rho.cols() != 2) {
    throw ValidationError("expect_pauli: expected a single-qubit state");
  }
  const ComplexMatrix& s = axis == PauliAxis::x   ? pauli_x()
                           : axis == PauliAxis::y ? pauli_y()
                                                  : pauli_z();
  return (rho * s).trace().real();
}

ComplexMatrix control_marginal(const Dqc1Instance& inst) {
  const ComplexMatrix h = hadamard();
  const ComplexMatrix a = h * inst.control().density() * h.adjoint();
  const Complex t = (inst.unitary() * inst.system_state()).trace();
  ComplexMatrix out(2, 2);
  out(0, 0) = a(0, 0);
  out(0, 1) = a(0, 1) * std::conj(t);
  out(1, 0) = a(1, 0) * t;
  out(1, 1) = a(1, 1);
  return out;
}

std::int64_t sample_shots(double p, std::int64_t shots, SeededRng& rng) {
  if (shots < 1) throw ValidationError("sample_shots: shot count must be positive");
  if (!(p >= -tol::kConstruction && p <= 1.0 + tol::kConstruction)) {
    throw ValidationError("sample_shots: probability outside [0, 1]");
  }
  p = std::clamp(p, 0.0, 1.0);
  std::binomial_distribution<std::int64_t> dist(shots, p);
  return dist(rng.engine());
}

namespace {

struct AxisSample {
  double mean;
  double stderr_;
};

AxisSample measure_axis(double expectation, std::int64_t shots, SeededRng& rng) {
  const std::int64_t plus = sample_shots(0.5 * (1.0 + expectation), shots, rng);
  const double l = static_cast<double>(shots);
  const double mean = (2.0 * static_cast<double>(plus) - l) / l;
  double var = 0.0;
  if (shots > 1) var = std::max(0.0, (1.0 - mean * mean) * l / (l - 1.0));
  return {mean, std::sqrt(var / l)};
}

}  // namespace

TraceEstimate estimate_trace(const Dqc1Instance& inst, std::int64_t shots, SeededRng& rng) {
  const auto& p = inst.control().bloch_vector();
  const Complex gain(p[2], -p[1]);
  if (std::abs(gain) == 0.0) {
    throw ValidationError(
        "estimate_trace: control carries no polarization in the y-z plane (alpha = 0); "
        "the measurements extract nothing about U");
  }
  const ComplexMatrix rho_f = control_marginal(inst);
  const AxisSample x = measure_axis(expect_pauli(rho_f, PauliAxis::x), shots, rng);
  const AxisSample y = measure_axis(expect_pauli(rho_f, PauliAxis::y), shots, rng);

  TraceEstimate est;
  est.n = inst.n();
  est.alpha = std::abs(gain);
  est.gain = gain;
  est.shots_x = shots;
  est.shots_y = shots;
  est.mean_x = x.mean;
  est.mean_y = y.mean;
  est.stderr_x = x.stderr_;
  est.stderr_y = y.stderr_;
  est.trace_estimate = Complex(x.mean, y.mean) / gain;
  return est;
}

double rounds_required(double eps, double pe, double alpha) {
  if (!(eps > 0.0)) throw ValidationError("rounds_required: eps must be positive");
  if (!(pe > 0.0 && pe < 1.0)) throw ValidationError("rounds_required: pe must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ValidationError("rounds_required: alpha must lie in (0, 1]");
  }
  return std::log(1.0 / pe) / (alpha * alpha * eps * eps);
}

double relative_error(double eps, double true_value) {
  if (!(eps >= 0.0)) throw ValidationError("relative_error: eps must be nonnegative");
  if (true_value == 0.0 || !std::isfinite(true_value)) {
    throw ValidationError("relative_error: undefined for a true value of 0");
  }
  return std::abs(eps / true_value);
}

double ErrorBudget::x_term() const { return std::log(1.0 / pe_x) / (eps_x * eps_x); }

double ErrorBudget::y_term() const { return std::log(1.0 / pe_y) / (eps_y * eps_y); }

ErrorBudget error_budget(double eps_x, double eps_y, double pe_x, double pe_y) {
  if (!(eps_x > 0.0 && eps_y > 0.0)) {
    throw ValidationError("error_budget: relative errors must be positive");
  }
  if (!(pe_x > 0.0 && pe_x < 1.0 && pe_y > 0.0 && pe_y < 1.0)) {
    throw ValidationError("error_budget: failure probabilities must lie in (0, 1)");
  }
  ErrorBudget b{eps_x, eps_y, pe_x, pe_y, 0.0};
  b.M = b.x_term() + b.y_term();
  return b;
}

ErrorBudget balanced_error_budget(double eps_x, double pe_x, double pe_y, Complex t) {
  if (t.real() == 0.0 || t.imag() == 0.0) {
    throw ValidationError("balanced_error_budget: both quadratures of t must be nonzero");
  }
  error_budget(eps_x, eps_x, pe_x, pe_y);  // validates the shared inputs
  // ln(1/pe_x)/(eps_x Re t)² = ln(1/pe_y)/(eps_y Im t)²
  const double eps_y = std::abs(eps_x * t.real() / t.imag()) *
                       std::sqrt(std::log(1.0 / pe_y) / std::log(1.0 / pe_x));
  return error_budget(eps_x, eps_y, pe_x, pe_y);
}

RoundsEstimate rounds_for_budget(const ErrorBudget& budget, double alpha, Complex t) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ValidationError("rounds_for_budget: alpha must lie in (0, 1]");
  }
  const double re = t.real();
  const double im = t.imag();
  if (re == 0.0 && im == 0.0) {
    throw ValidationError("rounds_for_budget: both quadratures of t are zero");
  }
  const double a2 = alpha * alpha;
  RoundsEstimate r;
  r.x_dropped = re == 0.0;
  r.y_dropped = im == 0.0;
  if (!r.x_dropped) {
    r.rounds_x = budget.x_term() / (a2 * re * re);
    r.effective_M += budget.x_term();
  }
  if (!r.y_dropped) {
    r.rounds_y = budget.y_term() / (a2 * im * im);
    r.effective_M += budget.y_term();
  }
  r.rounds = std::max(r.rounds_x, r.rounds_y);
  if (!r.x_dropped && !r.y_dropped) {
    r.consistent = std::abs(r.rounds_x - r.rounds_y) <= 1e-12 * r.rounds;
  }
  return r;
}

double entpower_from_rounds(double alpha, double M, double L) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("entpower_from_rounds: alpha must lie in [0, 1]");
  }
  if (!(M >= 0.0) || !(L > 0.0)) {
    throw ValidationError("entpower_from_rounds: need M >= 0 and L > 0");
  }
  const double radicand = alpha * alpha - M / L;
  if (radicand < -tol::kConstruction) {
    throw ValidationError("entpower_from_rounds: budget M is inconsistent with L rounds");
  }
  return std::sqrt(std::max(0.0, radicand));
}

double total_complexity(int n, double L) {
  if (n < 1 || !(L > 0.0)) throw ValidationError("total_complexity: need n >= 1 and L > 0");
  return static_cast<double>(n) * L;
}

}  // namespace dqc1
