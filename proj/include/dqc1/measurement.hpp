#pragma once

#include <cstdint>

#include "dqc1/circuit.hpp"
#include "dqc1/random.hpp"

namespace dqc1 {

enum class PauliAxis { x, y, z };

/// Tr(ρ σ_axis) for a single-qubit state.
double expect_pauli(const ComplexMatrix& rho, PauliAxis axis);

/// Exact control-qubit marginal after the circuit, computed blockwise in
/// O(4^n) without forming the joint 2^{n+1}-dimensional state.
ComplexMatrix control_marginal(const Dqc1Instance& inst);

/// Number of +1 outcomes in `shots` independent measurements with P(+1) = p.
std::int64_t sample_shots(double p, std::int64_t shots, SeededRng& rng);

/// Monte Carlo estimate of the normalized trace from σ_x and σ_y shots on the
/// control qubit.
///
/// The control ends in ⟨σ_x⟩ + i⟨σ_y⟩ = (P₃ − iP₂)·Tr(U ρ_n), so the
/// estimate divides the measured means by that gain. For the polarized
/// control this reads t = (⟨σ_x⟩ + i⟨σ_y⟩)/α.
struct TraceEstimate {
  int n = 0;
  double alpha = 0.0;     // |P₃ − iP₂|, equal to α for a polarized control
  Complex gain{0.0, 0.0}; // P₃ − iP₂
  std::int64_t shots_x = 0;
  std::int64_t shots_y = 0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  double stderr_x = 0.0;
  double stderr_y = 0.0;
  Complex trace_estimate{0.0, 0.0};

  bool operator==(const TraceEstimate&) const = default;
};

/// Independent shot budgets of `shots` rounds for each of σ_x and σ_y.
TraceEstimate estimate_trace(const Dqc1Instance& inst, std::int64_t shots, SeededRng& rng);

/// ln(1/pe) / (α² ε²)
double rounds_required(double eps, double pe, double alpha);

/// |ε / X|, as a fraction.
double relative_error(double eps, double true_value);

struct ErrorBudget {
  double eps_x = 0.0;
  double eps_y = 0.0;
  double pe_x = 0.0;
  double pe_y = 0.0;
  double M = 0.0;

  /// ln(1/pe_x)/eps_x²
  double x_term() const;
  /// ln(1/pe_y)/eps_y²
  double y_term() const;
};

ErrorBudget error_budget(double eps_x, double eps_y, double pe_x, double pe_y);

/// Budget whose y-axis relative error is tuned so both quadratures require
/// the same number of rounds for the normalized trace `t`.
ErrorBudget balanced_error_budget(double eps_x, double pe_x, double pe_y, Complex t);

struct RoundsEstimate {
  double rounds = 0.0;     // max over the retained axes
  double rounds_x = 0.0;   // 0 when the axis is dropped
  double rounds_y = 0.0;
  bool x_dropped = false;  // Re t == 0: relative error undefined on σ_x
  bool y_dropped = false;  // Im t == 0
  bool consistent = true;  // retained axes agree to 1e-12 relative
  /// Budget constant over the retained axes; pairs with `rounds` in
  /// entpower_from_rounds.
  double effective_M = 0.0;
};

/// Rounds L with α²L = ln(1/pe)/|ε·X|² per axis, X = Re t or Im t.
RoundsEstimate rounds_for_budget(const ErrorBudget& budget, double alpha, Complex t);

/// √(α² − M/L); radicands down to −1e-12 clamp to zero.
double entpower_from_rounds(double alpha, double M, double L);

/// n·L
double total_complexity(int n, double L);

}  // namespace dqc1
