#pragma once

#include <array>
#include <optional>

#include "dqc1/numerics.hpp"

namespace dqc1 {

using BlochVector = std::array<double, 3>;

/// State of the control qubit, ρ_c = ½(I + P·σ). A polarized control
/// ½(I + ασ_z) is the Bloch vector (0, 0, α); both share every code path.
class ControlQubit {
 public:
  enum class Mode { alpha, bloch };

  static ControlQubit polarized(double alpha);
  static ControlQubit bloch(const BlochVector& p);

  Mode mode() const { return mode_; }
  const BlochVector& bloch_vector() const { return p_; }
  /// Polarization α; only meaningful in alpha mode (otherwise P₃).
  double alpha() const { return p_[2]; }
  /// Γ = ‖P‖
  double gamma() const;
  bool is_pure(double tol = tol::kConstruction) const;

  ComplexMatrix density() const;

 private:
  ControlQubit(Mode mode, const BlochVector& p) : mode_(mode), p_(p) {}

  Mode mode_;
  BlochVector p_;
};

/// One DQC1 problem: the n-qubit unitary, the control qubit, and the state
/// fed into the system register (I/2^n unless given).
class Dqc1Instance {
 public:
  Dqc1Instance(ComplexMatrix unitary, ControlQubit control,
               std::optional<ComplexMatrix> system_state = std::nullopt);

  int n() const { return n_; }
  Index system_dim() const { return unitary_.rows(); }
  const ComplexMatrix& unitary() const { return unitary_; }
  const ControlQubit& control() const { return control_; }
  const ComplexMatrix& system_state() const { return system_state_; }
  bool maximally_mixed_system(double tol = tol::kConstruction) const;

 private:
  int n_;
  ComplexMatrix unitary_;
  ControlQubit control_;
  ComplexMatrix system_state_;
};

/// Number of system qubits for a 2^n × 2^n unitary; throws otherwise.
int qubit_count(const ComplexMatrix& u);

/// Tr U / 2^n
Complex normalized_trace(const ComplexMatrix& u);

ComplexMatrix initial_state(const Dqc1Instance& inst);

/// |0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ U
ComplexMatrix controlled_u(const ComplexMatrix& u);

/// controlled_u(U) · (H ⊗ I), the full circuit unitary.
ComplexMatrix circuit_unitary(const ComplexMatrix& u);

/// Step-by-step evolution V ρ₀ V†.
ComplexMatrix evolve(const Dqc1Instance& inst);

/// Closed-form output for the polarized control and maximally mixed register,
/// normalized to unit trace.
ComplexMatrix final_state_closed(double alpha, const ComplexMatrix& u);

/// (|0⟩|φ⟩ + |1⟩U|φ⟩)/√2
ComplexVector branch_pure_state(const ComplexVector& phi, const ComplexMatrix& u);

/// ½(|φ⟩⟨φ| + U|φ⟩⟨φ|U†), the system marginal of branch_pure_state.
ComplexMatrix reduced_system_state(const ComplexVector& phi, const ComplexMatrix& u);

/// Control-qubit marginal after the circuit acts on H ρ_c H† ⊗ ρ_n.
ComplexMatrix general_final_control(const ControlQubit& control, const ComplexMatrix& rho_n,
                                    const ComplexMatrix& u);

/// 1 − Tr ρ_f² = ½(1 − P₁² − (P₂² + P₃²)|t|²) with t = Tr(U ρ_n).
double linear_entropy_closed(const BlochVector& p, Complex t);

}  // namespace dqc1
