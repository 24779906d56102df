#pragma once

#include <cstdint>
#include <vector>

#include "dqc1/circuit.hpp"
#include "dqc1/random.hpp"

namespace dqc1 {

/// Weighted pure-state realization Σ q_i |φ_i⟩⟨φ_i| of a density matrix.
struct PureEnsemble {
  std::vector<double> weights;
  std::vector<ComplexVector> states;

  std::size_t size() const { return weights.size(); }
  ComplexMatrix density() const;
  bool realizes(const ComplexMatrix& target, double tol = tol::kSpectral) const;
};

/// Amplitudes of the decomposed control branches after the Hadamard:
/// |γ_j⟩ ∝ x_j|0⟩|φ⟩ + y_j|1⟩U|φ⟩ with weight r_j = |x_j|² + |y_j|².
struct BranchCoefficients {
  std::vector<Complex> xs;
  std::vector<Complex> ys;
  std::vector<double> rs;
  RightUnitary source_T;
};

/// √(2(1 − Tr ρ_r²)) across the control | system cut of a pure state laid out
/// as control ⊗ system.
double pure_entanglement(const ComplexVector& psi);

/// √(1 − |Tr U / 2^n|²)
double entpower_standard(const ComplexMatrix& u);

/// α · entpower_standard(U)
double entpower_alpha(const ComplexMatrix& u, double alpha);

/// 2^n equally weighted states 2^{−n/2} Σ_k e^{2πijk/2^n}|υ_k⟩ built on an
/// orthonormal eigenbasis {|υ_k⟩} of U. Each satisfies ⟨φ_j|U|φ_j⟩ = Tr U/2^n.
PureEnsemble fourier_ensemble(const ComplexMatrix& u);

/// Realization Φ √M T (by columns) of `target`, where Φ, M span its support.
/// T must have as many rows as the rank of the target.
PureEnsemble decompose_from_T(const ComplexMatrix& target, const RightUnitary& T);

/// Same, from an explicit eigensystem; the eigenvector count must equal T's
/// row count. Zero-weight columns are dropped.
PureEnsemble decompose_from_T(const Spectrum& eigensystem, const RightUnitary& T);

/// Eigensystem Φ′, M′ of ρ_c: columns (cos θ/2, e^{iφ} sin θ/2) and
/// (−e^{−iφ} sin θ/2, cos θ/2) with eigenvalues (1 ± Γ)/2, where P is
/// Γ(sin θ cos φ, sin θ sin φ, cos θ). Direction-less P uses θ = φ = 0.
Spectrum control_eigensystem(const ControlQubit& control);

BranchCoefficients branch_coefficients(const ControlQubit& control, const RightUnitary& T);

/// Σ_j 2|x_j||y_j|
double mixing_factor(const BranchCoefficients& bc);

/// λ₁ − λ₂ with λ_k the square roots of the eigenvalues of ρ_c σ_z ρ_c* σ_z.
double lambda_factor(const ControlQubit& control);

/// 2×2 right unitary on control_eigensystem() whose decomposition attains the
/// minimal mixing factor λ₁ − λ₂. For a polarized control this is the real
/// Hadamard matrix.
RightUnitary optimal_control_decomposition(const ControlQubit& control);

/// Σ_j r_j E(|γ_j⟩) for the control decomposition T and one system state φ,
/// evaluated by building each branch state explicitly.
double branch_entanglement(const ControlQubit& control, const ComplexVector& phi,
                           const ComplexMatrix& u, const RightUnitary& T);

/// How the mixed-state entanglement of each branch is minimized when the
/// control qubit is mixed: the analytic decomposition is always a candidate,
/// plus `sampled_decompositions` random right unitaries with K columns.
struct MixedBranchOptions {
  int sampled_decompositions = 0;
  Index K = 4;
  std::uint64_t seed = 0;
};

/// Σ_i q_i E[Ũ(ρ_c ⊗ |φ_i⟩⟨φ_i|)Ũ†] for an ensemble realizing the instance's
/// system state.
double ensemble_average(const Dqc1Instance& inst, const PureEnsemble& ens,
                        const MixedBranchOptions& options = {});

struct EntpowerBounds {
  double lower = 0.0;  // 1 − Tr√(UρU†ρ)
  double upper = 0.0;  // √(1 − |Tr Uρ|²)
};

EntpowerBounds entpower_bounds(const ComplexMatrix& u, const ComplexMatrix& rho_n);

/// lambda_factor(control) · base
double entpower_general_scaled(const ControlQubit& control, double base);

/// ensemble_average over `samples` random realizations of the system state,
/// each from a random right unitary with K columns (per-sample substreams).
std::vector<double> sampled_ensemble_averages(const Dqc1Instance& inst, int samples, Index K,
                                              SeededRng& rng);

/// Max of sampled_ensemble_averages, with the Fourier ensemble as an extra
/// candidate when the system is maximally mixed and `include_fourier` is set.
double brute_force_entpower(const Dqc1Instance& inst, int samples, Index K, SeededRng& rng,
                            bool include_fourier = true);

/// Min of mixing_factor over `samples` random 2×K right unitaries, with the
/// analytic minimizer as an extra candidate when `include_analytic` is set.
double brute_force_min_mixing(const ControlQubit& control, int samples, Index K,
                              SeededRng& rng, bool include_analytic = true);

}  // namespace dqc1
