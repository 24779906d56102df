#include "dqc1/entpower.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace dqc1 {

namespace {

// Columns with less weight than this are dropped from a decomposition.
constexpr double kNegligibleWeight = 1e-14;
constexpr double kSupportThreshold = 1e-12;

Spectrum support_of(const ComplexMatrix& target) {
  if (!is_density(target, tol::kSpectral)) {
    throw ValidationError("decompose_from_T: target is not a density matrix");
  }
  const Spectrum full = eig_hermitian(target);
  Index rank = 0;
  while (rank < full.size() && full.eigenvalues(rank).real() > kSupportThreshold) ++rank;
  return Spectrum{full.eigenvalues.head(rank), full.eigenvectors.leftCols(rank)};
}

struct Takagi {
  Eigen::Vector2d values;  // descending
  ComplexMatrix vectors;   // τ = W diag(values) Wᵀ
};

// Takagi factorization of a complex symmetric 2×2 matrix τ = X + iY. Vectors
// w = u + iv with τ w̄ = σ w are exactly the eigenvectors [u; v] of the real
// symmetric [[X, Y], [Y, −X]] with eigenvalue σ ≥ 0; the top two of them are
// complex-orthonormal, also for degenerate σ.
Takagi takagi_symmetric_2x2(const ComplexMatrix& tau) {
  const Eigen::Matrix2d x = tau.real();
  const Eigen::Matrix2d y = tau.imag();
  Eigen::Matrix4d embed;
  embed << x, y, y, -x;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(embed);
  Takagi out{Eigen::Vector2d::Zero(), identity(2)};
  if (es.eigenvalues()(3) <= 0.0) return out;  // τ = 0
  for (int k = 0; k < 2; ++k) {
    const int src = 3 - k;
    out.values(k) = std::max(0.0, es.eigenvalues()(src));
    const Eigen::Vector4d v = es.eigenvectors().col(src);
    out.vectors(0, k) = Complex(v(0), v(2));
    out.vectors(1, k) = Complex(v(1), v(3));
  }
  const ComplexMatrix rebuilt =
      out.vectors * out.values.cast<Complex>().asDiagonal() * out.vectors.transpose();
  if (max_abs(rebuilt - tau) > tol::kSpectral) {
    throw std::logic_error("takagi_symmetric_2x2: reconstruction failed");
  }
  return out;
}

// Φ′ √M′, the subnormalized eigenvectors of ρ_c.
ComplexMatrix control_factor(const ControlQubit& control) {
  const Spectrum eig = control_eigensystem(control);
  ComplexMatrix v = eig.eigenvectors;
  for (Index k = 0; k < 2; ++k) v.col(k) *= std::sqrt(std::max(0.0, eig.eigenvalues(k).real()));
  return v;
}

}  // namespace

ComplexMatrix PureEnsemble::density() const {
  if (states.empty()) throw ValidationError("PureEnsemble: empty ensemble");
  const Index d = states.front().size();
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < states.size(); ++i) {
    rho += weights[i] * states[i] * states[i].adjoint();
  }
  return rho;
}

bool PureEnsemble::realizes(const ComplexMatrix& target, double tol) const {
  if (weights.size() != states.size() || states.empty()) return false;
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!(weights[i] > 0.0) || states[i].size() != target.rows()) return false;
    if (std::abs(states[i].norm() - 1.0) > tol) return false;
    total += weights[i];
  }
  return std::abs(total - 1.0) <= tol && max_abs(density() - target) <= tol;
}

double pure_entanglement(const ComplexVector& psi) {
  if (psi.size() < 2 || psi.size() % 2 != 0) {
    throw ValidationError("pure_entanglement: state dimension must be 2·d");
  }
  if (std::abs(psi.norm() - 1.0) > tol::kConstruction) {
    throw ValidationError("pure_entanglement: state is not normalized");
  }
  const Index d = psi.size() / 2;
  const auto a = psi.head(d);
  const auto b = psi.tail(d);
  const double p0 = a.squaredNorm();
  const double p1 = b.squaredNorm();
  const double coherence = std::norm(b.dot(a));
  const double purity = p0 * p0 + p1 * p1 + 2.0 * coherence;
  return std::clamp(std::sqrt(std::max(0.0, 2.0 * (1.0 - purity))), 0.0, 1.0);
}

double entpower_standard(const ComplexMatrix& u) {
  if (!is_unitary(u, tol::kSpectral)) throw ValidationError("entpower_standard: U is not unitary");
  return std::sqrt(std::max(0.0, 1.0 - std::norm(normalized_trace(u))));
}

double entpower_alpha(const ComplexMatrix& u, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("entpower_alpha: alpha must lie in [0, 1]");
  }
  return alpha * entpower_standard(u);
}

PureEnsemble fourier_ensemble(const ComplexMatrix& u) {
  qubit_count(u);
  const Spectrum eig = eig_unitary(u);
  const Index d = u.rows();
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  ComplexMatrix f(d, d);
  for (Index k = 0; k < d; ++k) {
    for (Index j = 0; j < d; ++j) {
      // Reduce jk mod d before scaling so large indices keep full precision.
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % d) /
                           static_cast<double>(d);
      f(k, j) = std::polar(scale, angle);
    }
  }
  const ComplexMatrix states = eig.eigenvectors * f;
  PureEnsemble ens;
  ens.weights.assign(static_cast<std::size_t>(d), 1.0 / static_cast<double>(d));
  ens.states.reserve(static_cast<std::size_t>(d));
  for (Index j = 0; j < d; ++j) ens.states.emplace_back(states.col(j));
  return ens;
}

PureEnsemble decompose_from_T(const Spectrum& eigensystem, const RightUnitary& T) {
  if (eigensystem.eigenvectors.cols() != T.rows()) {
    throw ValidationError("decompose_from_T: T has " + std::to_string(T.rows()) +
                          " rows but the eigensystem has " +
                          std::to_string(eigensystem.eigenvectors.cols()) + " vectors");
  }
  ComplexMatrix factor = eigensystem.eigenvectors;
  for (Index k = 0; k < factor.cols(); ++k) {
    factor.col(k) *= std::sqrt(std::max(0.0, eigensystem.eigenvalues(k).real()));
  }
  const ComplexMatrix columns = factor * T.matrix();
  PureEnsemble ens;
  for (Index j = 0; j < columns.cols(); ++j) {
    const double w = columns.col(j).squaredNorm();
    if (w <= kNegligibleWeight) continue;
    ens.weights.push_back(w);
    ens.states.emplace_back(columns.col(j) / std::sqrt(w));
  }
  return ens;
}

PureEnsemble decompose_from_T(const ComplexMatrix& target, const RightUnitary& T) {
  return decompose_from_T(support_of(target), T);
}

Spectrum control_eigensystem(const ControlQubit& control) {
  const auto& p = control.bloch_vector();
  const double g = control.gamma();
  double theta = 0.0;
  double phi = 0.0;
  if (g > 0.0) {
    theta = std::acos(std::clamp(p[2] / g, -1.0, 1.0));
    if (p[0] != 0.0 || p[1] != 0.0) phi = std::atan2(p[1], p[0]);
  }
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Spectrum out{ComplexVector(2), ComplexMatrix(2, 2)};
  out.eigenvectors(0, 0) = c;
  out.eigenvectors(1, 0) = std::polar(s, phi);
  out.eigenvectors(0, 1) = -std::polar(s, -phi);
  out.eigenvectors(1, 1) = c;
  const double gc = std::min(g, 1.0);
  out.eigenvalues(0) = 0.5 * (1.0 + gc);
  out.eigenvalues(1) = 0.5 * (1.0 - gc);
  return out;
}

BranchCoefficients branch_coefficients(const ControlQubit& control, const RightUnitary& T) {
  if (T.rows() != 2) {
    throw ValidationError("branch_coefficients: T must have 2 rows");
  }
  const ComplexMatrix psi = control_factor(control) * T.matrix();
  BranchCoefficients bc{{}, {}, {}, T};
  const double s = 1.0 / std::numbers::sqrt2;
  for (Index j = 0; j < psi.cols(); ++j) {
    const Complex x = s * (psi(0, j) + psi(1, j));
    const Complex y = s * (psi(0, j) - psi(1, j));
    bc.xs.push_back(x);
    bc.ys.push_back(y);
    bc.rs.push_back(std::norm(x) + std::norm(y));
  }
  return bc;
}

double mixing_factor(const BranchCoefficients& bc) {
  double sum = 0.0;
  for (std::size_t j = 0; j < bc.xs.size(); ++j) {
    sum += 2.0 * std::abs(bc.xs[j]) * std::abs(bc.ys[j]);
  }
  return sum;
}

double lambda_factor(const ControlQubit& control) {
  const ComplexMatrix rho = control.density();
  const ComplexMatrix z = pauli_z();
  const ComplexMatrix r = rho * z * rho.conjugate() * z;
  // For 2×2: λ₁² + λ₂² = Tr R and λ₁λ₂ = √det R = |det ρ_c|, so
  // (λ₁ − λ₂)² = Tr R − 2|det ρ_c| without square-rooting a tiny eigenvalue.
  const double trace = r.trace().real();
  const double det = std::abs(rho.determinant());
  return std::clamp(std::sqrt(std::max(0.0, trace - 2.0 * det)), 0.0, 1.0);
}

RightUnitary optimal_control_decomposition(const ControlQubit& control) {
  const ComplexMatrix v = control_factor(control);
  // (Tᵀ τ T)_jj = ψ_jᵀ σ_z ψ_j = 2 x_j y_j for ψ = v T.
  const ComplexMatrix tau = v.transpose() * pauli_z() * v;
  const Takagi tk = takagi_symmetric_2x2(tau);
  // With T = W̄ R, Tᵀ τ T = Rᵀ diag(σ) R, whose diagonal entries are both
  // (σ₁ − σ₂)/2 for this R.
  ComplexMatrix r(2, 2);
  const double s = 1.0 / std::numbers::sqrt2;
  r << s, s, Complex(0.0, s), Complex(0.0, -s);
  return RightUnitary(tk.vectors.conjugate() * r, tol::kConstruction);
}

double branch_entanglement(const ControlQubit& control, const ComplexVector& phi,
                           const ComplexMatrix& u, const RightUnitary& T) {
  if (T.rows() != 2) throw ValidationError("branch_entanglement: T must have 2 rows");
  const Index d = u.rows();
  if (phi.size() != d) throw ValidationError("branch_entanglement: dimension mismatch");
  const ComplexVector uphi = u * phi;
  const ComplexMatrix columns = control_factor(control) * T.matrix();
  const ComplexMatrix h = hadamard();
  double sum = 0.0;
  ComplexVector gamma(2 * d);
  for (Index j = 0; j < columns.cols(); ++j) {
    const double w = columns.col(j).squaredNorm();
    if (w <= kNegligibleWeight) continue;
    const ComplexVector c = h * columns.col(j) / std::sqrt(w);
    gamma.head(d) = c(0) * phi;
    gamma.tail(d) = c(1) * uphi;
    gamma.normalize();
    sum += w * pure_entanglement(gamma);
  }
  return sum;
}

double ensemble_average(const Dqc1Instance& inst, const PureEnsemble& ens,
                        const MixedBranchOptions& options) {
  if (!ens.realizes(inst.system_state(), tol::kSpectral)) {
    throw ValidationError("ensemble_average: ensemble does not realize the system state");
  }
  const ControlQubit& control = inst.control();
  const RightUnitary analytic = optimal_control_decomposition(control);
  const bool search = options.sampled_decompositions > 0 && !control.is_pure();
  if (search && options.K < 2) {
    throw ValidationError("ensemble_average: need K >= 2 for sampled decompositions");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    double e = branch_entanglement(control, ens.states[i], inst.unitary(), analytic);
    if (search) {
      SeededRng rng(options.seed, i);
      for (int s = 0; s < options.sampled_decompositions; ++s) {
        const RightUnitary t = random_right_unitary(2, options.K, rng);
        e = std::min(e, branch_entanglement(control, ens.states[i], inst.unitary(), t));
      }
    }
    total += ens.weights[i] * e;
  }
  return total;
}

EntpowerBounds entpower_bounds(const ComplexMatrix& u, const ComplexMatrix& rho_n) {
  const double fidelity = trace_sqrt_product(u, rho_n);
  const Complex t = (u * rho_n).trace();
  return {1.0 - fidelity, std::sqrt(std::max(0.0, 1.0 - std::norm(t)))};
}

double entpower_general_scaled(const ControlQubit& control, double base) {
  if (!(base >= -tol::kTheorem && base <= 1.0 + tol::kTheorem)) {
    throw ValidationError("entpower_general_scaled: base must lie in [0, 1]");
  }
  return lambda_factor(control) * base;
}

std::vector<double> sampled_ensemble_averages(const Dqc1Instance& inst, int samples, Index K,
                                              SeededRng& rng) {
  if (samples < 0) throw ValidationError("sampled_ensemble_averages: samples must be >= 0");
  const Spectrum support = support_of(inst.system_state());
  if (K < support.size()) {
    throw ValidationError("sampled_ensemble_averages: K must be at least the rank (" +
                          std::to_string(support.size()) + ") of the system state");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    SeededRng sub = rng.substream(static_cast<std::uint64_t>(s));
    const RightUnitary t = random_right_unitary(support.size(), K, sub);
    out.push_back(ensemble_average(inst, decompose_from_T(support, t)));
  }
  return out;
}

double brute_force_entpower(const Dqc1Instance& inst, int samples, Index K, SeededRng& rng,
                            bool include_fourier) {
  if (samples < 1) throw ValidationError("brute_force_entpower: samples must be >= 1");
  double best = -std::numeric_limits<double>::infinity();
  if (include_fourier && inst.maximally_mixed_system()) {
    best = ensemble_average(inst, fourier_ensemble(inst.unitary()));
  }
  for (double v : sampled_ensemble_averages(inst, samples, K, rng)) best = std::max(best, v);
  return best;
}

double brute_force_min_mixing(const ControlQubit& control, int samples, Index K,
                              SeededRng& rng, bool include_analytic) {
  if (samples < 1 || K < 2) {
    throw ValidationError("brute_force_min_mixing: need samples >= 1 and K >= 2");
  }
  double best = std::numeric_limits<double>::infinity();
  if (include_analytic) {
    best = mixing_factor(branch_coefficients(control, optimal_control_decomposition(control)));
  }
  for (int s = 0; s < samples; ++s) {
    SeededRng sub = rng.substream(static_cast<std::uint64_t>(s));
    best = std::min(best, mixing_factor(branch_coefficients(control,
                                                            random_right_unitary(2, K, sub))));
  }
  return best;
}

}  // namespace dqc1
