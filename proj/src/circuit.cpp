#include "dqc1/circuit.hpp"

#include <cmath>
#include <numbers>

namespace dqc1 {

ControlQubit ControlQubit::polarized(double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha > 1.0) {
    throw ValidationError("control polarization alpha must lie in [0, 1]");
  }
  return ControlQubit(Mode::alpha, {0.0, 0.0, alpha});
}

ControlQubit ControlQubit::bloch(const BlochVector& p) {
  for (double c : p) {
    if (!std::isfinite(c)) throw ValidationError("Bloch vector must be finite");
  }
  if (std::hypot(p[0], p[1], p[2]) > 1.0 + tol::kConstruction) {
    throw ValidationError("Bloch vector must have norm <= 1");
  }
  return ControlQubit(Mode::bloch, p);
}

double ControlQubit::gamma() const { return std::hypot(p_[0], p_[1], p_[2]); }

bool ControlQubit::is_pure(double tol) const { return gamma() >= 1.0 - tol; }

ComplexMatrix ControlQubit::density() const {
  return 0.5 * (identity(2) + p_[0] * pauli_x() + p_[1] * pauli_y() + p_[2] * pauli_z());
}

int qubit_count(const ComplexMatrix& u) {
  if (!is_square(u)) throw ValidationError("unitary must be square");
  const int n = log2_exact(u.rows());
  if (n < 1 || n > kMaxQubits) {
    throw ValidationError("unitary dimension must be 2^n with 1 <= n <= " +
                          std::to_string(kMaxQubits) + ", got " + std::to_string(u.rows()));
  }
  return n;
}

Dqc1Instance::Dqc1Instance(ComplexMatrix unitary, ControlQubit control,
                           std::optional<ComplexMatrix> system_state)
    : n_(qubit_count(unitary)), unitary_(std::move(unitary)), control_(control) {
  if (!is_unitary(unitary_, tol::kSpectral)) {
    throw ValidationError("instance unitary is not unitary within 1e-10");
  }
  const Index d = unitary_.rows();
  if (system_state) {
    if (system_state->rows() != d || !is_density(*system_state, tol::kSpectral)) {
      throw ValidationError("system state must be a density matrix of dimension " +
                            std::to_string(d));
    }
    system_state_ = std::move(*system_state);
  } else {
    system_state_ = identity(d) / static_cast<double>(d);
  }
}

bool Dqc1Instance::maximally_mixed_system(double tol) const {
  const Index d = system_dim();
  return max_abs(system_state_ - identity(d) / static_cast<double>(d)) <= tol;
}

Complex normalized_trace(const ComplexMatrix& u) {
  qubit_count(u);
  return u.trace() / static_cast<double>(u.rows());
}

ComplexMatrix initial_state(const Dqc1Instance& inst) {
  return kron(inst.control().density(), inst.system_state(), Index{2} << kMaxQubits);
}

ComplexMatrix controlled_u(const ComplexMatrix& u) {
  qubit_count(u);
  if (!is_unitary(u, tol::kSpectral)) throw ValidationError("controlled_u: U is not unitary");
  const Index d = u.rows();
  ComplexMatrix out = ComplexMatrix::Zero(2 * d, 2 * d);
  out.topLeftCorner(d, d) = identity(d);
  out.bottomRightCorner(d, d) = u;
  return out;
}

ComplexMatrix circuit_unitary(const ComplexMatrix& u) {
  const Index d = u.rows();
  return controlled_u(u) * kron(hadamard(), identity(d), 2 * d);
}

ComplexMatrix evolve(const Dqc1Instance& inst) {
  const ComplexMatrix v = circuit_unitary(inst.unitary());
  ComplexMatrix out = v * initial_state(inst) * v.adjoint();
  return out;
}

ComplexMatrix final_state_closed(double alpha, const ComplexMatrix& u) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("final_state_closed: alpha must lie in [0, 1]");
  }
  const Index d = u.rows();
  qubit_count(u);
  ComplexMatrix out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = identity(d);
  out.bottomRightCorner(d, d) = identity(d);
  out.topRightCorner(d, d) = alpha * u.adjoint();
  out.bottomLeftCorner(d, d) = alpha * u;
  return out / static_cast<double>(2 * d);
}

namespace {

void require_unit(const ComplexVector& phi, const ComplexMatrix& u, const char* who) {
  qubit_count(u);
  if (phi.size() != u.rows()) {
    throw ValidationError(std::string(who) + ": state dimension does not match U");
  }
  if (std::abs(phi.norm() - 1.0) > tol::kConstruction) {
    throw ValidationError(std::string(who) + ": state is not normalized");
  }
}

}  // namespace

ComplexVector branch_pure_state(const ComplexVector& phi, const ComplexMatrix& u) {
  require_unit(phi, u, "branch_pure_state");
  const Index d = u.rows();
  ComplexVector out(2 * d);
  out.head(d) = phi;
  out.tail(d) = u * phi;
  return out / std::numbers::sqrt2;
}

ComplexMatrix reduced_system_state(const ComplexVector& phi, const ComplexMatrix& u) {
  require_unit(phi, u, "reduced_system_state");
  const ComplexVector uphi = u * phi;
  return 0.5 * (phi * phi.adjoint() + uphi * uphi.adjoint());
}

ComplexMatrix general_final_control(const ControlQubit& control, const ComplexMatrix& rho_n,
                                    const ComplexMatrix& u) {
  if (rho_n.rows() != u.rows()) {
    throw ValidationError("general_final_control: rho_n and U dimensions differ");
  }
  const Dqc1Instance inst(u, control, rho_n);
  return partial_trace(evolve(inst), Subsystem::control, 2, inst.system_dim());
}

double linear_entropy_closed(const BlochVector& p, Complex t) {
  if (std::hypot(p[0], p[1], p[2]) > 1.0 + tol::kConstruction) {
    throw ValidationError("linear_entropy_closed: Bloch vector norm exceeds 1");
  }
  const double t2 = std::norm(t);
  if (std::sqrt(t2) > 1.0 + tol::kTheorem) {
    throw ValidationError("linear_entropy_closed: |Tr(U rho)| exceeds 1");
  }
  return 0.5 * (1.0 - p[0] * p[0] - (p[1] * p[1] + p[2] * p[2]) * t2);
}

}  // namespace dqc1
