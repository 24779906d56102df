#include "dqc1/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

namespace dqc1 {

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

ComplexMatrix identity(Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

ComplexMatrix hadamard() {
  const double s = 1.0 / std::numbers::sqrt2;
  ComplexMatrix m(2, 2);
  m << s, s, s, -s;
  return m;
}

bool is_square(const ComplexMatrix& a) { return a.rows() == a.cols() && a.rows() > 0; }

bool is_hermitian(const ComplexMatrix& a, double tol) {
  return is_square(a) && max_abs(a - a.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& a, double tol) {
  return is_square(a) && max_abs(a * a.adjoint() - identity(a.rows())) <= tol;
}

bool is_density(const ComplexMatrix& a, double tol) {
  if (!is_hermitian(a, tol)) return false;
  if (std::abs(a.trace() - 1.0) > tol) return false;
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

bool all_finite(const ComplexMatrix& a) {
  return a.real().allFinite() && a.imag().allFinite();
}

int log2_exact(Index dim) {
  if (dim <= 0) return -1;
  int k = 0;
  while ((Index{1} << k) < dim) ++k;
  return (Index{1} << k) == dim ? k : -1;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, Index max_dim) {
  if (!is_square(a) || !is_square(b)) {
    throw ValidationError("kron: both factors must be square");
  }
  const Index d = a.rows() * b.rows();
  if (d > max_dim) {
    throw ValidationError("kron: dimension " + std::to_string(d) +
                          " exceeds maximum " + std::to_string(max_dim));
  }
  const Index nb = b.rows();
  ComplexMatrix out(d, d);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * nb, j * nb, nb, nb) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem keep,
                            Index control_dim, Index system_dim) {
  if (control_dim <= 0 || system_dim <= 0 || !is_square(rho) ||
      rho.rows() != control_dim * system_dim) {
    throw ValidationError("partial_trace: matrix dimension does not match " +
                          std::to_string(control_dim) + "x" +
                          std::to_string(system_dim));
  }
  if (keep == Subsystem::control) {
    ComplexMatrix out = ComplexMatrix::Zero(control_dim, control_dim);
    for (Index a = 0; a < control_dim; ++a) {
      for (Index b = 0; b < control_dim; ++b) {
        out(a, b) = rho.block(a * system_dim, b * system_dim, system_dim, system_dim).trace();
      }
    }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(system_dim, system_dim);
  for (Index a = 0; a < control_dim; ++a) {
    out += rho.block(a * system_dim, a * system_dim, system_dim, system_dim);
  }
  return out;
}

Spectrum eig_hermitian(const ComplexMatrix& a, double tol) {
  if (!is_square(a)) throw ValidationError("eig_hermitian: matrix must be square");
  if (!is_hermitian(a, tol * std::max<double>(1.0, static_cast<double>(a.rows())))) {
    throw ValidationError("eig_hermitian: matrix is not Hermitian");
  }
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: eigensolver did not converge");
  }
  const Index n = a.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const auto& w = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return w(i) > w(j); });

  Spectrum s{ComplexVector(n), ComplexMatrix(n, n)};
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    s.eigenvalues(k) = w(src);
    s.eigenvectors.col(k) = es.eigenvectors().col(src);
  }
  return s;
}

Spectrum eig_unitary(const ComplexMatrix& u, double tol) {
  if (!is_unitary(u, tol)) throw ValidationError("eig_unitary: matrix is not unitary");
  // For a normal matrix the complex Schur form is diagonal up to roundoff, so
  // the Schur vectors are an orthonormal eigenbasis even when eigenvalues are
  // degenerate.
  Eigen::ComplexSchur<ComplexMatrix> schur(u);
  if (schur.info() != Eigen::Success) {
    throw std::runtime_error("eig_unitary: Schur decomposition did not converge");
  }
  const ComplexMatrix& t = schur.matrixT();
  const ComplexMatrix& q = schur.matrixU();
  const Index n = u.rows();

  auto phase = [](Complex z) {
    double p = std::arg(z);
    return p < 0.0 ? p + 2.0 * std::numbers::pi : p;
  };
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return phase(t(i, i)) < phase(t(j, j)); });

  Spectrum s{ComplexVector(n), ComplexMatrix(n, n)};
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    const Complex lambda = t(src, src);
    s.eigenvalues(k) = lambda;
    s.eigenvectors.col(k) = q.col(src);
  }
  return s;
}

double trace_sqrt_product(const ComplexMatrix& u, const ComplexMatrix& rho) {
  if (!is_unitary(u, tol::kSpectral)) {
    throw ValidationError("trace_sqrt_product: U is not unitary");
  }
  if (!is_density(rho, tol::kSpectral) || rho.rows() != u.rows()) {
    throw ValidationError("trace_sqrt_product: rho is not a density matrix of matching size");
  }
  const ComplexMatrix product = (u * rho * u.adjoint()) * rho;
  Eigen::ComplexEigenSolver<ComplexMatrix> es(product, false);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("trace_sqrt_product: eigensolver did not converge");
  }
  double sum = 0.0;
  for (Index k = 0; k < es.eigenvalues().size(); ++k) {
    const Complex mu = es.eigenvalues()(k);
    if (mu.real() < -tol::kTheorem || std::abs(mu.imag()) > tol::kTheorem) {
      throw ValidationError("trace_sqrt_product: product has an eigenvalue off the "
                            "nonnegative axis; inputs are inconsistent");
    }
    sum += std::sqrt(std::max(0.0, mu.real()));
  }
  return sum;
}

RightUnitary::RightUnitary(ComplexMatrix t, double tol) : t_(std::move(t)) {
  if (t_.rows() == 0 || t_.cols() < t_.rows()) {
    throw ValidationError("RightUnitary: need 0 < rows <= cols");
  }
  if (max_abs(t_ * t_.adjoint() - identity(t_.rows())) > tol) {
    throw ValidationError("RightUnitary: rows are not orthonormal");
  }
}

}  // namespace dqc1
