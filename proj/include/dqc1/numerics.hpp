#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dqc1 {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Thrown when an input violates a documented precondition. The CLI maps
/// this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Tolerance ladder: construction checks, spectral reconstruction, theorem
// verification.
namespace tol {
inline constexpr double kConstruction = 1e-12;
inline constexpr double kSpectral = 1e-10;
inline constexpr double kTheorem = 1e-9;
}  // namespace tol

inline constexpr int kMaxQubits = 10;
inline constexpr Index kDefaultMaxKronDim = Index{1} << 12;

double max_abs(const ComplexMatrix& a);

ComplexMatrix identity(Index dim);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix hadamard();

bool is_square(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol = tol::kConstruction);
/// ‖A·A† − I‖_max ≤ tol
bool is_unitary(const ComplexMatrix& a, double tol = tol::kConstruction);
/// Hermitian, unit trace and eigenvalues ≥ −tol.
bool is_density(const ComplexMatrix& a, double tol = tol::kConstruction);
bool all_finite(const ComplexMatrix& a);

/// Returns k such that dim == 2^k, or -1.
int log2_exact(Index dim);

/// Kronecker product with `a` as the outer factor.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   Index max_dim = kDefaultMaxKronDim);

enum class Subsystem { control, system };

/// Partial trace over a (control ⊗ system) bipartition, keeping `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem keep,
                            Index control_dim, Index system_dim);

/// Eigenvalues and the matching eigenvector columns.
struct Spectrum {
  ComplexVector eigenvalues;
  ComplexMatrix eigenvectors;

  Eigen::VectorXd real_eigenvalues() const { return eigenvalues.real(); }
  Index size() const { return eigenvalues.size(); }
};

/// Hermitian eigendecomposition, eigenvalues real and sorted descending
/// (stable with respect to the solver's order).
Spectrum eig_hermitian(const ComplexMatrix& a, double tol = tol::kSpectral);

/// Eigendecomposition of a unitary with an orthonormal eigenbasis, also
/// inside degenerate eigenvalue clusters. Eigenvalues are ordered by phase
/// in [0, 2π).
Spectrum eig_unitary(const ComplexMatrix& u, double tol = tol::kSpectral);

/// Tr√((U ρ U†)·ρ), summing square roots of the product's eigenvalues.
double trace_sqrt_product(const ComplexMatrix& u, const ComplexMatrix& rho);

/// Row-orthonormal rows×cols matrix, T·T† = I.
class RightUnitary {
 public:
  explicit RightUnitary(ComplexMatrix t, double tol = tol::kSpectral);

  Index rows() const { return t_.rows(); }
  Index cols() const { return t_.cols(); }
  const ComplexMatrix& matrix() const { return t_; }
  Complex operator()(Index i, Index j) const { return t_(i, j); }

 private:
  ComplexMatrix t_;
};

}  // namespace dqc1
