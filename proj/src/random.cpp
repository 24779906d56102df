#include "dqc1/random.hpp"

#include <cmath>

namespace dqc1 {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t a = mix64(seed);
  const std::uint64_t b = mix64(a ^ mix64(stream + 0x632be59bd9b4e019ULL));
  return std::seed_seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                       static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
}

}  // namespace

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  auto seq = make_seed_seq(seed, stream);
  engine_.seed(seq);
}

SeededRng SeededRng::substream(std::uint64_t index) const {
  return SeededRng(mix64(seed_ ^ mix64(stream_)), index);
}

double SeededRng::uniform() { return uniform_(engine_); }

double SeededRng::normal() { return normal_(engine_); }

Complex SeededRng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * std::sqrt(0.5);
}

ComplexMatrix ginibre(Index rows, Index cols, SeededRng& rng) {
  ComplexMatrix g(rows, cols);
  // Fill row-major so draw order does not depend on Eigen's storage order.
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  }
  return g;
}

ComplexMatrix haar_unitary(Index dim, SeededRng& rng) {
  if (dim < 1) throw ValidationError("haar_unitary: dim must be positive");
  const ComplexMatrix z = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * identity(dim);
  const ComplexMatrix& r = qr.matrixQR();
  for (Index k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    q.col(k) *= mag > 0.0 ? d / mag : Complex(1.0);
  }
  return q;
}

ComplexMatrix random_density(Index dim, Index rank, SeededRng& rng) {
  if (dim < 1 || rank < 1 || rank > dim) {
    throw ValidationError("random_density: need 1 <= rank <= dim");
  }
  const ComplexMatrix g = ginibre(dim, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return rho;
}

RightUnitary random_right_unitary(Index rows, Index cols, SeededRng& rng) {
  if (rows < 1 || cols < rows) {
    throw ValidationError("random_right_unitary: need 1 <= rows <= cols");
  }
  return RightUnitary(haar_unitary(cols, rng).topRows(rows), tol::kConstruction);
}

}  // namespace dqc1
