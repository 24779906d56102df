#pragma once

#include <cstdint>
#include <random>

#include "dqc1/numerics.hpp"

namespace dqc1 {

/// Deterministic random stream identified by (master seed, stream index).
/// Not thread-safe; give every concurrent task its own stream.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed = 0, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Independent child stream, keyed on this stream and `index`.
  SeededRng substream(std::uint64_t index) const;

  double uniform();
  double normal();
  /// Complex normal with E|z|² = 1.
  Complex complex_normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// SplitMix64 finalizer; used to derive stream keys.
std::uint64_t mix64(std::uint64_t x);

ComplexMatrix ginibre(Index rows, Index cols, SeededRng& rng);

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal folded back into Q.
ComplexMatrix haar_unitary(Index dim, SeededRng& rng);

/// Random density matrix G·G†/Tr with G a dim×rank Ginibre matrix.
ComplexMatrix random_density(Index dim, Index rank, SeededRng& rng);

/// First `rows` rows of a Haar unitary of size `cols`.
RightUnitary random_right_unitary(Index rows, Index cols, SeededRng& rng);

}  // namespace dqc1
