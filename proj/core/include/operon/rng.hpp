#pragma once

#include <cstdint>
#include <vector>

#include "operon/numerics.hpp"

namespace operon {

// Deterministic random stream: splitmix64 state, Box-Muller gaussians.
// Substreams are derived from the original seed and a counter, never from
// consumed state, so per-trial streams are identical no matter which thread
// runs the trial or in which order.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  RandomStream substream(std::uint64_t index) const;

  std::uint64_t next_u64();
  // Uniform in [0, 1).
  double uniform();
  // Integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi);
  double gaussian();
  // Standard complex gaussian, E|z|^2 = 1.
  Complex complex_gaussian();

  // Unit vector, Haar distributed (normalized complex gaussian vector).
  ComplexVector haar_vector(int dim);
  ComplexMatrix gaussian_matrix(int rows, int cols);
  // Full-rank density operator G G* / tr(G G*).
  ComplexMatrix random_density(int dim);
  // Haar unitary via phase-fixed QR of a gaussian matrix.
  ComplexMatrix random_unitary(int dim);
  // Strictly positive weights summing to one.
  std::vector<double> random_weights(int count);

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace operon
