#include "operon/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace operon {

namespace {

// splitmix64 step (Steele, Lea, Flood 2014): the standard 64-bit mixer.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), state_(mix64(seed)) {}

RandomStream RandomStream::substream(std::uint64_t index) const {
  // Derived from the original seed, not the consumed state, so substream(i)
  // is the same stream no matter how much the parent has been used.
  return RandomStream(mix64(seed_ ^ mix64(index + 0x517cc1b727220a95ULL)));
}

std::uint64_t RandomStream::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int RandomStream::uniform_int(int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

double RandomStream::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 kept away from zero so the log is finite.
  double u1 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Complex RandomStream::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im) / std::sqrt(2.0);
}

ComplexVector RandomStream::haar_vector(int dim) {
  if (dim <= 0) throw std::invalid_argument("haar_vector: dim must be positive");
  ComplexVector v(dim);
  do {
    for (int i = 0; i < dim; ++i) v(i) = complex_gaussian();
  } while (v.norm() == 0.0);
  return v / v.norm();
}

ComplexMatrix RandomStream::gaussian_matrix(int rows, int cols) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("gaussian_matrix: bad shape");
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = complex_gaussian();
  return m;
}

ComplexMatrix RandomStream::random_density(int dim) {
  const ComplexMatrix g = gaussian_matrix(dim, dim);
  ComplexMatrix d = g * g.adjoint();
  d /= d.trace().real();
  // Symmetrize away the last bits of roundoff so validation never trips.
  return (d + ComplexMatrix(d.adjoint())) / 2.0;
}

ComplexMatrix RandomStream::random_unitary(int dim) {
  const ComplexMatrix g = gaussian_matrix(dim, dim);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix column phases by the R diagonal so the distribution is Haar.
  for (int j = 0; j < dim; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return q;
}

std::vector<double> RandomStream::random_weights(int count) {
  if (count <= 0) throw std::invalid_argument("random_weights: count must be positive");
  std::vector<double> w(count);
  double sum = 0.0;
  for (int i = 0; i < count; ++i) {
    double u = uniform();
    if (u <= 0.0) u = 0x1.0p-53;
    w[i] = -std::log(u);  // flat Dirichlet via exponentials
    sum += w[i];
  }
  for (double& wi : w) wi /= sum;
  return w;
}

}  // namespace operon
