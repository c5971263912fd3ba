#include "operon/state_functional.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace operon {

StateFunctional::StateFunctional(ComplexMatrix density, std::string label)
    : density_(std::move(density)), label_(std::move(label)) {
  if (density_.rows() != density_.cols() || density_.rows() == 0) {
    throw std::invalid_argument("StateFunctional: density must be square and nonempty");
  }
  const double scale = std::max(1.0, density_.norm());
  if ((density_ - density_.adjoint()).norm() > tol::kEquality * scale) {
    throw std::invalid_argument("StateFunctional: density is not Hermitian");
  }
  const double tr = density_.trace().real();
  if (std::abs(tr - 1.0) > tol::kEquality || std::abs(density_.trace().imag()) > tol::kEquality) {
    throw std::invalid_argument("StateFunctional: trace must be 1");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(density_, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::invalid_argument("StateFunctional: eigensolver failed on density");
  }
  if (solver.eigenvalues().minCoeff() < -tol::kPsdFloor) {
    throw std::invalid_argument("StateFunctional: density has a negative eigenvalue");
  }
}

Complex StateFunctional::operator()(const ComplexMatrix& observable) const {
  if (observable.rows() != density_.rows() || observable.cols() != density_.cols()) {
    throw std::invalid_argument("StateFunctional: observable dimension mismatch");
  }
  return (density_ * observable).trace();
}

Complex expectation(const StateFunctional& rho, const ComplexMatrix& z) { return rho(z); }

StateFunctional vector_state(const ComplexVector& x, std::string label) {
  const double n = x.norm();
  if (n < 1e-14) {
    throw std::invalid_argument("vector_state: vector is (numerically) zero");
  }
  const ComplexVector u = x / n;
  return StateFunctional(u * u.adjoint(), std::move(label));
}

StateFunctional reduced_state(const StateFunctional& rho, Dims dims, Factor keep) {
  ComplexMatrix red = partial_trace(rho.density(), dims, keep);
  // Partial trace preserves Hermiticity, positivity and trace up to roundoff;
  // symmetrize so validation never trips on the last bit.
  red = (red + ComplexMatrix(red.adjoint())) / 2.0;
  return StateFunctional(red, rho.label());
}

}  // namespace operon
