#include "operon/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace operon {

namespace {

void require_commuting_pair(const OperatorAlgebra& ra, const OperatorAlgebra& rb,
                            const char* who) {
  if (ra.ambient_dim != rb.ambient_dim) {
    throw std::invalid_argument(std::string(who) + ": algebras live on different spaces");
  }
  for (const ComplexMatrix& a : ra.basis)
    for (const ComplexMatrix& b : rb.basis)
      if ((a * b - b * a).norm() > tol::kEquality) {
        throw std::invalid_argument(std::string(who) + ": algebras do not commute");
      }
}

// Hermitian spanning family of span(r), each normalized to unit operator norm.
std::vector<ComplexMatrix> hermitian_unit_basis(const OperatorAlgebra& r) {
  std::vector<ComplexMatrix> out;
  const Complex i_unit(0.0, 1.0);
  for (const ComplexMatrix& b : r.basis) {
    const ComplexMatrix h = (b + ComplexMatrix(b.adjoint())) / 2.0;
    const ComplexMatrix k = (b - ComplexMatrix(b.adjoint())) / (2.0 * i_unit);
    for (const ComplexMatrix& cand : {h, k}) {
      const double norm = operator_norm(cand);
      if (norm > 1e-14) out.push_back(cand / norm);
    }
  }
  return out;
}

}  // namespace

StateDistance norm_distance(const StateFunctional& rho1, const StateFunctional& rho2,
                            const OperatorAlgebra& r) {
  if (rho1.dim() != r.ambient_dim || rho2.dim() != r.ambient_dim) {
    throw std::invalid_argument("norm_distance: state dimension does not match ambient_dim");
  }
  const ComplexMatrix diff = rho1.density() - rho2.density();

  if (r.dimension() == r.ambient_dim * r.ambient_dim) {
    return {trace_norm(diff), false};
  }
  if (auto form = tensor_factor_form(r)) {
    const auto [dims, which] = *form;
    return {trace_norm(partial_trace(diff, dims, which)), false};
  }
  // General subalgebra: certified lower bound via the restricted functional's
  // values on unit-operator-norm Hermitian elements.
  double best = 0.0;
  for (const ComplexMatrix& y : hermitian_unit_basis(r)) {
    best = std::max(best, std::abs((diff * y).trace().real()));
  }
  return {best, true};
}

ComplexMatrix ProductCertificate::reconstruct() const {
  if (weights.size() != factors.size()) {
    throw std::invalid_argument("ProductCertificate: weights/factors length mismatch");
  }
  ComplexMatrix out = ComplexMatrix::Zero(dims.total(), dims.total());
  for (std::size_t k = 0; k < weights.size(); ++k) {
    out += weights[k] * tensor_product(factors[k].first, factors[k].second);
  }
  return out;
}

double ProductCertificate::reconstruction_residual(const ComplexMatrix& density) const {
  return (reconstruct() - density).norm();
}

bool is_product_state(const StateFunctional& rho, const OperatorAlgebra& ra,
                      const OperatorAlgebra& rb, double tol) {
  require_commuting_pair(ra, rb, "is_product_state");
  if (rho.dim() != ra.ambient_dim) {
    throw std::invalid_argument("is_product_state: state dimension does not match algebras");
  }
  for (const ComplexMatrix& a : ra.basis) {
    const Complex ea = rho(a);
    for (const ComplexMatrix& b : rb.basis) {
      if (std::abs(rho(ComplexMatrix(a * b)) - ea * rho(b)) > tol) return false;
    }
  }
  return true;
}

}  // namespace operon
