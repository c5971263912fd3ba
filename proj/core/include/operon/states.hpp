#pragma once

#include <utility>
#include <vector>

#include "operon/algebra.hpp"
#include "operon/state_functional.hpp"

namespace operon {

struct StateDistance {
  double value = 0;
  // True when the value is only a certified lower bound (general subalgebra
  // case); false when it is the exact restricted-functional norm distance.
  bool lower_bound = false;
};

// Norm distance of the restrictions of two states to the algebra r:
//  - r = B(H): trace norm of the density difference (exact);
//  - r a tensor factor: trace norm of the partial-trace difference (exact);
//  - otherwise: sup over the unit-operator-norm Hermitian basis of span(r),
//    flagged lower_bound = true.
StateDistance norm_distance(const StateFunctional& rho1, const StateFunctional& rho2,
                            const OperatorAlgebra& r);

// Convex decomposition of a bipartite density into product terms.
struct ProductCertificate {
  Dims dims;
  std::vector<double> weights;  // positive, summing to one
  std::vector<std::pair<ComplexMatrix, ComplexMatrix>> factors;  // (on A, on B)

  ComplexMatrix reconstruct() const;  // sum_k w_k rho_A^k (x) rho_B^k
  double reconstruction_residual(const ComplexMatrix& density) const;  // Frobenius
  int terms() const { return static_cast<int>(weights.size()); }
};

// rho(X Y) = rho(X) rho(Y) within tol for all basis pairs X in ra, Y in rb.
// Throws std::invalid_argument if the two algebras fail to commute elementwise.
bool is_product_state(const StateFunctional& rho, const OperatorAlgebra& ra,
                      const OperatorAlgebra& rb, double tol = tol::kProductState);

}  // namespace operon
