#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "operon/numerics.hpp"
#include "operon/state_functional.hpp"

namespace operon {

// Finite-dimensional *-algebra of operators, stored as its generators plus an
// orthonormal basis of its linear span under <A,B> = tr(A* B). The span is
// closed under products and adjoints and always contains the identity.
struct OperatorAlgebra {
  int ambient_dim = 0;
  std::vector<ComplexMatrix> generators;
  std::vector<ComplexMatrix> basis;

  int dimension() const { return static_cast<int>(basis.size()); }

  // Orthogonal projection of m onto the span.
  ComplexMatrix project(const ComplexMatrix& m) const;
  // Frobenius distance from m to the span.
  double membership_residual(const ComplexMatrix& m) const;
  // Residual at most tol * max(1, ||m||_F).
  bool contains(const ComplexMatrix& m, double tol = tol::kSpanMembership) const;
};

// Smallest *-closed unital algebra containing the generators: seeds the span
// with I, the generators and their adjoints, then alternates product and
// adjoint closure until the span is stable.
OperatorAlgebra generate_algebra(std::vector<ComplexMatrix> generators, int ambient_dim);

OperatorAlgebra full_algebra(int dim);
OperatorAlgebra trivial_algebra(int dim);   // scalars
OperatorAlgebra diagonal_algebra(int dim);
// B(H_A) (x) I or I (x) B(H_B) on a bipartite space, built directly.
OperatorAlgebra factor_algebra(Dims dims, Factor which);

// All X with [X, G] = 0 for every generator G and its adjoint. Computed as an
// SVD nullspace, so the result carries an orthonormal basis; generators of the
// output are its basis elements.
OperatorAlgebra commutant(const OperatorAlgebra& r);

struct CenterDecomposition {
  OperatorAlgebra center;  // r intersect commutant(r)
  bool is_factor = false;  // center is scalars only
};
CenterDecomposition center_and_factor(const OperatorAlgebra& r);

bool is_abelian(const OperatorAlgebra& r, double tol = tol::kEquality);

// Span equality of two algebras on the same ambient space (mutual membership).
bool same_span(const OperatorAlgebra& r, const OperatorAlgebra& s,
               double tol = tol::kSpanMembership);

// x cyclic for r: the orbit {B x : B in basis} spans the ambient space.
bool is_cyclic_vector(const ComplexVector& x, const OperatorAlgebra& r);
// x separating for r: A x = 0 with A in the span forces A = 0.
bool is_separating_vector(const ComplexVector& x, const OperatorAlgebra& r);

// Identifies r as B(H_A) (x) I (Factor::A) or I (x) B(H_B) (Factor::B) for
// some factorization of the ambient dimension; nullopt if neither.
std::optional<std::pair<Dims, Factor>> tensor_factor_form(const OperatorAlgebra& r);

// Smallest projection S in r with rho(S) = 1: the projection onto the span of
// commutant-orbit vectors {B v : B in basis(r'), v in range of the density}.
ComplexMatrix support_projection(const StateFunctional& rho, const OperatorAlgebra& r);

// Orthonormal basis of {A in span(r) : rho(A* A) = 0}, via the nullspace of
// the Gram form G_jk = rho(B_j* B_k).
std::vector<ComplexMatrix> left_ideal_basis(const StateFunctional& rho,
                                            const OperatorAlgebra& r);

struct AbelianProjectionCheck {
  bool abelian = false;  // the corner {P B P} commutes
  bool atom = false;     // the corner is one-dimensional
};
// Throws std::invalid_argument unless p is a nonzero self-adjoint idempotent
// lying in span(r).
AbelianProjectionCheck is_abelian_projection(const ComplexMatrix& p,
                                             const OperatorAlgebra& r);

// Finite lattice of tensor factors; regions are sorted site-index sets and the
// region algebra is the full matrix algebra on those sites, identity elsewhere.
class LatticeNet {
 public:
  explicit LatticeNet(std::vector<int> site_dims);

  const std::vector<int>& site_dims() const { return site_dims_; }
  int total_dim() const { return total_dim_; }

  const OperatorAlgebra& region_algebra(const std::vector<int>& region) const;

 private:
  std::vector<int> site_dims_;
  int total_dim_ = 1;
  mutable std::map<std::vector<int>, OperatorAlgebra> cache_;
};

OperatorAlgebra net_algebra(const LatticeNet& net, const std::vector<int>& region);

}  // namespace operon
