#pragma once

#include <optional>
#include <string>
#include <vector>

#include "operon/algebra.hpp"
#include "operon/state_functional.hpp"

namespace operon {

// Operation in Kraus form. Heisenberg action T(Z) = sum_i K_i* Z K_i with
// 0 <= sum_i K_i* K_i <= I enforced at construction (eigenvalues within
// 1e-10 slack); the operation is nonselective when the sum is I within 1e-9.
class KrausOperation {
 public:
  explicit KrausOperation(std::vector<ComplexMatrix> kraus, std::string label = "");

  int dim() const { return dim_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  const ComplexMatrix& completeness_sum() const { return completeness_; }  // sum K* K
  bool nonselective() const { return nonselective_; }
  const std::string& label() const { return label_; }

 private:
  int dim_ = 0;
  std::vector<ComplexMatrix> kraus_;
  ComplexMatrix completeness_;
  bool nonselective_ = false;
  std::string label_;
};

// T(Z) = sum_i K_i* Z K_i. Linear, positive, T(I) <= I.
ComplexMatrix apply_heisenberg(const KrausOperation& t, const ComplexMatrix& z);

struct SchrodingerResult {
  ComplexMatrix density;  // sum_i K_i D K_i*, unnormalized
  double weight = 0;      // its trace = rho(T(I))
};
SchrodingerResult apply_schrodinger(const KrausOperation& t, const StateFunctional& rho);

struct UpdateOutcome {
  std::optional<StateFunctional> state;  // empty on a null outcome
  double acceptance_probability = 0;     // rho(T(I))
  bool null_outcome() const { return !state.has_value(); }
};
// State update rho -> rho(T(.))/rho(T(I)); acceptance probability at or below
// 1e-12 yields the null outcome.
UpdateOutcome update_state(const StateFunctional& rho, const KrausOperation& t);

// Composite operation, inner applied first: Schrodinger action is
// D -> sum_ij K_out,j K_in,i D K_in,i* K_out,j*, so the Kraus list is
// {K_out,j K_in,i} and the Heisenberg action satisfies
// compose(outer, inner)(Z) = inner(outer(Z)).
KrausOperation compose(const KrausOperation& outer, const KrausOperation& inner);

struct MixtureDecomposition {
  std::vector<double> weights;            // lambda_i = rho(K_i* K_i)/rho(T(I))
  std::vector<StateFunctional> components;  // per-Kraus updated states
  std::vector<int> kraus_indices;         // surviving (non-null) terms
};
// Decomposes the updated state as a finite mixture over single-Kraus updates.
// Throws std::invalid_argument when rho(T(I)) is a null outcome.
MixtureDecomposition mixture_decomposition(const KrausOperation& t,
                                           const StateFunctional& rho);

struct LocalityReport {
  bool local = false;            // every Kraus operator lies in span(r)
  double kraus_span_residual = 0;  // max Frobenius distance of a K_i to span(r)
  // max over the unit-norm Hermitian basis Y of commutant(r) of
  // ||sum_i [Y,K_i]*[Y,K_i]||_F = ||T(Y^2) - T(Y)Y - YT(Y) + YT(I)Y||_F.
  double commutator_residual = 0;
  // max over the same Y of ||T(Y) - T(I) Y||_F.
  double module_residual = 0;
};
// The three fields agree: local iff both residual diagnostics vanish (within
// span/diagnostic tolerance 1e-9).
LocalityReport is_local_to(const KrausOperation& t, const OperatorAlgebra& r);

struct FactorizationCheck {
  bool factorizes = false;
  double max_residual = 0;  // max ||T(X Y) - T(X) Y||_F over basis pairs
};
// X ranges over basis(ra), Y over basis(rb); throws if ra, rb fail to commute.
FactorizationCheck factorization_check(const KrausOperation& t,
                                       const OperatorAlgebra& ra,
                                       const OperatorAlgebra& rb);

// Lift factor-side Kraus operators to the bipartite space (K (x) I or I (x) K).
KrausOperation lift_local(const std::vector<ComplexMatrix>& kraus_factor, Dims dims,
                          Factor where = Factor::A, std::string label = "");

}  // namespace operon
