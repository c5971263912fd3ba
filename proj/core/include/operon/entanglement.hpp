#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "operon/operations.hpp"
#include "operon/states.hpp"

namespace operon {

// Entropy of entanglement of a bipartite vector in nats: -sum c^2 ln c^2 over
// the Schmidt coefficients of x normalized to a unit vector.
double entanglement_entropy(const ComplexVector& x, Dims dims);

enum class Separability { separable, entangled, inconclusive };

struct EntanglementWitness {
  double min_pt_eigenvalue = 0;  // most negative partial-transpose eigenvalue
  ComplexVector eigenvector;     // its eigenvector
};

// Decomposition valid for commuting algebra pairs without tensor structure:
// weights plus ambient component densities, each a product state across the
// pair, agreeing with the certified state on the generated joint algebra.
struct CommutingPairCertificate {
  std::vector<double> weights;
  std::vector<ComplexMatrix> components;
  double agreement_residual = 0;  // max |sum_m w_m rho_m(XY) - rho(XY)| over basis pairs
};

struct SeparabilityVerdict {
  Separability status = Separability::inconclusive;
  std::string method;  // which dispatch produced the verdict
  Dims dims;           // set when a tensor split applies
  std::optional<ProductCertificate> certificate;
  std::optional<CommutingPairCertificate> pair_certificate;
  std::optional<EntanglementWitness> witness;
  std::optional<double> best_distance;  // inconclusive: best approximation found
};

// Partial-transpose test. Exact for 2x2, 2x3 and 3x2 and for pure states;
// min eigenvalue below -1e-9 is an entanglement witness. In the exact domain
// a nonnegative spectrum yields a separable verdict whose certificate comes
// from separable_approximation; elsewhere it is inconclusive.
SeparabilityVerdict ppt_verdict(const StateFunctional& rho, Dims dims);

struct FrankWolfeOptions {
  int budget = 500;          // outer iterations
  int restarts = 8;          // random restarts per linear subproblem
  int power_iterations = 20; // alternating steps per restart
  std::uint64_t seed = 0x0b5eab1eULL;
  double target = tol::kSeparableCertificate;  // early-stop distance
};

struct SeparableApproximation {
  double distance = 0;  // Frobenius distance to the returned mixture
  ProductCertificate certificate;
  int iterations = 0;
};

// Conditional-gradient approximation of rho by a convex mixture of pure
// product states: each step solves the linear subproblem by alternating
// rank-one power iterations, adds the best product state found, then
// re-optimizes all mixture weights on the simplex. The distance is monotone
// nonincreasing in the budget and always an upper bound on the true distance
// to the separable set.
SeparableApproximation separable_approximation(const StateFunctional& rho, Dims dims,
                                               const FrankWolfeOptions& opts = {});

// Entanglement of rho across a commuting pair of algebras:
//  - either side abelian: separable constructively (joint diagonalization of
//    the abelian side, point-mass decomposition);
//  - pair detected as complementary full tensor factors: pure states decide
//    by Schmidt rank; mixed states by PPT, then separable_approximation;
//  - otherwise inconclusive with diagnostics.
// Throws std::invalid_argument if the algebras fail to commute.
SeparabilityVerdict decide_entanglement(const StateFunctional& rho,
                                        const OperatorAlgebra& ra,
                                        const OperatorAlgebra& rb);

struct DisentangleProtocol {
  KrausOperation operation;   // nonselective, local to factor A
  StateFunctional output;
  SeparabilityVerdict verdict;  // separable with an explicit certificate
};

// Nonselective measurement of mutually orthogonal rank-one projections on
// factor A (they must sum to I_A): output is the blockwise-collapsed state,
// separable with at most dA certificate terms.
DisentangleProtocol projective_disentangler(const StateFunctional& rho,
                                            const std::vector<ComplexMatrix>& projections_a,
                                            Dims dims);

// Measures a nondegenerate factor-A observable (Hermitian, eigenvalue gaps
// above 1e-8, spectrum excluding zero); delegates to projective_disentangler
// on its eigenprojections. Degeneracy is rejected with the offending gap.
DisentangleProtocol nondegenerate_disentangler(const StateFunctional& rho,
                                               const ComplexMatrix& observable_a,
                                               Dims dims);

// Nonselective channel that discards factor A and installs the target there:
// output is always target (x) tr_A(input), and T(X (x) I) = tr(target X) I.
// The label records the construction.
KrausOperation local_preparation_channel(const StateFunctional& target_a, Dims dims);

struct CertificateTransport {
  double acceptance_probability = 0;
  std::optional<ProductCertificate> certificate;  // empty on a null outcome
};

// Pushes a product certificate through a local operation given by factor-side
// Kraus operators: each term updates on the acted factor and reweights by its
// acceptance probability; the other factor is untouched. The transported
// certificate reconstructs the updated density exactly (no entanglement is
// created by local operations).
CertificateTransport transport_certificate(const ProductCertificate& cert,
                                           const std::vector<ComplexMatrix>& kraus_factor,
                                           Factor which);

}  // namespace operon
