#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "operon/entanglement.hpp"
#include "operon/rng.hpp"

using namespace operon;

namespace {

ComplexVector singlet() {
  ComplexVector x = ComplexVector::Zero(4);
  x(1) = 1.0 / std::sqrt(2.0);
  x(2) = -1.0 / std::sqrt(2.0);
  return x;
}

ComplexMatrix werner(double p) {
  const ComplexVector s = singlet();
  return p * (s * s.adjoint()) + (1.0 - p) * ComplexMatrix::Identity(4, 4) / 4.0;
}

// Random mixture of product states: separable by construction.
ComplexMatrix random_separable(RandomStream& stream, Dims dims, int terms) {
  const std::vector<double> w = stream.random_weights(terms);
  ComplexMatrix rho = ComplexMatrix::Zero(dims.total(), dims.total());
  for (int k = 0; k < terms; ++k) {
    rho += w[k] * tensor_product(stream.random_density(dims.a), stream.random_density(dims.b));
  }
  return rho;
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

}  // namespace

TEST_SUITE("entanglement") {

TEST_CASE("entropy of entanglement in nats") {
  const Dims dims{2, 2};
  // Two equal Schmidt coefficients: exactly ln 2, by either route.
  CHECK(std::abs(entanglement_entropy(singlet(), dims) - std::log(2.0)) <= 1e-12);

  // Independent route: von Neumann entropy of the reduced density.
  const ComplexMatrix reduced = partial_trace(projector(singlet()), dims, Factor::A);
  const HermitianEigenSystem eig = hermitian_eig(reduced);
  double von_neumann = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) > 1e-15) {
      von_neumann -= eig.eigenvalues(i) * std::log(eig.eigenvalues(i));
    }
  }
  CHECK(std::abs(von_neumann - std::log(2.0)) <= 1e-12);

  // Product vectors carry exactly zero.
  ComplexVector product = ComplexVector::Zero(4);
  product(0) = 1.0;
  CHECK(entanglement_entropy(product, dims) == 0.0);

  // Skewed coefficients: the frozen binary-entropy value.
  ComplexVector skew = ComplexVector::Zero(4);
  skew(0) = std::sqrt(0.9);
  skew(3) = std::sqrt(0.1);
  const double expected = -0.9 * std::log(0.9) - 0.1 * std::log(0.1);
  CHECK(entanglement_entropy(skew, dims) == doctest::Approx(expected).epsilon(1e-13));

  // Normalization is internal: scaling the vector changes nothing.
  CHECK(entanglement_entropy(ComplexVector(3.0 * skew), dims) ==
        doctest::Approx(expected).epsilon(1e-13));
  CHECK_THROWS_AS(entanglement_entropy(ComplexVector::Zero(4), dims), std::invalid_argument);
}

TEST_CASE("werner family: frozen partial-transpose spectrum and verdicts") {
  const Dims dims{2, 2};
  for (double p : {0.0, 0.2, 0.3, 0.4, 0.7, 1.0}) {
    const ComplexMatrix rho = werner(p);
    const HermitianEigenSystem pt =
        hermitian_eig(partial_transpose(rho, dims, Factor::B));
    CHECK(std::abs(pt.eigenvalues(0) - (1.0 - 3.0 * p) / 4.0) <= 1e-10);

    const SeparabilityVerdict verdict = ppt_verdict(StateFunctional(rho), dims);
    if (p > 1.0 / 3.0) {
      CHECK(verdict.status == Separability::entangled);
      REQUIRE(verdict.witness.has_value());
      CHECK(std::abs(verdict.witness->min_pt_eigenvalue - (1.0 - 3.0 * p) / 4.0) <= 1e-10);
    } else {
      CHECK(verdict.status == Separability::separable);
      REQUIRE(verdict.certificate.has_value());
      CHECK(verdict.certificate->reconstruction_residual(rho) <= tol::kSeparableCertificate);
    }
  }
}

TEST_CASE("separable approximation: frozen singlet distance and certified mixtures") {
  const Dims dims{2, 2};
  // The closest separable state to the singlet sits at Frobenius distance
  // 1/sqrt(3); the optimizer must land there, not merely below.
  const SeparableApproximation far =
      separable_approximation(StateFunctional(projector(singlet())), dims);
  CHECK(far.distance == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-6));
  CHECK(far.distance >= 0.3);

  RandomStream stream(107);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix rho = random_separable(stream, dims, 3);
    const SeparableApproximation approx =
        separable_approximation(StateFunctional(rho), dims);
    CHECK(approx.distance <= tol::kSeparableCertificate);
    CHECK(approx.certificate.reconstruction_residual(rho) ==
          doctest::Approx(approx.distance).epsilon(1e-9));
    double weight_sum = 0.0;
    for (double w : approx.certificate.weights) {
      CHECK(w > 0.0);
      weight_sum += w;
    }
    CHECK(weight_sum == doctest::Approx(1.0).epsilon(1e-9));
    // Certificate factors are genuine states.
    for (const auto& [on_a, on_b] : approx.certificate.factors) {
      CHECK(hermitian_eig(on_a).eigenvalues(0) >= -1e-10);
      CHECK(on_a.trace().real() == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(hermitian_eig(on_b).eigenvalues(0) >= -1e-10);
      CHECK(on_b.trace().real() == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("ppt verdicts outside the exact domain stay honest") {
  const Dims dims{3, 3};
  RandomStream stream(109);
  // Separable mixed state at 3x3: nonnegative partial transpose, but PPT alone
  // cannot certify there, so the verdict is inconclusive.
  const ComplexMatrix rho = random_separable(stream, dims, 4);
  const SeparabilityVerdict verdict = ppt_verdict(StateFunctional(rho), dims);
  CHECK(verdict.status == Separability::inconclusive);

  // Pure states are decided in any dimension.
  const ComplexVector x = stream.haar_vector(9);
  const SeparabilityVerdict pure = ppt_verdict(vector_state(x), dims);
  CHECK(pure.status == Separability::entangled);
  ComplexVector prod = ComplexVector::Zero(9);
  prod(0) = 1.0;
  const SeparabilityVerdict pure_prod = ppt_verdict(vector_state(prod), dims);
  CHECK(pure_prod.status == Separability::separable);
}

TEST_CASE("decide_entanglement dispatches on algebraic structure") {
  const Dims dims{2, 2};
  const OperatorAlgebra fa = factor_algebra(dims, Factor::A);
  const OperatorAlgebra fb = factor_algebra(dims, Factor::B);

  SUBCASE("pure states through the schmidt path") {
    const SeparabilityVerdict entangled =
        decide_entanglement(vector_state(singlet()), fa, fb);
    CHECK(entangled.status == Separability::entangled);
    REQUIRE(entangled.witness.has_value());
    CHECK(std::abs(entangled.witness->min_pt_eigenvalue + 0.5) <= 1e-10);

    ComplexVector product = ComplexVector::Zero(4);
    product(0) = 1.0;
    const SeparabilityVerdict separable =
        decide_entanglement(vector_state(product), fa, fb);
    CHECK(separable.status == Separability::separable);
    REQUIRE(separable.certificate.has_value());
    CHECK(separable.certificate->terms() == 1);
  }

  SUBCASE("mixed states through ppt and the approximation") {
    const SeparabilityVerdict sep = decide_entanglement(StateFunctional(werner(0.2)), fa, fb);
    CHECK(sep.status == Separability::separable);
    REQUIRE(sep.certificate.has_value());
    CHECK(sep.certificate->reconstruction_residual(werner(0.2)) <= tol::kSeparableCertificate);

    const SeparabilityVerdict ent = decide_entanglement(StateFunctional(werner(0.7)), fa, fb);
    CHECK(ent.status == Separability::entangled);
    CHECK(ent.witness.has_value());
  }

  SUBCASE("abelian sides always separate") {
    // Classical correlation: one diagonal side splits it into point masses.
    ComplexMatrix classical = ComplexMatrix::Zero(4, 4);
    classical(0, 0) = 0.5;
    classical(3, 3) = 0.5;
    std::vector<ComplexMatrix> diag_gens;
    for (int i = 0; i < 2; ++i) {
      ComplexMatrix unit = ComplexMatrix::Zero(2, 2);
      unit(i, i) = 1.0;
      diag_gens.push_back(tensor_product(unit, ComplexMatrix::Identity(2, 2)));
    }
    const OperatorAlgebra abelian_a = generate_algebra(diag_gens, 4);
    const SeparabilityVerdict verdict =
        decide_entanglement(StateFunctional(classical), abelian_a, fb);
    CHECK(verdict.status == Separability::separable);
    REQUIRE(verdict.pair_certificate.has_value());
    CHECK(verdict.pair_certificate->agreement_residual <= tol::kProductState);
    CHECK(verdict.pair_certificate->weights.size() == 2);
    for (const ComplexMatrix& component : verdict.pair_certificate->components) {
      CHECK(is_product_state(StateFunctional(component), abelian_a, fb));
    }

    // Even the singlet cannot entangle a classical subsystem.
    const SeparabilityVerdict singlet_verdict =
        decide_entanglement(vector_state(singlet()), abelian_a, fb);
    CHECK(singlet_verdict.status == Separability::separable);
  }

  SUBCASE("commuting pairs without usable structure are inconclusive") {
    // Two middle factors of a three-site chain: commuting, non-abelian, and
    // not complementary tensor factors of the whole space.
    const LatticeNet net({2, 2, 2});
    const SeparabilityVerdict verdict = decide_entanglement(
        StateFunctional(ComplexMatrix::Identity(8, 8) / 8.0), net.region_algebra({0}),
        net.region_algebra({1}));
    CHECK(verdict.status == Separability::inconclusive);
  }

  SUBCASE("non-commuting pairs are rejected") {
    CHECK_THROWS_AS(decide_entanglement(StateFunctional(werner(0.0)), fa, full_algebra(4)),
                    std::invalid_argument);
  }
}

TEST_CASE("projective disentangler reproduces the z-measured singlet") {
  const Dims dims{2, 2};
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
  p1(1, 1) = 1.0;

  const DisentangleProtocol protocol =
      projective_disentangler(vector_state(singlet()), {p0, p1}, dims);

  // Frozen output: an even classical mixture of |01> and |10>.
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(1, 1) = 0.5;
  expected(2, 2) = 0.5;
  CHECK(trace_norm(protocol.output.density() - expected) <= 1e-12);
  CHECK(protocol.operation.nonselective());

  CHECK(protocol.verdict.status == Separability::separable);
  REQUIRE(protocol.verdict.certificate.has_value());
  CHECK(protocol.verdict.certificate->terms() <= 2);
  CHECK(protocol.verdict.certificate->reconstruction_residual(protocol.output.density()) <=
        1e-12);

  // Validation: projections must be rank-one, orthogonal, and resolve I.
  CHECK_THROWS_AS(projective_disentangler(vector_state(singlet()), {p0, p0}, dims),
                  std::invalid_argument);
  CHECK_THROWS_AS(projective_disentangler(vector_state(singlet()),
                                          {0.5 * ComplexMatrix::Identity(2, 2), p1}, dims),
                  std::invalid_argument);
  ComplexVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK_THROWS_AS(projective_disentangler(vector_state(singlet()), {projector(plus), p1}, dims),
                  std::invalid_argument);
}

TEST_CASE("measuring the singlet along a generic axis flips the axis states") {
  // Observable cos(t) Z + sin(t) X at a generic angle: the nonselective
  // measurement of the singlet must produce the even mixture of a+ (x) a- and
  // a- (x) a+ for the axis eigenstates, reproducing the antisymmetry exactly.
  const Dims dims{2, 2};
  const double t = 0.7;
  ComplexMatrix observable(2, 2);
  observable << std::cos(t), std::sin(t), std::sin(t), -std::cos(t);

  const DisentangleProtocol protocol =
      nondegenerate_disentangler(vector_state(singlet()), observable, dims);

  ComplexVector a_plus(2), a_minus(2);
  a_plus << std::cos(t / 2.0), std::sin(t / 2.0);
  a_minus << -std::sin(t / 2.0), std::cos(t / 2.0);
  const ComplexMatrix expected =
      0.5 * tensor_product(projector(a_plus), projector(a_minus)) +
      0.5 * tensor_product(projector(a_minus), projector(a_plus));
  CHECK(trace_norm(protocol.output.density() - expected) <= 1e-12);

  CHECK(protocol.verdict.status == Separability::separable);
  REQUIRE(protocol.verdict.certificate.has_value());
  CHECK(protocol.verdict.certificate->terms() == 2);

  // The verdict machinery agrees on the output state.
  const SeparabilityVerdict recheck =
      decide_entanglement(protocol.output, factor_algebra(dims, Factor::A),
                          factor_algebra(dims, Factor::B));
  CHECK(recheck.status == Separability::separable);

  // Degenerate or singular observables are rejected with diagnostics.
  CHECK_THROWS_WITH_AS(
      nondegenerate_disentangler(vector_state(singlet()), ComplexMatrix::Identity(2, 2), dims),
      doctest::Contains("degenerate"), std::invalid_argument);
  ComplexMatrix singular(2, 2);
  singular << 0, 0, 0, 1;
  CHECK_THROWS_WITH_AS(nondegenerate_disentangler(vector_state(singlet()), singular, dims),
                       doctest::Contains("zero"), std::invalid_argument);
}

TEST_CASE("preparation channel installs the target and erases the factor") {
  RandomStream stream(113);
  const Dims dims{2, 3};
  const StateFunctional target(stream.random_density(2));
  const KrausOperation channel = local_preparation_channel(target, dims);

  const ComplexMatrix id = ComplexMatrix::Identity(6, 6);
  CHECK((channel.completeness_sum() - id).norm() <= 1e-12);

  // Heisenberg: factor-A observables are pinned at their target expectations.
  for (const ComplexMatrix& x : full_algebra(2).basis) {
    const ComplexMatrix lifted = tensor_product(x, ComplexMatrix::Identity(3, 3));
    CHECK((apply_heisenberg(channel, lifted) - target(x) * id).norm() <= 1e-10);
  }

  // Schrodinger: output is target (x) tr_A(input) for every input.
  for (int trial = 0; trial < 3; ++trial) {
    const StateFunctional input(stream.random_density(6));
    const UpdateOutcome outcome = update_state(input, channel);
    REQUIRE_FALSE(outcome.null_outcome());
    const ComplexMatrix expected =
        tensor_product(target.density(), partial_trace(input.density(), dims, Factor::B));
    CHECK((outcome.state->density() - expected).norm() <= 1e-12);
  }

  // Pure (rank-deficient) targets work through the spectral cutoff.
  ComplexMatrix pure = ComplexMatrix::Zero(2, 2);
  pure(0, 0) = 1.0;
  const KrausOperation pure_channel = local_preparation_channel(StateFunctional(pure), dims);
  CHECK((pure_channel.completeness_sum() - id).norm() <= 1e-12);

  CHECK_THROWS_AS(local_preparation_channel(StateFunctional(stream.random_density(3)), dims),
                  std::invalid_argument);
}

TEST_CASE("certificate transport commutes with the state update") {
  RandomStream stream(127);
  const Dims dims{2, 2};
  ProductCertificate cert;
  cert.dims = dims;
  cert.weights = stream.random_weights(3);
  for (int k = 0; k < 3; ++k) {
    cert.factors.emplace_back(stream.random_density(2), stream.random_density(2));
  }
  const StateFunctional rho(cert.reconstruct());

  // Selective factor-side operation.
  ComplexMatrix keep = ComplexMatrix::Zero(2, 2);
  keep(0, 0) = 1.0;
  ComplexMatrix rotate = stream.random_unitary(2) * 0.5;
  const std::vector<ComplexMatrix> kraus{keep * 0.7, rotate};

  for (Factor side : {Factor::A, Factor::B}) {
    const CertificateTransport moved = transport_certificate(cert, kraus, side);
    const UpdateOutcome outcome = update_state(rho, lift_local(kraus, dims, side));
    REQUIRE_FALSE(outcome.null_outcome());
    REQUIRE(moved.certificate.has_value());
    CHECK(std::abs(moved.acceptance_probability - outcome.acceptance_probability) <= 1e-12);
    CHECK(moved.certificate->reconstruction_residual(outcome.state->density()) <= 1e-12);
  }

  // Annihilating operation: null transport, no certificate.
  ProductCertificate bottom;
  bottom.dims = dims;
  bottom.weights = {1.0};
  ComplexMatrix ground = ComplexMatrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  bottom.factors.emplace_back(ground, ground);
  ComplexMatrix kill = ComplexMatrix::Zero(2, 2);
  kill(0, 1) = 1.0;  // maps |1> to |0>, kills |0>
  const CertificateTransport null_moved = transport_certificate(bottom, {kill}, Factor::A);
  CHECK(null_moved.acceptance_probability <= 1e-12);
  CHECK_FALSE(null_moved.certificate.has_value());
}

}  // TEST_SUITE
