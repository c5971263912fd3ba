#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "operon/algebra.hpp"
#include "operon/rng.hpp"

using namespace operon;

namespace {

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexVector singlet() {
  ComplexVector x = ComplexVector::Zero(4);
  x(1) = 1.0 / std::sqrt(2.0);
  x(2) = -1.0 / std::sqrt(2.0);
  return x;
}

ComplexVector basis_vector(int dim, int k) {
  ComplexVector x = ComplexVector::Zero(dim);
  x(k) = 1.0;
  return x;
}

}  // namespace

TEST_SUITE("algebra") {

TEST_CASE("generation closes under products and adjoints and contains the identity") {
  const OperatorAlgebra from_x = generate_algebra({pauli_x()}, 2);
  CHECK(from_x.dimension() == 2);  // span{I, X}
  CHECK(from_x.contains(ComplexMatrix::Identity(2, 2)));
  CHECK(from_x.contains(pauli_x()));
  CHECK_FALSE(from_x.contains(pauli_z()));

  const OperatorAlgebra from_xz = generate_algebra({pauli_x(), pauli_z()}, 2);
  CHECK(from_xz.dimension() == 4);  // X and Z generate everything

  // A non-self-adjoint generator pulls in its adjoint: E_01 generates spans
  // containing E_10, E_00 and E_11.
  ComplexMatrix raising = ComplexMatrix::Zero(2, 2);
  raising(0, 1) = 1.0;
  const OperatorAlgebra from_raising = generate_algebra({raising}, 2);
  CHECK(from_raising.dimension() == 4);
  CHECK(from_raising.contains(ComplexMatrix(raising.adjoint())));

  // Products of basis elements stay inside the span.
  for (const ComplexMatrix& p : from_xz.basis)
    for (const ComplexMatrix& q : from_xz.basis) CHECK(from_xz.contains(ComplexMatrix(p * q)));
}

TEST_CASE("standard algebras have the expected dimensions") {
  CHECK(full_algebra(3).dimension() == 9);
  CHECK(trivial_algebra(3).dimension() == 1);
  CHECK(diagonal_algebra(3).dimension() == 3);

  const Dims dims{2, 3};
  const OperatorAlgebra fa = factor_algebra(dims, Factor::A);
  const OperatorAlgebra fb = factor_algebra(dims, Factor::B);
  CHECK(fa.ambient_dim == 6);
  CHECK(fa.dimension() == 4);
  CHECK(fb.dimension() == 9);
  CHECK(fa.contains(tensor_product(pauli_z(), ComplexMatrix::Identity(3, 3))));
  ComplexMatrix skewed_b = ComplexMatrix::Zero(3, 3);
  skewed_b(0, 0) = 1.0;
  skewed_b(1, 1) = 2.0;
  skewed_b(2, 2) = 3.0;
  CHECK_FALSE(fa.contains(tensor_product(ComplexMatrix::Identity(2, 2), skewed_b)));

  // Factor algebras commute elementwise.
  for (const ComplexMatrix& a : fa.basis)
    for (const ComplexMatrix& b : fb.basis) CHECK((a * b - b * a).norm() <= 1e-12);
}

TEST_CASE("commutants and the double commutant") {
  const Dims dims{2, 2};
  const OperatorAlgebra fa = factor_algebra(dims, Factor::A);
  const OperatorAlgebra fb = factor_algebra(dims, Factor::B);
  CHECK(same_span(commutant(fa), fb));
  CHECK(same_span(commutant(fb), fa));

  CHECK(same_span(commutant(full_algebra(3)), trivial_algebra(3)));
  CHECK(same_span(commutant(trivial_algebra(3)), full_algebra(3)));
  CHECK(same_span(commutant(diagonal_algebra(3)), diagonal_algebra(3)));

  // Double commutant fixes generated algebras.
  const OperatorAlgebra r =
      generate_algebra({tensor_product(pauli_z(), ComplexMatrix::Identity(2, 2))}, 4);
  CHECK(same_span(commutant(commutant(r)), r));
  const OperatorAlgebra s = generate_algebra(
      {tensor_product(pauli_x(), ComplexMatrix::Identity(2, 2)),
       tensor_product(pauli_z(), ComplexMatrix::Identity(2, 2))},
      4);
  CHECK(same_span(commutant(commutant(s)), s));
  CHECK(same_span(s, fa));
}

TEST_CASE("center detection separates factors from non-factors") {
  const Dims dims{2, 2};
  const CenterDecomposition factor_center = center_and_factor(factor_algebra(dims, Factor::A));
  CHECK(factor_center.is_factor);
  CHECK(factor_center.center.dimension() == 1);

  const CenterDecomposition diag_center = center_and_factor(diagonal_algebra(3));
  CHECK_FALSE(diag_center.is_factor);
  CHECK(diag_center.center.dimension() == 3);

  CHECK(is_abelian(diagonal_algebra(4)));
  CHECK_FALSE(is_abelian(full_algebra(2)));
}

TEST_CASE("cyclic and separating vectors via orbit ranks") {
  const Dims dims{2, 2};
  const OperatorAlgebra fa = factor_algebra(dims, Factor::A);

  CHECK(is_cyclic_vector(singlet(), fa));
  CHECK(is_separating_vector(singlet(), fa));

  const ComplexVector product = basis_vector(4, 0);  // |0> (x) |0>
  CHECK_FALSE(is_cyclic_vector(product, fa));
  CHECK_FALSE(is_separating_vector(product, fa));

  // Full algebra: every nonzero vector is cyclic, none is separating (d >= 2).
  const OperatorAlgebra full = full_algebra(3);
  CHECK(is_cyclic_vector(basis_vector(3, 1), full));
  CHECK_FALSE(is_separating_vector(basis_vector(3, 1), full));

  // Trivial algebra: never cyclic (d >= 2), always separating.
  const OperatorAlgebra trivial = trivial_algebra(3);
  CHECK_FALSE(is_cyclic_vector(basis_vector(3, 0), trivial));
  CHECK(is_separating_vector(basis_vector(3, 0), trivial));

  // Cyclic for an algebra iff separating for its commutant (square dims case).
  RandomStream stream(31);
  const ComplexVector x = stream.haar_vector(4);
  CHECK(is_cyclic_vector(x, fa) == is_separating_vector(x, commutant(fa)));
}

TEST_CASE("tensor factor form is recognized from the span alone") {
  const Dims dims{2, 3};
  const auto form_a = tensor_factor_form(factor_algebra(dims, Factor::A));
  REQUIRE(form_a.has_value());
  CHECK(form_a->first.a == 2);
  CHECK(form_a->first.b == 3);
  CHECK(form_a->second == Factor::A);

  const auto form_b = tensor_factor_form(factor_algebra(dims, Factor::B));
  REQUIRE(form_b.has_value());
  CHECK(form_b->first.a == 2);
  CHECK(form_b->first.b == 3);
  CHECK(form_b->second == Factor::B);

  CHECK_FALSE(tensor_factor_form(diagonal_algebra(4)).has_value());

  // A rotated copy of a factor algebra is generally not in factor form.
  RandomStream stream(37);
  const ComplexMatrix u = stream.random_unitary(4);
  std::vector<ComplexMatrix> rotated;
  for (const ComplexMatrix& b : factor_algebra({2, 2}, Factor::A).basis)
    rotated.push_back(u * b * u.adjoint());
  CHECK_FALSE(tensor_factor_form(generate_algebra(rotated, 4)).has_value());
}

TEST_CASE("support projections are minimal and lie in the algebra") {
  const Dims dims{2, 2};
  const OperatorAlgebra fa = factor_algebra(dims, Factor::A);

  // Faithful reduced state: support is the identity.
  const StateFunctional entangled(singlet() * singlet().adjoint());
  const ComplexMatrix s_full = support_projection(entangled, fa);
  CHECK((s_full - ComplexMatrix::Identity(4, 4)).norm() <= 1e-10);

  // Product vector |00>: support collapses to |0><0| (x) I.
  const StateFunctional pure(basis_vector(4, 0) * basis_vector(4, 0).adjoint());
  const ComplexMatrix s_half = support_projection(pure, fa);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = expected(1, 1) = 1.0;
  CHECK((s_half - expected).norm() <= 1e-10);
  CHECK(fa.contains(s_half));
  CHECK(pure(s_half).real() == doctest::Approx(1.0).epsilon(1e-12));

  // The support of a faithful state on the full algebra is the identity.
  RandomStream stream(41);
  const StateFunctional faithful(stream.random_density(3));
  CHECK((support_projection(faithful, full_algebra(3)) - ComplexMatrix::Identity(3, 3)).norm() <=
        1e-10);
}

TEST_CASE("left ideals of a state") {
  // A pure state on the full 2x2 matrix algebra annihilates a two-dimensional
  // left ideal: everything whose first column vanishes.
  const StateFunctional pure(basis_vector(2, 0) * basis_vector(2, 0).adjoint());
  const std::vector<ComplexMatrix> ideal = left_ideal_basis(pure, full_algebra(2));
  CHECK(ideal.size() == 2);
  for (const ComplexMatrix& a : ideal) {
    CHECK(pure(ComplexMatrix(a.adjoint() * a)).real() <= 1e-12);
    CHECK((a * basis_vector(2, 0)).norm() <= 1e-10);
  }

  // Faithful states annihilate nothing.
  RandomStream stream(43);
  const StateFunctional faithful(stream.random_density(2));
  CHECK(left_ideal_basis(faithful, full_algebra(2)).empty());

  // The ideal of the support complement: I - S is annihilated.
  const Dims dims{2, 2};
  const OperatorAlgebra fa = factor_algebra(dims, Factor::A);
  const StateFunctional half(basis_vector(4, 0) * basis_vector(4, 0).adjoint());
  const ComplexMatrix s = support_projection(half, fa);
  const std::vector<ComplexMatrix> factor_ideal = left_ideal_basis(half, fa);
  CHECK(factor_ideal.size() == 2);  // E_01 and E_11 on the A factor
  bool complement_found = false;
  const ComplexMatrix complement = ComplexMatrix::Identity(4, 4) - s;
  for (const ComplexMatrix& a : factor_ideal) {
    if (std::abs(std::abs((a.adjoint() * complement).trace()) - complement.norm()) < 1e-9) {
      complement_found = true;
    }
  }
  CHECK(half(complement).real() <= 1e-12);
  CHECK(complement_found);
}

TEST_CASE("abelian projections and atoms") {
  const OperatorAlgebra full2 = full_algebra(2);
  const ComplexMatrix p = basis_vector(2, 0) * basis_vector(2, 0).adjoint();
  const AbelianProjectionCheck rank_one = is_abelian_projection(p, full2);
  CHECK(rank_one.abelian);
  CHECK(rank_one.atom);

  // A rank-two projection inside M_2 (x) I is still an atom of that algebra.
  const Dims dims{2, 2};
  const OperatorAlgebra fa = factor_algebra(dims, Factor::A);
  const ComplexMatrix lifted = tensor_product(p, ComplexMatrix::Identity(2, 2));
  const AbelianProjectionCheck factor_atom = is_abelian_projection(lifted, fa);
  CHECK(factor_atom.abelian);
  CHECK(factor_atom.atom);

  // A rank-two projection in the full 4x4 algebra cuts out an M_2 corner.
  ComplexMatrix p2 = ComplexMatrix::Zero(4, 4);
  p2(0, 0) = p2(1, 1) = 1.0;
  const AbelianProjectionCheck corner = is_abelian_projection(p2, full_algebra(4));
  CHECK_FALSE(corner.abelian);
  CHECK_FALSE(corner.atom);

  CHECK_THROWS_AS(is_abelian_projection(0.5 * ComplexMatrix::Identity(2, 2), full2),
                  std::invalid_argument);
  CHECK_THROWS_AS(is_abelian_projection(ComplexMatrix::Zero(2, 2), full2),
                  std::invalid_argument);
  // Membership is required: |0><0| (x) |0><0| is not in M_2 (x) I.
  CHECK_THROWS_AS(is_abelian_projection(tensor_product(p, p), fa), std::invalid_argument);
}

TEST_CASE("lattice nets cache region algebras and keep disjoint regions commuting") {
  const LatticeNet net({2, 2, 3});
  CHECK(net.total_dim() == 12);
  CHECK(net.region_algebra({0}).dimension() == 4);
  CHECK(net.region_algebra({2}).dimension() == 9);
  CHECK(net.region_algebra({0, 2}).dimension() == 36);
  CHECK(net.region_algebra({}).dimension() == 1);
  CHECK(net.region_algebra({0, 1, 2}).dimension() == 144);

  // Region order and duplicates do not matter; the cache returns one object.
  const OperatorAlgebra* first = &net.region_algebra({2, 0});
  const OperatorAlgebra* second = &net.region_algebra({0, 2, 2});
  CHECK(first == second);

  for (const ComplexMatrix& a : net.region_algebra({0}).basis)
    for (const ComplexMatrix& b : net.region_algebra({1, 2}).basis)
      CHECK((a * b - b * a).norm() <= 1e-12);

  // Inclusion is monotone in the region.
  for (const ComplexMatrix& a : net.region_algebra({1}).basis)
    CHECK(net.region_algebra({0, 1}).contains(a));

  CHECK(same_span(net_algebra(net, {0, 1, 2}), full_algebra(12)));
  CHECK_THROWS_AS(net.region_algebra({3}), std::invalid_argument);
  CHECK_THROWS_AS(LatticeNet({2, 0}), std::invalid_argument);
}

}  // TEST_SUITE
