#pragma once

#include <Eigen/Dense>
#include <complex>

#include "operon/tolerances.hpp"

namespace operon {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Bipartite dimension pair, factor A first. The composite basis index of
// |i>_A (x) |j>_B is i * b + j throughout; every reshaping below relies on it.
struct Dims {
  int a = 0;
  int b = 0;
  int total() const { return a * b; }
  bool square() const { return a == b; }
};

enum class Factor { A = 0, B = 1 };

struct HermitianEigenSystem {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // orthonormal columns, matching order
};

struct MatrixNorms {
  double operator_norm = 0;  // largest singular value
  double trace_norm = 0;     // sum of singular values
  double frobenius = 0;
};

struct SchmidtDecomposition {
  RealVector coefficients;     // nonincreasing, >= 0, length min(dA, dB)
  ComplexMatrix left_vectors;  // dA x min(dA,dB), orthonormal columns
  ComplexMatrix right_vectors; // dB x min(dA,dB), orthonormal columns
  int rank = 0;                // coefficients above kRankRel * largest
};

// Kronecker product in the composite-index convention above:
// (A (x) B)[i*rB+j, k*cB+l] = A(i,k) * B(j,l).
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Trace out the complement of `keep`. Requires m square of size dims.total().
ComplexMatrix partial_trace(const ComplexMatrix& m, Dims dims, Factor keep);

// Transpose the `which` factor only.
ComplexMatrix partial_transpose(const ComplexMatrix& m, Dims dims, Factor which);

// Throws std::invalid_argument unless ||m - m*||_F <= 1e-10 * ||m||_F.
HermitianEigenSystem hermitian_eig(const ComplexMatrix& m);

MatrixNorms matrix_norms(const ComplexMatrix& m);

double frobenius_norm(const ComplexMatrix& m);
double operator_norm(const ComplexMatrix& m);
double trace_norm(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol = tol::kEquality);

// Rank of the column space with the library-wide relative threshold.
int numerical_rank(const ComplexMatrix& m, double rel_tol = tol::kRankRel);

// x must be nonzero of size dims.total(); coefficients are those of x as
// given (they sum-square to |x|^2).
SchmidtDecomposition schmidt_decompose(const ComplexVector& x, Dims dims);

// Reassemble sum_k c_k a_k (x) b_k; used by tests and the intertwiner solver.
ComplexVector schmidt_reconstruct(const SchmidtDecomposition& s);

}  // namespace operon
