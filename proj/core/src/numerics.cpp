#include "operon/numerics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace operon {

namespace {

void require_square_of(const ComplexMatrix& m, Dims dims, const char* who) {
  if (dims.a <= 0 || dims.b <= 0) {
    throw std::invalid_argument(std::string(who) + ": dims must be positive");
  }
  if (m.rows() != m.cols() || m.rows() != dims.total()) {
    throw std::invalid_argument(std::string(who) + ": matrix is " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                ", expected square of size " + std::to_string(dims.total()));
  }
}

}  // namespace

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Dims dims, Factor keep) {
  require_square_of(m, dims, "partial_trace");
  const int da = dims.a, db = dims.b;
  if (keep == Factor::A) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (int i = 0; i < da; ++i)
      for (int k = 0; k < da; ++k)
        for (int j = 0; j < db; ++j) out(i, k) += m(i * db + j, k * db + j);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (int j = 0; j < db; ++j)
    for (int l = 0; l < db; ++l)
      for (int i = 0; i < da; ++i) out(j, l) += m(i * db + j, i * db + l);
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, Dims dims, Factor which) {
  require_square_of(m, dims, "partial_transpose");
  const int da = dims.a, db = dims.b;
  ComplexMatrix out(m.rows(), m.cols());
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j)
      for (int k = 0; k < da; ++k)
        for (int l = 0; l < db; ++l) {
          if (which == Factor::B) {
            out(i * db + j, k * db + l) = m(i * db + l, k * db + j);
          } else {
            out(i * db + j, k * db + l) = m(k * db + j, i * db + l);
          }
        }
  return out;
}

HermitianEigenSystem hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("hermitian_eig: matrix must be square");
  }
  const double scale = m.norm();
  if ((m - m.adjoint()).norm() > 1e-10 * scale) {
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

MatrixNorms matrix_norms(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& sv = svd.singularValues();
  MatrixNorms norms;
  norms.operator_norm = sv.size() > 0 ? sv(0) : 0.0;
  norms.trace_norm = sv.sum();
  norms.frobenius = m.norm();
  return norms;
}

double frobenius_norm(const ComplexMatrix& m) { return m.norm(); }

double operator_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

double trace_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).norm() <= tol * std::max(1.0, m.norm());
}

int numerical_rank(const ComplexMatrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

SchmidtDecomposition schmidt_decompose(const ComplexVector& x, Dims dims) {
  if (dims.a <= 0 || dims.b <= 0 || x.size() != dims.total()) {
    throw std::invalid_argument("schmidt_decompose: vector size does not match dims");
  }
  if (x.norm() == 0.0) {
    throw std::invalid_argument("schmidt_decompose: zero vector");
  }
  // Reshape by the composite index: C(i, j) = x[i * dB + j].
  ComplexMatrix c(dims.a, dims.b);
  for (int i = 0; i < dims.a; ++i)
    for (int j = 0; j < dims.b; ++j) c(i, j) = x(i * dims.b + j);

  Eigen::JacobiSVD<ComplexMatrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtDecomposition s;
  s.coefficients = svd.singularValues();
  s.left_vectors = svd.matrixU();
  // C = U S V*, so x = sum_k s_k U.col(k) (x) conj(V).col(k).
  s.right_vectors = svd.matrixV().conjugate();
  const double top = s.coefficients.size() > 0 ? s.coefficients(0) : 0.0;
  s.rank = 0;
  for (Eigen::Index k = 0; k < s.coefficients.size(); ++k) {
    if (s.coefficients(k) > tol::kRankRel * top) ++s.rank;
  }
  return s;
}

ComplexVector schmidt_reconstruct(const SchmidtDecomposition& s) {
  const int da = static_cast<int>(s.left_vectors.rows());
  const int db = static_cast<int>(s.right_vectors.rows());
  ComplexVector x = ComplexVector::Zero(da * db);
  for (Eigen::Index k = 0; k < s.coefficients.size(); ++k) {
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < db; ++j)
        x(i * db + j) += s.coefficients(k) * s.left_vectors(i, k) * s.right_vectors(j, k);
  }
  return x;
}

}  // namespace operon
