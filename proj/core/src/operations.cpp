#include "operon/operations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "operon/states.hpp"

namespace operon {

KrausOperation::KrausOperation(std::vector<ComplexMatrix> kraus, std::string label)
    : kraus_(std::move(kraus)), label_(std::move(label)) {
  if (kraus_.empty()) {
    throw std::invalid_argument("KrausOperation: at least one Kraus operator required");
  }
  dim_ = static_cast<int>(kraus_.front().rows());
  for (const ComplexMatrix& k : kraus_) {
    if (k.rows() != dim_ || k.cols() != dim_) {
      throw std::invalid_argument("KrausOperation: Kraus operators must be square, same size");
    }
  }
  completeness_ = ComplexMatrix::Zero(dim_, dim_);
  for (const ComplexMatrix& k : kraus_) completeness_ += k.adjoint() * k;
  completeness_ = (completeness_ + ComplexMatrix(completeness_.adjoint())) / 2.0;

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(completeness_, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::invalid_argument("KrausOperation: eigensolver failed on sum K*K");
  }
  const double lo = solver.eigenvalues().minCoeff();
  const double hi = solver.eigenvalues().maxCoeff();
  if (lo < -tol::kEquality || hi > 1.0 + tol::kEquality) {
    throw std::invalid_argument("KrausOperation: sum K*K must satisfy 0 <= sum <= I");
  }
  nonselective_ =
      (completeness_ - ComplexMatrix::Identity(dim_, dim_)).norm() <= tol::kSpanMembership;
}

ComplexMatrix apply_heisenberg(const KrausOperation& t, const ComplexMatrix& z) {
  if (z.rows() != t.dim() || z.cols() != t.dim()) {
    throw std::invalid_argument("apply_heisenberg: observable dimension mismatch");
  }
  ComplexMatrix out = ComplexMatrix::Zero(t.dim(), t.dim());
  for (const ComplexMatrix& k : t.kraus()) out += k.adjoint() * z * k;
  return out;
}

SchrodingerResult apply_schrodinger(const KrausOperation& t, const StateFunctional& rho) {
  if (rho.dim() != t.dim()) {
    throw std::invalid_argument("apply_schrodinger: state dimension mismatch");
  }
  ComplexMatrix out = ComplexMatrix::Zero(t.dim(), t.dim());
  for (const ComplexMatrix& k : t.kraus()) out += k * rho.density() * k.adjoint();
  out = (out + ComplexMatrix(out.adjoint())) / 2.0;
  return {out, out.trace().real()};
}

UpdateOutcome update_state(const StateFunctional& rho, const KrausOperation& t) {
  SchrodingerResult result = apply_schrodinger(t, rho);
  UpdateOutcome outcome;
  outcome.acceptance_probability = result.weight;
  if (result.weight <= tol::kNullOutcome) {
    return outcome;  // null outcome: the updated functional is zero
  }
  outcome.state = StateFunctional(result.density / result.weight, rho.label());
  return outcome;
}

KrausOperation compose(const KrausOperation& outer, const KrausOperation& inner) {
  if (outer.dim() != inner.dim()) {
    throw std::invalid_argument("compose: operations act on different spaces");
  }
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(outer.kraus().size() * inner.kraus().size());
  for (const ComplexMatrix& ko : outer.kraus())
    for (const ComplexMatrix& ki : inner.kraus()) kraus.push_back(ko * ki);
  return KrausOperation(std::move(kraus));
}

MixtureDecomposition mixture_decomposition(const KrausOperation& t, const StateFunctional& rho) {
  const double total = rho(apply_heisenberg(t, ComplexMatrix::Identity(t.dim(), t.dim()))).real();
  if (total <= tol::kNullOutcome) {
    throw std::invalid_argument("mixture_decomposition: the operation annihilates the state");
  }
  MixtureDecomposition mix;
  for (std::size_t i = 0; i < t.kraus().size(); ++i) {
    const ComplexMatrix& k = t.kraus()[i];
    ComplexMatrix piece = k * rho.density() * k.adjoint();
    piece = (piece + ComplexMatrix(piece.adjoint())) / 2.0;
    const double weight = piece.trace().real();
    if (weight <= tol::kNullOutcome * total) continue;  // null component, weight ~0
    mix.weights.push_back(weight / total);
    mix.components.emplace_back(piece / weight);
    mix.kraus_indices.push_back(static_cast<int>(i));
  }
  return mix;
}

namespace {

std::vector<ComplexMatrix> hermitian_unit_family(const OperatorAlgebra& r) {
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

LocalityReport is_local_to(const KrausOperation& t, const OperatorAlgebra& r) {
  if (t.dim() != r.ambient_dim) {
    throw std::invalid_argument("is_local_to: operation/algebra dimension mismatch");
  }
  LocalityReport report;
  for (const ComplexMatrix& k : t.kraus()) {
    report.kraus_span_residual = std::max(report.kraus_span_residual, r.membership_residual(k));
  }
  report.local = report.kraus_span_residual <= tol::kSpanMembership;

  const ComplexMatrix t_of_id =
      apply_heisenberg(t, ComplexMatrix::Identity(t.dim(), t.dim()));
  for (const ComplexMatrix& y : hermitian_unit_family(commutant(r))) {
    // sum_i [Y,K_i]*[Y,K_i]; the identity with T(Y^2)-T(Y)Y-YT(Y)+YT(I)Y is
    // exercised by the tests, the direct form is cheaper here.
    ComplexMatrix sq = ComplexMatrix::Zero(t.dim(), t.dim());
    for (const ComplexMatrix& k : t.kraus()) {
      const ComplexMatrix c = y * k - k * y;
      sq += c.adjoint() * c;
    }
    report.commutator_residual = std::max(report.commutator_residual, sq.norm());
    report.module_residual =
        std::max(report.module_residual,
                 (apply_heisenberg(t, y) - t_of_id * y).norm());
  }
  return report;
}

FactorizationCheck factorization_check(const KrausOperation& t, const OperatorAlgebra& ra,
                                       const OperatorAlgebra& rb) {
  if (t.dim() != ra.ambient_dim || t.dim() != rb.ambient_dim) {
    throw std::invalid_argument("factorization_check: dimension mismatch");
  }
  for (const ComplexMatrix& a : ra.basis)
    for (const ComplexMatrix& b : rb.basis)
      if ((a * b - b * a).norm() > tol::kEquality) {
        throw std::invalid_argument("factorization_check: algebras do not commute");
      }
  FactorizationCheck check;
  for (const ComplexMatrix& x : ra.basis) {
    const ComplexMatrix tx = apply_heisenberg(t, x);
    for (const ComplexMatrix& y : rb.basis) {
      check.max_residual =
          std::max(check.max_residual, (apply_heisenberg(t, ComplexMatrix(x * y)) - tx * y).norm());
    }
  }
  check.factorizes = check.max_residual <= tol::kSpanMembership;
  return check;
}

KrausOperation lift_local(const std::vector<ComplexMatrix>& kraus_factor, Dims dims,
                          Factor where, std::string label) {
  if (kraus_factor.empty()) {
    throw std::invalid_argument("lift_local: at least one Kraus operator required");
  }
  const int expect = where == Factor::A ? dims.a : dims.b;
  std::vector<ComplexMatrix> lifted;
  lifted.reserve(kraus_factor.size());
  for (const ComplexMatrix& k : kraus_factor) {
    if (k.rows() != expect || k.cols() != expect) {
      throw std::invalid_argument("lift_local: Kraus operator size does not match factor");
    }
    if (where == Factor::A) {
      lifted.push_back(tensor_product(k, ComplexMatrix::Identity(dims.b, dims.b)));
    } else {
      lifted.push_back(tensor_product(ComplexMatrix::Identity(dims.a, dims.a), k));
    }
  }
  return KrausOperation(std::move(lifted), std::move(label));
}

}  // namespace operon
