#include "operon/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "operon/rng.hpp"

namespace operon {

namespace {

void require_commuting(const OperatorAlgebra& ra, const OperatorAlgebra& rb, const char* who) {
  if (ra.ambient_dim != rb.ambient_dim) {
    throw std::invalid_argument(std::string(who) + ": algebras live on different spaces");
  }
  for (const ComplexMatrix& a : ra.basis)
    for (const ComplexMatrix& b : rb.basis)
      if ((a * b - b * a).norm() > tol::kEquality) {
        throw std::invalid_argument(std::string(who) + ": algebras do not commute");
      }
}

ComplexMatrix rank_one_density(const ComplexVector& v) {
  return v * v.adjoint();
}

// Top eigenvector of a (symmetrized) Hermitian matrix.
ComplexVector top_eigenvector(ComplexMatrix m) {
  m = (m + ComplexMatrix(m.adjoint())) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  return solver.eigenvectors().col(m.rows() - 1);
}

// M(i,i') = b* R_block(i,i') b — the quadratic form over the A factor.
ComplexMatrix contract_factor_b(const ComplexMatrix& r, const ComplexVector& b, Dims dims) {
  ComplexMatrix m(dims.a, dims.a);
  for (int i = 0; i < dims.a; ++i)
    for (int k = 0; k < dims.a; ++k)
      m(i, k) = (b.adjoint() * r.block(i * dims.b, k * dims.b, dims.b, dims.b) * b)(0, 0);
  return m;
}

// M(j,j') = sum_{i,i'} conj(a_i) R[(i j),(i' j')] a_{i'} — the form over B.
ComplexMatrix contract_factor_a(const ComplexMatrix& r, const ComplexVector& a, Dims dims) {
  ComplexMatrix m = ComplexMatrix::Zero(dims.b, dims.b);
  for (int i = 0; i < dims.a; ++i)
    for (int k = 0; k < dims.a; ++k)
      m += std::conj(a(i)) * a(k) * r.block(i * dims.b, k * dims.b, dims.b, dims.b);
  return m;
}

double product_overlap(const ComplexMatrix& r, const ComplexVector& a, const ComplexVector& b,
                       Dims dims) {
  return (a.adjoint() * contract_factor_b(r, b, dims) * a)(0, 0).real();
}

struct ProductAtom {
  ComplexVector a;
  ComplexVector b;
  ComplexMatrix density;  // (a a*) (x) (b b*)
};

// Best pure product state against the Hermitian residual r: alternating
// rank-one power iterations from one deterministic start (the top Schmidt
// pair of the residual's leading eigenvector) plus `restarts` random starts;
// ties between restarts resolve to the earliest (strict improvement only).
ProductAtom best_product_direction(const ComplexMatrix& r, Dims dims,
                                   const FrankWolfeOptions& opts, RandomStream& stream) {
  std::vector<ComplexVector> starts;
  {
    const ComplexVector lead = top_eigenvector(r);
    const SchmidtDecomposition s = schmidt_decompose(lead, dims);
    starts.push_back(s.right_vectors.col(0));
  }
  for (int t = 0; t < opts.restarts; ++t) starts.push_back(stream.haar_vector(dims.b));

  ProductAtom best;
  double best_value = -std::numeric_limits<double>::infinity();
  for (const ComplexVector& b0 : starts) {
    ComplexVector b = b0;
    ComplexVector a = top_eigenvector(contract_factor_b(r, b, dims));
    for (int it = 0; it < opts.power_iterations; ++it) {
      b = top_eigenvector(contract_factor_a(r, a, dims));
      a = top_eigenvector(contract_factor_b(r, b, dims));
    }
    const double value = product_overlap(r, a, b, dims);
    if (value > best_value) {
      best_value = value;
      best.a = a;
      best.b = b;
    }
  }
  best.density = tensor_product(rank_one_density(best.a), rank_one_density(best.b));
  return best;
}

Eigen::VectorXd project_simplex(Eigen::VectorXd v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  int rho = 0;
  for (int k = 0; k < n; ++k) {
    css += u[k];
    const double t = (css - 1.0) / (k + 1);
    if (u[k] - t > 0) {
      rho = k + 1;
      theta = t;
    }
  }
  for (int i = 0; i < n; ++i) v(i) = std::max(v(i) - theta, 0.0);
  return v;
}

// min ||d - sum_k w_k P_k||_F^2 over the probability simplex: FISTA with
// simplex projection, then an exact KKT polish on the identified support.
std::vector<double> optimize_weights(const std::vector<ProductAtom>& atoms,
                                     const ComplexMatrix& d, std::vector<double> w0) {
  const int n = static_cast<int>(atoms.size());
  Eigen::MatrixXd gram(n, n);
  Eigen::VectorXd lin(n);
  for (int j = 0; j < n; ++j) {
    lin(j) = (atoms[j].density.adjoint() * d).trace().real();
    for (int k = j; k < n; ++k) {
      gram(j, k) = gram(k, j) = (atoms[j].density.adjoint() * atoms[k].density).trace().real();
    }
  }
  const auto objective = [&](const Eigen::VectorXd& w) {
    return w.dot(gram * w) - 2.0 * lin.dot(w);
  };

  Eigen::VectorXd w = Eigen::Map<Eigen::VectorXd>(w0.data(), n);
  w = project_simplex(w);
  Eigen::VectorXd best_w = w;
  double best_f = objective(w);

  const double lip = 2.0 * gram.norm() + 1e-12;
  Eigen::VectorXd y = w, w_prev = w;
  double tk = 1.0;
  for (int it = 0; it < 1500; ++it) {
    const Eigen::VectorXd grad = 2.0 * (gram * y - lin);
    const Eigen::VectorXd w_next = project_simplex(y - grad / lip);
    const double tk_next = (1.0 + std::sqrt(1.0 + 4.0 * tk * tk)) / 2.0;
    y = w_next + ((tk - 1.0) / tk_next) * (w_next - w_prev);
    w_prev = w_next;
    tk = tk_next;
    const double f = objective(w_next);
    if (f < best_f) {
      best_f = f;
      best_w = w_next;
    }
  }

  // Exact solve on the support FISTA identified, kept only when feasible and
  // at least as good.
  std::vector<int> support;
  for (int i = 0; i < n; ++i)
    if (best_w(i) > 1e-10) support.push_back(i);
  if (!support.empty()) {
    const int m = static_cast<int>(support.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::VectorXd rhs(m + 1);
    for (int p = 0; p < m; ++p) {
      rhs(p) = 2.0 * lin(support[p]);
      kkt(m, p) = kkt(p, m) = 1.0;
      for (int q = 0; q < m; ++q) kkt(p, q) = 2.0 * gram(support[p], support[q]);
    }
    rhs(m) = 1.0;
    const Eigen::VectorXd sol = kkt.colPivHouseholderQr().solve(rhs);
    bool feasible = true;
    for (int p = 0; p < m; ++p)
      if (sol(p) < -1e-12) feasible = false;
    if (feasible) {
      Eigen::VectorXd cand = Eigen::VectorXd::Zero(n);
      double sum = 0.0;
      for (int p = 0; p < m; ++p) {
        cand(support[p]) = std::max(sol(p), 0.0);
        sum += cand(support[p]);
      }
      if (sum > 0) {
        cand /= sum;
        if (objective(cand) <= best_f) {
          best_f = objective(cand);
          best_w = cand;
        }
      }
    }
  }
  return std::vector<double>(best_w.data(), best_w.data() + n);
}

constexpr double kPptExactTotal = 6;  // PPT decides up to 2x3 composites

SeparabilityVerdict separable_via_approximation(const StateFunctional& rho, Dims dims,
                                                const std::string& method_prefix) {
  SeparabilityVerdict verdict;
  verdict.dims = dims;
  const SeparableApproximation approx = separable_approximation(rho, dims);
  verdict.status = Separability::separable;
  verdict.method = method_prefix;
  verdict.certificate = approx.certificate;
  verdict.best_distance = approx.distance;
  return verdict;
}

}  // namespace

double entanglement_entropy(const ComplexVector& x, Dims dims) {
  const double n = x.norm();
  if (n < 1e-14) throw std::invalid_argument("entanglement_entropy: zero vector");
  const SchmidtDecomposition s = schmidt_decompose(ComplexVector(x / n), dims);
  double h = 0.0;
  for (Eigen::Index k = 0; k < s.coefficients.size(); ++k) {
    const double p = s.coefficients(k) * s.coefficients(k);
    if (p > 1e-15) h -= p * std::log(p);
  }
  return h;
}

SeparabilityVerdict ppt_verdict(const StateFunctional& rho, Dims dims) {
  if (rho.dim() != dims.total()) {
    throw std::invalid_argument("ppt_verdict: state dimension does not match dims");
  }
  const HermitianEigenSystem eig =
      hermitian_eig(partial_transpose(rho.density(), dims, Factor::B));
  const double min_eig = eig.eigenvalues(0);

  SeparabilityVerdict verdict;
  verdict.dims = dims;
  if (min_eig < -tol::kWitnessNegative) {
    verdict.status = Separability::entangled;
    verdict.method = "partial-transpose witness";
    verdict.witness = EntanglementWitness{min_eig, eig.eigenvectors.col(0)};
    return verdict;
  }
  if (dims.total() <= kPptExactTotal) {
    verdict = separable_via_approximation(rho, dims, "partial-transpose (exact domain)");
    return verdict;
  }
  // Pure states are decided by the partial transpose in any dimension.
  if (numerical_rank(rho.density()) == 1) {
    verdict = separable_via_approximation(rho, dims, "partial-transpose (pure state)");
    return verdict;
  }
  verdict.status = Separability::inconclusive;
  verdict.method = "partial-transpose nonnegative outside exact domain";
  return verdict;
}

SeparableApproximation separable_approximation(const StateFunctional& rho, Dims dims,
                                               const FrankWolfeOptions& opts) {
  if (rho.dim() != dims.total() || dims.a <= 0 || dims.b <= 0) {
    throw std::invalid_argument("separable_approximation: state/dims mismatch");
  }
  const ComplexMatrix& d = rho.density();
  RandomStream stream(opts.seed);

  std::vector<ProductAtom> atoms;
  std::vector<double> weights;
  ComplexMatrix current = ComplexMatrix::Zero(d.rows(), d.cols());

  double last_distance = std::numeric_limits<double>::infinity();
  int stall = 0;
  int iterations = 0;
  for (int it = 0; it < opts.budget; ++it) {
    ++iterations;
    const ComplexMatrix residual = d - current;
    const double distance = residual.norm();
    if (distance <= opts.target) break;
    if (distance >= last_distance - 1e-16) {
      if (++stall >= 12) break;  // converged to the hull-facing fixed point
    } else {
      stall = 0;
    }
    last_distance = distance;

    RandomStream sub = stream.substream(static_cast<std::uint64_t>(it));
    ProductAtom atom = best_product_direction(residual, dims, opts, sub);

    bool duplicate = false;
    for (const ProductAtom& existing : atoms) {
      if ((existing.density - atom.density).norm() <= 1e-10) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) {
      atoms.push_back(std::move(atom));
      weights.push_back(0.0);
    }

    weights = optimize_weights(atoms, d, std::move(weights));

    // Prune zero-weight atoms so certificates stay minimal.
    std::vector<ProductAtom> kept_atoms;
    std::vector<double> kept_weights;
    double sum = 0.0;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      if (weights[k] > 1e-12) {
        kept_atoms.push_back(std::move(atoms[k]));
        kept_weights.push_back(weights[k]);
        sum += weights[k];
      }
    }
    if (!kept_atoms.empty() && sum > 0) {
      for (double& w : kept_weights) w /= sum;
      atoms = std::move(kept_atoms);
      weights = std::move(kept_weights);
    }

    current.setZero();
    for (std::size_t k = 0; k < atoms.size(); ++k) current += weights[k] * atoms[k].density;
  }

  SeparableApproximation out;
  out.iterations = iterations;
  out.distance = (d - current).norm();
  out.certificate.dims = dims;
  out.certificate.weights = weights;
  for (const ProductAtom& atom : atoms) {
    out.certificate.factors.emplace_back(rank_one_density(atom.a), rank_one_density(atom.b));
  }
  return out;
}

namespace {

// Minimal joint eigenprojections of an abelian family: refine an orthonormal
// block decomposition against every Hermitian component of the basis.
std::vector<ComplexMatrix> joint_eigenprojections(const OperatorAlgebra& r) {
  const int d = r.ambient_dim;
  std::vector<ComplexMatrix> family;
  const Complex i_unit(0.0, 1.0);
  for (const ComplexMatrix& b : r.basis) {
    const ComplexMatrix h = (b + ComplexMatrix(b.adjoint())) / 2.0;
    const ComplexMatrix k = (b - ComplexMatrix(b.adjoint())) / (2.0 * i_unit);
    if (h.norm() > 1e-12) family.push_back(h);
    if (k.norm() > 1e-12) family.push_back(k);
  }

  std::vector<ComplexMatrix> blocks{ComplexMatrix::Identity(d, d)};
  for (const ComplexMatrix& h : family) {
    std::vector<ComplexMatrix> next;
    for (const ComplexMatrix& v : blocks) {
      if (v.cols() == 1) {
        next.push_back(v);
        continue;
      }
      const HermitianEigenSystem eig = hermitian_eig(ComplexMatrix(v.adjoint() * h * v));
      const double scale = std::max(1.0, std::max(std::abs(eig.eigenvalues(0)),
                                                  std::abs(eig.eigenvalues(eig.eigenvalues.size() - 1))));
      Eigen::Index start = 0;
      for (Eigen::Index i = 1; i <= eig.eigenvalues.size(); ++i) {
        const bool split = i == eig.eigenvalues.size() ||
                           eig.eigenvalues(i) - eig.eigenvalues(i - 1) > 1e-8 * scale;
        if (split) {
          next.push_back(v * eig.eigenvectors.middleCols(start, i - start));
          start = i;
        }
      }
    }
    blocks = std::move(next);
  }

  std::vector<ComplexMatrix> projections;
  projections.reserve(blocks.size());
  for (const ComplexMatrix& v : blocks) {
    ComplexMatrix q = v * v.adjoint();
    projections.push_back((q + ComplexMatrix(q.adjoint())) / 2.0);
  }
  return projections;
}

SeparabilityVerdict abelian_point_mass(const StateFunctional& rho, const OperatorAlgebra& ra,
                                       const OperatorAlgebra& rb) {
  std::vector<ComplexMatrix> pieces{rho.density()};
  for (const OperatorAlgebra* side : {&ra, &rb}) {
    if (!is_abelian(*side)) continue;
    const std::vector<ComplexMatrix> projections = joint_eigenprojections(*side);
    std::vector<ComplexMatrix> next;
    for (const ComplexMatrix& piece : pieces)
      for (const ComplexMatrix& q : projections) next.push_back(q * piece * q);
    pieces = std::move(next);
  }

  CommutingPairCertificate cert;
  std::vector<StateFunctional> components;
  for (ComplexMatrix& piece : pieces) {
    piece = (piece + ComplexMatrix(piece.adjoint())) / 2.0;
    const double w = piece.trace().real();
    if (w <= tol::kNullOutcome) continue;
    cert.weights.push_back(w);
    cert.components.push_back(piece / w);
    components.emplace_back(cert.components.back());
  }

  SeparabilityVerdict verdict;
  verdict.method = "abelian joint diagonalization, point-mass decomposition";
  bool all_product = true;
  for (const StateFunctional& comp : components) {
    if (!is_product_state(comp, ra, rb)) {
      all_product = false;
      break;
    }
  }
  // The pinched mixture agrees with rho on the generated joint algebra.
  double agreement = 0.0;
  for (const ComplexMatrix& a : ra.basis)
    for (const ComplexMatrix& b : rb.basis) {
      Complex mixed = 0.0;
      const ComplexMatrix ab = a * b;
      for (std::size_t m = 0; m < components.size(); ++m) {
        mixed += cert.weights[m] * components[m](ab);
      }
      agreement = std::max(agreement, std::abs(mixed - rho(ab)));
    }
  cert.agreement_residual = agreement;

  if (!all_product || agreement > tol::kProductState) {
    verdict.status = Separability::inconclusive;
    verdict.method += " (verification failed)";
    return verdict;
  }
  verdict.status = Separability::separable;
  verdict.pair_certificate = std::move(cert);
  return verdict;
}

}  // namespace

SeparabilityVerdict decide_entanglement(const StateFunctional& rho, const OperatorAlgebra& ra,
                                        const OperatorAlgebra& rb) {
  require_commuting(ra, rb, "decide_entanglement");
  if (rho.dim() != ra.ambient_dim) {
    throw std::invalid_argument("decide_entanglement: state dimension mismatch");
  }

  if (is_abelian(ra) || is_abelian(rb)) {
    return abelian_point_mass(rho, ra, rb);
  }

  // Complementary full tensor factors admit the sharp tools.
  const auto form_a = tensor_factor_form(ra);
  const auto form_b = tensor_factor_form(rb);
  std::optional<Dims> split;
  if (form_a && form_b && form_a->first.a == form_b->first.a &&
      form_a->first.b == form_b->first.b && form_a->second != form_b->second) {
    split = form_a->first;
  }
  if (!split) {
    SeparabilityVerdict verdict;
    verdict.status = Separability::inconclusive;
    verdict.method = "no abelian side and no complementary tensor-factor structure detected";
    return verdict;
  }
  const Dims dims = *split;

  if (dims.a == 1 || dims.b == 1) {
    // One factor is scalar: every state is a single product term.
    SeparabilityVerdict verdict;
    verdict.status = Separability::separable;
    verdict.method = "scalar factor";
    verdict.dims = dims;
    ProductCertificate cert;
    cert.dims = dims;
    cert.weights = {1.0};
    cert.factors.emplace_back(partial_trace(rho.density(), dims, Factor::A),
                              partial_trace(rho.density(), dims, Factor::B));
    verdict.certificate = std::move(cert);
    return verdict;
  }

  // Pure states: Schmidt rank decides, the partial transpose witnesses.
  const HermitianEigenSystem deig = hermitian_eig(rho.density());
  const double top = deig.eigenvalues(deig.eigenvalues.size() - 1);
  int density_rank = 0;
  for (Eigen::Index i = 0; i < deig.eigenvalues.size(); ++i) {
    if (deig.eigenvalues(i) > tol::kRankRel * top) ++density_rank;
  }
  if (density_rank == 1) {
    const ComplexVector x = deig.eigenvectors.col(deig.eigenvalues.size() - 1);
    const SchmidtDecomposition s = schmidt_decompose(x, dims);
    SeparabilityVerdict verdict;
    verdict.dims = dims;
    if (s.rank == 1) {
      verdict.status = Separability::separable;
      verdict.method = "pure state, Schmidt rank one";
      ProductCertificate cert;
      cert.dims = dims;
      cert.weights = {1.0};
      cert.factors.emplace_back(rank_one_density(s.left_vectors.col(0)),
                                rank_one_density(s.right_vectors.col(0)));
      verdict.certificate = std::move(cert);
      return verdict;
    }
    const HermitianEigenSystem pt =
        hermitian_eig(partial_transpose(rho.density(), dims, Factor::B));
    verdict.status = Separability::entangled;
    verdict.method = "pure state, Schmidt rank above one; partial-transpose witness";
    verdict.witness = EntanglementWitness{pt.eigenvalues(0), pt.eigenvectors.col(0)};
    return verdict;
  }

  SeparabilityVerdict verdict = ppt_verdict(rho, dims);
  if (verdict.status != Separability::inconclusive) return verdict;

  const SeparableApproximation approx = separable_approximation(rho, dims);
  verdict.dims = dims;
  verdict.best_distance = approx.distance;
  if (approx.distance <= tol::kSeparableCertificate) {
    verdict.status = Separability::separable;
    verdict.method = "conditional-gradient separable approximation";
    verdict.certificate = approx.certificate;
  } else {
    verdict.status = Separability::inconclusive;
    verdict.method = "partial transpose nonnegative; approximation above certificate threshold";
  }
  return verdict;
}

DisentangleProtocol projective_disentangler(const StateFunctional& rho,
                                            const std::vector<ComplexMatrix>& projections_a,
                                            Dims dims) {
  if (rho.dim() != dims.total()) {
    throw std::invalid_argument("projective_disentangler: state dimension mismatch");
  }
  if (static_cast<int>(projections_a.size()) != dims.a) {
    throw std::invalid_argument(
        "projective_disentangler: need exactly dim(A) rank-one projections");
  }
  ComplexMatrix sum = ComplexMatrix::Zero(dims.a, dims.a);
  for (const ComplexMatrix& p : projections_a) {
    if (p.rows() != dims.a || p.cols() != dims.a) {
      throw std::invalid_argument("projective_disentangler: projection size mismatch");
    }
    if ((p - p.adjoint()).norm() > tol::kSpanMembership ||
        (p * p - p).norm() > tol::kSpanMembership) {
      throw std::invalid_argument("projective_disentangler: input is not a projection");
    }
    if (numerical_rank(p) != 1) {
      throw std::invalid_argument("projective_disentangler: projections must be rank one");
    }
    sum += p;
  }
  if ((sum - ComplexMatrix::Identity(dims.a, dims.a)).norm() > tol::kSpanMembership) {
    throw std::invalid_argument("projective_disentangler: projections must sum to the identity");
  }
  for (std::size_t i = 0; i < projections_a.size(); ++i)
    for (std::size_t j = i + 1; j < projections_a.size(); ++j)
      if ((projections_a[i] * projections_a[j]).norm() > tol::kSpanMembership) {
        throw std::invalid_argument("projective_disentangler: projections must be orthogonal");
      }

  KrausOperation op = lift_local(projections_a, dims, Factor::A,
                                 "nonselective rank-one projective measurement on factor A");
  const UpdateOutcome outcome = update_state(rho, op);
  // Nonselective: acceptance probability is one, the outcome always exists.
  const StateFunctional& output = *outcome.state;

  ProductCertificate cert;
  cert.dims = dims;
  for (const ComplexMatrix& p : projections_a) {
    const ComplexMatrix lifted = tensor_product(p, ComplexMatrix::Identity(dims.b, dims.b));
    ComplexMatrix piece = lifted * rho.density() * lifted;
    piece = (piece + ComplexMatrix(piece.adjoint())) / 2.0;
    const double w = piece.trace().real();
    if (w <= tol::kNullOutcome) continue;
    ComplexMatrix collapsed = partial_trace(piece, dims, Factor::B) / w;
    collapsed = (collapsed + ComplexMatrix(collapsed.adjoint())) / 2.0;
    cert.weights.push_back(w);
    cert.factors.emplace_back(p, collapsed);
  }

  SeparabilityVerdict verdict;
  verdict.status = Separability::separable;
  verdict.method = "projective disentangler: blockwise collapse";
  verdict.dims = dims;
  verdict.best_distance = cert.reconstruction_residual(output.density());
  verdict.certificate = std::move(cert);
  return DisentangleProtocol{std::move(op), output, std::move(verdict)};
}

DisentangleProtocol nondegenerate_disentangler(const StateFunctional& rho,
                                               const ComplexMatrix& observable_a, Dims dims) {
  if (observable_a.rows() != dims.a || observable_a.cols() != dims.a) {
    throw std::invalid_argument("nondegenerate_disentangler: observable size mismatch");
  }
  const HermitianEigenSystem eig = hermitian_eig(observable_a);
  for (Eigen::Index i = 0; i + 1 < eig.eigenvalues.size(); ++i) {
    const double gap = eig.eigenvalues(i + 1) - eig.eigenvalues(i);
    if (gap <= 1e-8) {
      throw std::invalid_argument(
          "nondegenerate_disentangler: degenerate spectrum, eigenvalue gap " +
          std::to_string(gap) + " between levels " + std::to_string(i) + " and " +
          std::to_string(i + 1));
    }
  }
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (std::abs(eig.eigenvalues(i)) <= 1e-8) {
      throw std::invalid_argument(
          "nondegenerate_disentangler: spectrum must exclude zero (eigenvalue " +
          std::to_string(eig.eigenvalues(i)) + ")");
    }
  }
  std::vector<ComplexMatrix> projections;
  projections.reserve(dims.a);
  for (int i = 0; i < dims.a; ++i) {
    projections.push_back(rank_one_density(eig.eigenvectors.col(i)));
  }
  return projective_disentangler(rho, projections, dims);
}

KrausOperation local_preparation_channel(const StateFunctional& target_a, Dims dims) {
  if (target_a.dim() != dims.a) {
    throw std::invalid_argument("local_preparation_channel: target must live on factor A");
  }
  const HermitianEigenSystem eig = hermitian_eig(target_a.density());
  double kept_mass = 0.0;
  std::vector<std::pair<double, ComplexVector>> spectral;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) > tol::kNullOutcome) {
      spectral.emplace_back(eig.eigenvalues(i), eig.eigenvectors.col(i));
      kept_mass += eig.eigenvalues(i);
    }
  }
  if (spectral.empty()) {
    throw std::invalid_argument("local_preparation_channel: target has no spectral mass");
  }

  // K_{ij} = sqrt(lambda_i / kept) |psi_i><e_j| (x) I; the 1/kept rescale makes
  // the channel exactly nonselective even if the target trace is off by slack.
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(spectral.size() * dims.a);
  const ComplexMatrix id_b = ComplexMatrix::Identity(dims.b, dims.b);
  for (const auto& [lambda, psi] : spectral) {
    const double amp = std::sqrt(lambda / kept_mass);
    for (int j = 0; j < dims.a; ++j) {
      ComplexMatrix ketbra = ComplexMatrix::Zero(dims.a, dims.a);
      ketbra.col(j) = amp * psi;
      kraus.push_back(tensor_product(ketbra, id_b));
    }
  }
  return KrausOperation(std::move(kraus),
                        "replace channel: discards factor A and installs the target "
                        "(rank-one substitution; finite-dimensional stand-in for an "
                        "isometry-based preparation)");
}

CertificateTransport transport_certificate(const ProductCertificate& cert,
                                           const std::vector<ComplexMatrix>& kraus_factor,
                                           Factor which) {
  const int fdim = which == Factor::A ? cert.dims.a : cert.dims.b;
  for (const ComplexMatrix& k : kraus_factor) {
    if (k.rows() != fdim || k.cols() != fdim) {
      throw std::invalid_argument("transport_certificate: Kraus size does not match factor");
    }
  }
  if (cert.weights.size() != cert.factors.size()) {
    throw std::invalid_argument("transport_certificate: malformed certificate");
  }

  struct RawTerm {
    double weight;
    ComplexMatrix on_a, on_b;
  };
  std::vector<RawTerm> raw;
  double total = 0.0;
  for (std::size_t t = 0; t < cert.weights.size(); ++t) {
    const ComplexMatrix& acted =
        which == Factor::A ? cert.factors[t].first : cert.factors[t].second;
    for (const ComplexMatrix& k : kraus_factor) {
      ComplexMatrix moved = k * acted * k.adjoint();
      moved = (moved + ComplexMatrix(moved.adjoint())) / 2.0;
      const double w = cert.weights[t] * moved.trace().real();
      total += w;
      if (w <= tol::kNullOutcome) continue;
      moved /= moved.trace().real();
      if (which == Factor::A) {
        raw.push_back({w, std::move(moved), cert.factors[t].second});
      } else {
        raw.push_back({w, cert.factors[t].first, std::move(moved)});
      }
    }
  }

  CertificateTransport out;
  out.acceptance_probability = total;
  if (total <= tol::kNullOutcome) return out;  // null outcome: nothing survives

  ProductCertificate moved;
  moved.dims = cert.dims;
  for (RawTerm& term : raw) {
    moved.weights.push_back(term.weight / total);
    moved.factors.emplace_back(std::move(term.on_a), std::move(term.on_b));
  }
  out.certificate = std::move(moved);
  return out;
}

}  // namespace operon
