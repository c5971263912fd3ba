#include "operon/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace operon {

namespace {

Complex trace_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.adjoint() * b).trace();
}

// Projects cand onto the orthonormal family twice (re-orthogonalization) and
// appends the normalized residual if it is a genuinely new direction.
bool extend_orthonormal(std::vector<ComplexMatrix>& basis, ComplexMatrix cand, double tol) {
  const double scale = cand.norm();
  if (scale < 1e-14) return false;
  cand /= scale;
  for (int pass = 0; pass < 2; ++pass) {
    for (const ComplexMatrix& b : basis) cand -= trace_inner(b, cand) * b;
  }
  const double residual = cand.norm();
  if (residual <= tol) return false;
  basis.push_back(cand / residual);
  return true;
}

std::vector<ComplexMatrix> orthonormal_span(const std::vector<ComplexMatrix>& mats,
                                            double tol) {
  std::vector<ComplexMatrix> basis;
  for (const ComplexMatrix& m : mats) extend_orthonormal(basis, m, tol);
  return basis;
}

// Generators plus adjoints when present, else the basis; always *-closed as a
// spanning family, which commutant computations rely on.
std::vector<ComplexMatrix> star_closed_generating_set(const OperatorAlgebra& r) {
  std::vector<ComplexMatrix> gens;
  if (!r.generators.empty()) {
    for (const ComplexMatrix& g : r.generators) {
      gens.push_back(g);
      gens.push_back(g.adjoint());
    }
  } else {
    gens = r.basis;
  }
  return gens;
}

// Column-major vectorization matching Eigen's memory order.
ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, int dim) {
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

// Orthonormal basis of the nullspace of `m` (relative threshold on singular
// values); the whole domain if m has no rows.
std::vector<ComplexVector> nullspace(const ComplexMatrix& m, int domain_dim) {
  std::vector<ComplexVector> out;
  if (m.rows() == 0) {
    for (int i = 0; i < domain_dim; ++i) {
      ComplexVector e = ComplexVector::Zero(domain_dim);
      e(i) = 1.0;
      out.push_back(e);
    }
    return out;
  }
  // Jacobi over BDC: the divide-and-conquer kernel can emit NaN columns for
  // complex inputs at these sizes, and the inputs here are always small.
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  for (Eigen::Index i = 0; i < svd.matrixV().cols(); ++i) {
    const double s = i < sv.size() ? sv(i) : 0.0;
    if (top == 0.0 || s <= tol::kRankRel * top) {
      out.push_back(svd.matrixV().col(i));
    }
  }
  return out;
}

// Orthonormal basis of the column space of `m`.
ComplexMatrix column_space_basis(const ComplexMatrix& m) {
  if (m.cols() == 0) return ComplexMatrix(m.rows(), 0);
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (top > 0.0 && sv(i) > tol::kRankRel * top) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

void require_ambient(const OperatorAlgebra& r, const ComplexMatrix& m, const char* who) {
  if (m.rows() != r.ambient_dim || m.cols() != r.ambient_dim) {
    throw std::invalid_argument(std::string(who) + ": operator size does not match ambient_dim");
  }
}

// Full matrix algebra on a sorted region of sites, identity on the rest,
// constructed directly: generators are the lifted single-site matrix units,
// the basis the normalized lifted region units.
OperatorAlgebra region_algebra_direct(const std::vector<int>& site_dims,
                                      const std::vector<int>& region) {
  int total = 1;
  for (int d : site_dims) total *= d;

  OperatorAlgebra alg;
  alg.ambient_dim = total;

  auto lift = [&](int site, const ComplexMatrix& op) {
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (int s = 0; s < static_cast<int>(site_dims.size()); ++s) {
      if (s == site) {
        out = tensor_product(out, op);
      } else {
        out = tensor_product(out, ComplexMatrix::Identity(site_dims[s], site_dims[s]));
      }
    }
    return out;
  };

  for (int site : region) {
    const int d = site_dims[site];
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        ComplexMatrix unit = ComplexMatrix::Zero(d, d);
        unit(a, b) = 1.0;
        alg.generators.push_back(lift(site, unit));
      }
  }

  // Region basis: one element per pair of region multi-indices.
  int region_dim = 1;
  for (int site : region) region_dim *= site_dims[site];
  const double rest = static_cast<double>(total) / region_dim;

  auto region_unit = [&](int ridx, int cidx) {
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    // Decode both multi-indices site by site (most significant first).
    std::vector<int> rdig(region.size()), cdig(region.size());
    int rr = ridx, cc = cidx;
    for (int t = static_cast<int>(region.size()) - 1; t >= 0; --t) {
      const int d = site_dims[region[t]];
      rdig[t] = rr % d;
      cdig[t] = cc % d;
      rr /= d;
      cc /= d;
    }
    int pos = 0;
    for (int s = 0; s < static_cast<int>(site_dims.size()); ++s) {
      const int d = site_dims[s];
      if (pos < static_cast<int>(region.size()) && region[pos] == s) {
        ComplexMatrix unit = ComplexMatrix::Zero(d, d);
        unit(rdig[pos], cdig[pos]) = 1.0;
        out = tensor_product(out, unit);
        ++pos;
      } else {
        out = tensor_product(out, ComplexMatrix::Identity(d, d));
      }
    }
    return out;
  };

  alg.basis.reserve(static_cast<std::size_t>(region_dim) * region_dim);
  for (int ridx = 0; ridx < region_dim; ++ridx)
    for (int cidx = 0; cidx < region_dim; ++cidx)
      alg.basis.push_back(region_unit(ridx, cidx) / std::sqrt(rest));

  return alg;
}

}  // namespace

ComplexMatrix OperatorAlgebra::project(const ComplexMatrix& m) const {
  require_ambient(*this, m, "OperatorAlgebra::project");
  ComplexMatrix out = ComplexMatrix::Zero(ambient_dim, ambient_dim);
  for (const ComplexMatrix& b : basis) out += trace_inner(b, m) * b;
  return out;
}

double OperatorAlgebra::membership_residual(const ComplexMatrix& m) const {
  return (m - project(m)).norm();
}

bool OperatorAlgebra::contains(const ComplexMatrix& m, double tol) const {
  return membership_residual(m) <= tol * std::max(1.0, m.norm());
}

OperatorAlgebra generate_algebra(std::vector<ComplexMatrix> generators, int ambient_dim) {
  if (ambient_dim <= 0) {
    throw std::invalid_argument("generate_algebra: ambient_dim must be positive");
  }
  for (const ComplexMatrix& g : generators) {
    if (g.rows() != ambient_dim || g.cols() != ambient_dim) {
      throw std::invalid_argument("generate_algebra: generator size does not match ambient_dim");
    }
  }

  OperatorAlgebra alg;
  alg.ambient_dim = ambient_dim;
  alg.generators = std::move(generators);

  std::vector<ComplexMatrix> seed;
  seed.push_back(ComplexMatrix::Identity(ambient_dim, ambient_dim));
  for (const ComplexMatrix& g : alg.generators) {
    seed.push_back(g);
    seed.push_back(g.adjoint());
  }
  alg.basis = orthonormal_span(seed, tol::kSpanMembership);

  // Close under products and adjoints; the span dimension is bounded by
  // ambient_dim^2, so this terminates.
  const int max_dim = ambient_dim * ambient_dim;
  bool grew = true;
  int rounds = 0;
  while (grew && static_cast<int>(alg.basis.size()) < max_dim && rounds++ <= max_dim + 2) {
    grew = false;
    const std::vector<ComplexMatrix> snapshot = alg.basis;
    for (const ComplexMatrix& b : snapshot) {
      if (extend_orthonormal(alg.basis, b.adjoint(), tol::kSpanMembership)) grew = true;
    }
    for (const ComplexMatrix& p : snapshot) {
      for (const ComplexMatrix& q : snapshot) {
        if (extend_orthonormal(alg.basis, p * q, tol::kSpanMembership)) grew = true;
        if (static_cast<int>(alg.basis.size()) >= max_dim) break;
      }
      if (static_cast<int>(alg.basis.size()) >= max_dim) break;
    }
  }
  return alg;
}

OperatorAlgebra full_algebra(int dim) {
  if (dim <= 0) throw std::invalid_argument("full_algebra: dim must be positive");
  return region_algebra_direct({dim}, {0});
}

OperatorAlgebra trivial_algebra(int dim) {
  if (dim <= 0) throw std::invalid_argument("trivial_algebra: dim must be positive");
  OperatorAlgebra alg;
  alg.ambient_dim = dim;
  alg.basis.push_back(ComplexMatrix::Identity(dim, dim) / std::sqrt(static_cast<double>(dim)));
  return alg;
}

OperatorAlgebra diagonal_algebra(int dim) {
  if (dim <= 0) throw std::invalid_argument("diagonal_algebra: dim must be positive");
  OperatorAlgebra alg;
  alg.ambient_dim = dim;
  for (int i = 0; i < dim; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
    e(i, i) = 1.0;
    alg.generators.push_back(e);
    alg.basis.push_back(e);
  }
  return alg;
}

OperatorAlgebra factor_algebra(Dims dims, Factor which) {
  if (dims.a <= 0 || dims.b <= 0) {
    throw std::invalid_argument("factor_algebra: dims must be positive");
  }
  return region_algebra_direct({dims.a, dims.b}, {which == Factor::A ? 0 : 1});
}

OperatorAlgebra commutant(const OperatorAlgebra& r) {
  if (r.ambient_dim <= 0) throw std::invalid_argument("commutant: bad ambient_dim");
  const int d = r.ambient_dim;
  const int d2 = d * d;
  const std::vector<ComplexMatrix> gens = star_closed_generating_set(r);

  // vec(GX - XG) = (I (x) G - G^T (x) I) vec(X) in column-major vectorization.
  ComplexMatrix stacked(static_cast<Eigen::Index>(gens.size()) * d2, d2);
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  for (std::size_t k = 0; k < gens.size(); ++k) {
    stacked.middleRows(static_cast<Eigen::Index>(k) * d2, d2) =
        tensor_product(id, gens[k]) - tensor_product(gens[k].transpose(), id);
  }

  OperatorAlgebra out;
  out.ambient_dim = d;
  for (const ComplexVector& v : nullspace(gens.empty() ? ComplexMatrix(0, d2) : stacked, d2)) {
    out.basis.push_back(unvec(v, d));
  }
  out.generators = out.basis;
  return out;
}

CenterDecomposition center_and_factor(const OperatorAlgebra& r) {
  const int m = r.dimension();
  const std::vector<ComplexMatrix> gens = star_closed_generating_set(r);

  // Unknown X = sum_j a_j B_j in span(r); require [X, G] = 0 for the
  // *-closed generating family. Column j of each block is vec([B_j, G]).
  ComplexMatrix stacked(static_cast<Eigen::Index>(gens.size()) * r.ambient_dim * r.ambient_dim, m);
  for (std::size_t k = 0; k < gens.size(); ++k) {
    for (int j = 0; j < m; ++j) {
      const ComplexMatrix comm = r.basis[j] * gens[k] - gens[k] * r.basis[j];
      stacked.block(static_cast<Eigen::Index>(k) * r.ambient_dim * r.ambient_dim, j,
                    r.ambient_dim * r.ambient_dim, 1) = vec(comm);
    }
  }

  CenterDecomposition out;
  out.center.ambient_dim = r.ambient_dim;
  for (const ComplexVector& coeff :
       nullspace(gens.empty() ? ComplexMatrix(0, m) : stacked, m)) {
    ComplexMatrix x = ComplexMatrix::Zero(r.ambient_dim, r.ambient_dim);
    for (int j = 0; j < m; ++j) x += coeff(j) * r.basis[j];
    out.center.basis.push_back(x);
  }
  out.center.generators = out.center.basis;
  out.is_factor = out.center.dimension() == 1;
  return out;
}

bool is_abelian(const OperatorAlgebra& r, double tol) {
  for (std::size_t i = 0; i < r.basis.size(); ++i)
    for (std::size_t j = i + 1; j < r.basis.size(); ++j)
      if ((r.basis[i] * r.basis[j] - r.basis[j] * r.basis[i]).norm() > tol) return false;
  return true;
}

bool same_span(const OperatorAlgebra& r, const OperatorAlgebra& s, double tol) {
  if (r.ambient_dim != s.ambient_dim || r.dimension() != s.dimension()) return false;
  for (const ComplexMatrix& b : r.basis)
    if (!s.contains(b, tol)) return false;
  for (const ComplexMatrix& b : s.basis)
    if (!r.contains(b, tol)) return false;
  return true;
}

namespace {

ComplexMatrix orbit_matrix(const ComplexVector& x, const OperatorAlgebra& r) {
  if (x.size() != r.ambient_dim) {
    throw std::invalid_argument("orbit: vector size does not match ambient_dim");
  }
  ComplexMatrix orbit(r.ambient_dim, r.dimension());
  for (int k = 0; k < r.dimension(); ++k) orbit.col(k) = r.basis[k] * x;
  return orbit;
}

}  // namespace

bool is_cyclic_vector(const ComplexVector& x, const OperatorAlgebra& r) {
  return numerical_rank(orbit_matrix(x, r)) == r.ambient_dim;
}

bool is_separating_vector(const ComplexVector& x, const OperatorAlgebra& r) {
  // A x = 0 for A = sum a_k B_k iff the orbit matrix has a nullspace.
  return numerical_rank(orbit_matrix(x, r)) == r.dimension();
}

std::optional<std::pair<Dims, Factor>> tensor_factor_form(const OperatorAlgebra& r) {
  const int d = r.ambient_dim;
  for (int a = 1; a <= d; ++a) {
    if (d % a != 0) continue;
    const int b = d / a;
    const Dims dims{a, b};
    if (r.dimension() == a * a) {
      bool all = true;
      for (int i = 0; i < a && all; ++i)
        for (int k = 0; k < a && all; ++k) {
          ComplexMatrix unit = ComplexMatrix::Zero(a, a);
          unit(i, k) = 1.0;
          all = r.contains(tensor_product(unit, ComplexMatrix::Identity(b, b)));
        }
      if (all) return std::make_pair(dims, Factor::A);
    }
    if (r.dimension() == b * b) {
      bool all = true;
      for (int j = 0; j < b && all; ++j)
        for (int l = 0; l < b && all; ++l) {
          ComplexMatrix unit = ComplexMatrix::Zero(b, b);
          unit(j, l) = 1.0;
          all = r.contains(tensor_product(ComplexMatrix::Identity(a, a), unit));
        }
      if (all) return std::make_pair(dims, Factor::B);
    }
  }
  return std::nullopt;
}

ComplexMatrix support_projection(const StateFunctional& rho, const OperatorAlgebra& r) {
  require_ambient(r, rho.density(), "support_projection");
  const OperatorAlgebra comm = commutant(r);

  const HermitianEigenSystem eig = hermitian_eig(rho.density());
  const double top = eig.eigenvalues.maxCoeff();
  std::vector<int> range_cols;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) > tol::kRankRel * top) range_cols.push_back(static_cast<int>(i));
  }

  // Span of the commutant orbit of the density's range; its projection lies
  // in r'' = r and is the smallest projection of r with expectation one.
  ComplexMatrix columns(r.ambient_dim,
                        static_cast<Eigen::Index>(comm.dimension()) * range_cols.size());
  Eigen::Index c = 0;
  for (const ComplexMatrix& b : comm.basis)
    for (int idx : range_cols) columns.col(c++) = b * eig.eigenvectors.col(idx);

  const ComplexMatrix q = column_space_basis(columns);
  ComplexMatrix s = q * q.adjoint();
  return (s + ComplexMatrix(s.adjoint())) / 2.0;
}

std::vector<ComplexMatrix> left_ideal_basis(const StateFunctional& rho,
                                            const OperatorAlgebra& r) {
  require_ambient(r, rho.density(), "left_ideal_basis");
  const int m = r.dimension();
  ComplexMatrix gram(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) gram(j, k) = rho(ComplexMatrix(r.basis[j].adjoint() * r.basis[k]));
  gram = (gram + ComplexMatrix(gram.adjoint())) / 2.0;

  const HermitianEigenSystem eig = hermitian_eig(gram);
  std::vector<ComplexMatrix> ideal;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) <= tol::kIdealNull) {
      ComplexMatrix a = ComplexMatrix::Zero(r.ambient_dim, r.ambient_dim);
      for (int j = 0; j < m; ++j) a += eig.eigenvectors(j, i) * r.basis[j];
      ideal.push_back(a);
    }
  }
  return ideal;
}

AbelianProjectionCheck is_abelian_projection(const ComplexMatrix& p, const OperatorAlgebra& r) {
  require_ambient(r, p, "is_abelian_projection");
  const double scale = std::max(1.0, p.norm());
  if (p.norm() <= tol::kSpanMembership) {
    throw std::invalid_argument("is_abelian_projection: zero projection");
  }
  if ((p - p.adjoint()).norm() > tol::kSpanMembership * scale) {
    throw std::invalid_argument("is_abelian_projection: not self-adjoint");
  }
  if ((p * p - p).norm() > tol::kSpanMembership * scale) {
    throw std::invalid_argument("is_abelian_projection: not idempotent");
  }
  if (!r.contains(p)) {
    throw std::invalid_argument("is_abelian_projection: projection is not in the algebra");
  }

  std::vector<ComplexMatrix> corner;
  corner.reserve(r.basis.size());
  for (const ComplexMatrix& b : r.basis) corner.push_back(p * b * p);

  AbelianProjectionCheck check;
  check.abelian = true;
  for (std::size_t i = 0; i < corner.size() && check.abelian; ++i)
    for (std::size_t j = i + 1; j < corner.size(); ++j) {
      if ((corner[i] * corner[j] - corner[j] * corner[i]).norm() > tol::kSpanMembership) {
        check.abelian = false;
        break;
      }
    }

  ComplexMatrix stacked(p.size(), static_cast<Eigen::Index>(corner.size()));
  for (std::size_t k = 0; k < corner.size(); ++k) stacked.col(static_cast<Eigen::Index>(k)) = vec(corner[k]);
  check.atom = numerical_rank(stacked) == 1;
  return check;
}

LatticeNet::LatticeNet(std::vector<int> site_dims) : site_dims_(std::move(site_dims)) {
  if (site_dims_.empty()) throw std::invalid_argument("LatticeNet: no sites");
  for (int d : site_dims_) {
    if (d <= 0) throw std::invalid_argument("LatticeNet: site dimensions must be positive");
    total_dim_ *= d;
  }
}

const OperatorAlgebra& LatticeNet::region_algebra(const std::vector<int>& region) const {
  std::vector<int> key(region);
  std::sort(key.begin(), key.end());
  key.erase(std::unique(key.begin(), key.end()), key.end());
  for (int site : key) {
    if (site < 0 || site >= static_cast<int>(site_dims_.size())) {
      throw std::invalid_argument("LatticeNet: region references unknown site " +
                                  std::to_string(site));
    }
  }
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    OperatorAlgebra alg =
        key.empty() ? trivial_algebra(total_dim_) : region_algebra_direct(site_dims_, key);
    it = cache_.emplace(std::move(key), std::move(alg)).first;
  }
  return it->second;
}

OperatorAlgebra net_algebra(const LatticeNet& net, const std::vector<int>& region) {
  return net.region_algebra(region);
}

}  // namespace operon
