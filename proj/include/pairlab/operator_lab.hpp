#pragma once

// Finite-dimensional operator engine: unital matrix algebras stored as orthonormal
// spans, commutants, Murray-von Neumann coupling constants and cyclicity certificates.
//
// An algebra on C^N is kept as an N^2 x d matrix whose columns are vec(B_i)/sqrt(N)
// for a basis B_i orthonormal under <A,B> = Tr(A^* B)/N, so span arithmetic is plain
// Euclidean linear algebra on the columns.

#include "pairlab/errors.hpp"
#include "pairlab/measure_systems.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace pairlab {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ComplexMatrix = DenseMatrix<std::complex<double>>;
using ComplexVector = DenseVector<std::complex<double>>;

inline constexpr Eigen::Index kDefaultMaxDim = 200;
inline constexpr double kNewDirectionTol = 1e-9;
inline constexpr double kSpanTol = 1e-8;
inline constexpr double kRankTol = 1e-8;
inline constexpr std::uint64_t kDefaultSeed = 20240229;

namespace detail {

template <typename Scalar>
Scalar random_scalar(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
    double re = normal(rng);
    double im = normal(rng);
    return Scalar(re, im);
  } else {
    return Scalar(normal(rng));
  }
}

inline void check_dim(Eigen::Index n, Eigen::Index max_dim) {
  if (n > max_dim) {
    throw DimensionCapError("dimension " + std::to_string(n) + " exceeds the cap of " + std::to_string(max_dim));
  }
}

}  // namespace detail

/// Rotation-invariant random unit vector (Gaussian entries, normalized).
template <typename Scalar = std::complex<double>>
DenseVector<Scalar> random_unit_vector(Eigen::Index n, std::mt19937_64& rng) {
  DenseVector<Scalar> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = detail::random_scalar<Scalar>(rng);
  return v / v.norm();
}

template <typename Scalar = std::complex<double>>
DenseMatrix<Scalar> random_matrix(Eigen::Index n, std::mt19937_64& rng) {
  DenseMatrix<Scalar> m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = detail::random_scalar<Scalar>(rng);
  return m;
}

/// Numerical rank with relative threshold tol * sigma_max.
template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived>& m, double tol = kRankTol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<typename Derived::PlainObject> svd(m.derived());
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0) return 0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++rank;
  return rank;
}

/// A linear span of N x N matrices with an orthonormal basis; algebras are spans closed under products.
template <typename Scalar>
class MatrixAlgebra {
 public:
  using Matrix = DenseMatrix<Scalar>;
  using Vector = DenseVector<Scalar>;
  using Real = typename Eigen::NumTraits<Scalar>::Real;

  explicit MatrixAlgebra(Eigen::Index dim) : dim_(dim), coords_(dim * dim, 0) {}

  Eigen::Index dim() const { return dim_; }
  /// Number of basis elements.
  Eigen::Index size() const { return coords_.cols(); }
  const Matrix& coordinates() const { return coords_; }
  const std::vector<std::string>& generator_log() const { return log_; }
  void log(std::string entry) { log_.push_back(std::move(entry)); }

  /// Basis element i, normalized so that Tr(B^* B)/N = 1.
  Matrix element(Eigen::Index i) const {
    return Eigen::Map<const Matrix>(coords_.col(i).data(), dim_, dim_) * std::sqrt(Real(dim_));
  }

  /// Distance of m from the span relative to |m|; zero for m = 0.
  Real residual(const Matrix& m) const {
    Eigen::Map<const Vector> v(m.data(), m.size());
    const Real norm = v.norm();
    if (norm == Real(0)) return Real(0);
    if (size() == 0) return Real(1);
    Vector w = v - coords_ * (coords_.adjoint() * v);
    return w.norm() / norm;
  }

  bool contains(const Matrix& m, Real tol = kSpanTol) const { return residual(m) <= tol; }

  /// Orthogonal projection of m onto the span.
  Matrix project(const Matrix& m) const {
    Eigen::Map<const Vector> v(m.data(), m.size());
    Vector p = coords_ * (coords_.adjoint() * v);
    return Eigen::Map<const Matrix>(p.data(), dim_, dim_);
  }

  /// Appends the normalized component of m orthogonal to the span when its relative size exceeds tol.
  bool try_extend(const Matrix& m, Real tol = kNewDirectionTol) {
    if (m.rows() != dim_ || m.cols() != dim_) throw StructuralError("matrix dimension mismatch");
    Eigen::Map<const Vector> v(m.data(), m.size());
    const Real norm = v.norm();
    if (norm == Real(0)) return false;
    Vector w = v;
    if (size() > 0) {
      w -= coords_ * (coords_.adjoint() * w);
      w -= coords_ * (coords_.adjoint() * w);
    }
    const Real rest = w.norm();
    if (rest <= tol * norm) return false;
    if (size() >= dim_ * dim_) return false;
    coords_.conservativeResize(Eigen::NoChange, size() + 1);
    coords_.col(size() - 1) = w / rest;
    return true;
  }

 private:
  Eigen::Index dim_;
  Matrix coords_;
  std::vector<std::string> log_;
};

using ComplexAlgebra = MatrixAlgebra<std::complex<double>>;

template <typename Scalar>
MatrixAlgebra<Scalar> span_of(const std::vector<DenseMatrix<Scalar>>& matrices, Eigen::Index dim) {
  MatrixAlgebra<Scalar> span(dim);
  for (const auto& m : matrices) span.try_extend(m);
  return span;
}

/// Smallest unital algebra containing the generators.
///
/// The span starts at {I, generators} and grows by left-multiplying every new basis
/// element by every generator until no product leaves the span (relative residual
/// 1e-9).  A span containing I and stable under left multiplication by the generators
/// contains every word in them, so it is the generated algebra.
template <typename Scalar>
MatrixAlgebra<Scalar> algebra_closure(const std::vector<DenseMatrix<Scalar>>& generators,
                                      Eigen::Index max_dim = kDefaultMaxDim) {
  if (generators.empty()) throw StructuralError("algebra_closure needs at least one generator");
  const Eigen::Index n = generators.front().rows();
  for (const auto& g : generators)
    if (g.rows() != n || g.cols() != n) throw StructuralError("generators must be square with a common dimension");
  detail::check_dim(n, max_dim);

  MatrixAlgebra<Scalar> alg(n);
  alg.try_extend(DenseMatrix<Scalar>::Identity(n, n));
  for (const auto& g : generators) alg.try_extend(g);
  alg.log("closure of " + std::to_string(generators.size()) + " generators");

  std::deque<Eigen::Index> pending;
  for (Eigen::Index i = 0; i < alg.size(); ++i) pending.push_back(i);
  while (!pending.empty() && alg.size() < n * n) {
    const DenseMatrix<Scalar> b = alg.element(pending.front());
    pending.pop_front();
    for (const auto& g : generators) {
      if (alg.try_extend(g * b)) pending.push_back(alg.size() - 1);
    }
  }
  return alg;
}

/// Largest relative residual of a basis product outside the span (all pairs).
template <typename Scalar>
typename MatrixAlgebra<Scalar>::Real closure_defect(const MatrixAlgebra<Scalar>& alg) {
  typename MatrixAlgebra<Scalar>::Real worst(0);
  std::vector<DenseMatrix<Scalar>> basis;
  for (Eigen::Index i = 0; i < alg.size(); ++i) basis.push_back(alg.element(i));
  for (const auto& a : basis)
    for (const auto& b : basis) worst = std::max(worst, alg.residual(a * b));
  return worst;
}

/// Closure test on random elements of the span; a bilinear defect that vanishes at
/// generic points vanishes identically.
template <typename Scalar>
bool is_closed_sampled(const MatrixAlgebra<Scalar>& alg, std::uint64_t seed = kDefaultSeed, int samples = 3,
                       double tol = kSpanTol) {
  std::mt19937_64 rng(seed);
  auto random_element = [&] {
    DenseVector<Scalar> c(alg.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = detail::random_scalar<Scalar>(rng);
    DenseVector<Scalar> v = alg.coordinates() * c;
    return DenseMatrix<Scalar>(Eigen::Map<const DenseMatrix<Scalar>>(v.data(), alg.dim(), alg.dim()));
  };
  for (int k = 0; k < samples; ++k) {
    if (alg.residual(random_element() * random_element()) > tol) return false;
  }
  return true;
}

template <typename Scalar>
bool is_star_closed(const MatrixAlgebra<Scalar>& alg, double tol = kSpanTol) {
  for (Eigen::Index i = 0; i < alg.size(); ++i)
    if (alg.residual(alg.element(i).adjoint()) > tol) return false;
  return true;
}

template <typename Scalar>
bool is_abelian(const MatrixAlgebra<Scalar>& alg, double tol = 1e-10) {
  for (Eigen::Index i = 0; i < alg.size(); ++i) {
    const auto a = alg.element(i);
    for (Eigen::Index j = i + 1; j < alg.size(); ++j) {
      const auto b = alg.element(j);
      if ((a * b - b * a).norm() > tol * std::sqrt(double(alg.dim()))) return false;
    }
  }
  return true;
}

/// Largest principal-angle sine between two spans; 0 when they coincide.
template <typename Scalar>
double span_distance(const MatrixAlgebra<Scalar>& a, const MatrixAlgebra<Scalar>& b) {
  if (a.dim() != b.dim()) throw StructuralError("span_distance: ambient dimension mismatch");
  if (a.size() != b.size()) return 1.0;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) worst = std::max(worst, double(a.residual(b.element(i))));
  for (Eigen::Index i = 0; i < a.size(); ++i) worst = std::max(worst, double(b.residual(a.element(i))));
  return worst;
}

template <typename Scalar>
bool same_span(const MatrixAlgebra<Scalar>& a, const MatrixAlgebra<Scalar>& b, double tol = kSpanTol) {
  return span_distance(a, b) <= tol;
}

/// Intersection of two spans: directions whose principal cosine is 1 within tol.
template <typename Scalar>
MatrixAlgebra<Scalar> intersect(const MatrixAlgebra<Scalar>& a, const MatrixAlgebra<Scalar>& b,
                                double tol = kSpanTol) {
  if (a.dim() != b.dim()) throw StructuralError("intersect: ambient dimension mismatch");
  MatrixAlgebra<Scalar> out(a.dim());
  if (a.size() == 0 || b.size() == 0) return out;
  DenseMatrix<Scalar> overlap = a.coordinates().adjoint() * b.coordinates();
  Eigen::JacobiSVD<DenseMatrix<Scalar>> svd(overlap, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) < 1.0 - tol) break;
    DenseVector<Scalar> v = a.coordinates() * svd.matrixU().col(k);
    out.try_extend(Eigen::Map<const DenseMatrix<Scalar>>(v.data(), a.dim(), a.dim()));
  }
  out.log("intersection");
  return out;
}

/// Commutant by solving [X, B_i] = 0 directly: null space of sum_i C_i^* C_i with
/// C_i = B_i^T (x) I - I (x) B_i acting on vec(X).  Works for any span; cost grows as N^6.
template <typename Scalar>
MatrixAlgebra<Scalar> commutant_by_nullspace(const MatrixAlgebra<Scalar>& alg, Eigen::Index max_dim = 24) {
  const Eigen::Index n = alg.dim();
  detail::check_dim(n, max_dim);
  const Eigen::Index n2 = n * n;
  DenseMatrix<Scalar> gram = DenseMatrix<Scalar>::Zero(n2, n2);
  const DenseMatrix<Scalar> id = DenseMatrix<Scalar>::Identity(n, n);
  for (Eigen::Index i = 0; i < alg.size(); ++i) {
    const DenseMatrix<Scalar> b = alg.element(i);
    DenseMatrix<Scalar> c(n2, n2);
    // column-major vec: vec(XB) = (B^T (x) I) vec X, vec(BX) = (I (x) B) vec X
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = 0; q < n; ++q) {
        c.block(p * n, q * n, n, n) = b(q, p) * id;
        if (p == q) c.block(p * n, q * n, n, n) -= b;
      }
    gram.noalias() += c.adjoint() * c;
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> eig(gram);
  const auto& values = eig.eigenvalues();
  const double top = std::max(1.0, double(values(n2 - 1)));
  MatrixAlgebra<Scalar> out(n);
  for (Eigen::Index k = 0; k < n2; ++k) {
    // eigenvalues are squared singular values, so compare on that scale
    if (double(values(k)) > kSpanTol * top) break;
    DenseVector<Scalar> v = eig.eigenvectors().col(k);
    out.try_extend(Eigen::Map<const DenseMatrix<Scalar>>(v.data(), n, n));
  }
  out.log("commutant (null space)");
  return out;
}

/// Commutant of a unital *-algebra as the range of X -> sum_i B_i X B_i^*.
///
/// For an orthonormal basis of a unital *-algebra A this map lands in A' and restricts
/// to multiplication by an invertible central element on A', so its range is A'.  The
/// range is sampled with seeded random X until two consecutive samples add nothing.
template <typename Scalar>
MatrixAlgebra<Scalar> commutant_by_averaging(const MatrixAlgebra<Scalar>& alg, std::uint64_t seed = kDefaultSeed) {
  const Eigen::Index n = alg.dim();
  std::vector<DenseMatrix<Scalar>> basis;
  for (Eigen::Index i = 0; i < alg.size(); ++i) basis.push_back(alg.element(i));
  std::mt19937_64 rng(seed);
  MatrixAlgebra<Scalar> out(n);
  int misses = 0;
  while (misses < 2 && out.size() < n * n) {
    const DenseMatrix<Scalar> x = random_matrix<Scalar>(n, rng);
    DenseMatrix<Scalar> y = DenseMatrix<Scalar>::Zero(n, n);
    for (const auto& b : basis) y.noalias() += b * x * b.adjoint();
    misses = out.try_extend(y, kSpanTol) ? 0 : misses + 1;
  }
  out.log("commutant (averaging)");
  return out;
}

/// B' for a span B: averaging route for *-closed algebras, null-space route otherwise.
/// The result is checked to be a unital algebra commuting with B.
template <typename Scalar>
MatrixAlgebra<Scalar> commutant(const MatrixAlgebra<Scalar>& alg, Eigen::Index max_dim = kDefaultMaxDim,
                                std::uint64_t seed = kDefaultSeed) {
  detail::check_dim(alg.dim(), max_dim);
  MatrixAlgebra<Scalar> out = is_star_closed(alg) && alg.contains(DenseMatrix<Scalar>::Identity(alg.dim(), alg.dim()))
                                  ? commutant_by_averaging(alg, seed)
                                  : commutant_by_nullspace(alg, max_dim);
  if (!is_closed_sampled(out, seed)) throw ContractViolation("computed commutant is not closed under products");
  return out;
}

/// A non-scalar central element of the algebra, if any.
template <typename Scalar>
std::optional<DenseMatrix<Scalar>> central_witness(const MatrixAlgebra<Scalar>& alg,
                                                   const MatrixAlgebra<Scalar>& alg_commutant) {
  MatrixAlgebra<Scalar> center = intersect(alg, alg_commutant);
  const DenseMatrix<Scalar> id = DenseMatrix<Scalar>::Identity(alg.dim(), alg.dim());
  for (Eigen::Index i = 0; i < center.size(); ++i) {
    DenseMatrix<Scalar> c = center.element(i);
    const Scalar mean = c.trace() / Scalar(double(alg.dim()));
    DenseMatrix<Scalar> traceless = c - mean * id;
    if (traceless.norm() > 1e-6 * c.norm()) return traceless;
  }
  return std::nullopt;
}

template <typename Scalar>
bool is_factor(const MatrixAlgebra<Scalar>& alg) {
  return !central_witness(alg, commutant(alg)).has_value();
}

/// Dimension of span{B_i v}.
template <typename Scalar>
Eigen::Index orbit_rank(const MatrixAlgebra<Scalar>& alg, const DenseVector<Scalar>& v) {
  DenseMatrix<Scalar> cols(alg.dim(), alg.size());
  for (Eigen::Index i = 0; i < alg.size(); ++i) cols.col(i) = alg.element(i) * v;
  return numerical_rank(cols);
}

struct CouplingCertificate {
  double lambda = 0.0;
  /// dim span(B'h) and dim span(Bh) for the modal witness; lambda is their ratio.
  Eigen::Index commutant_orbit_rank = 0;
  Eigen::Index algebra_orbit_rank = 0;
  Eigen::Index dim = 0;
  std::vector<ComplexVector> witness_vectors;
  std::vector<double> witness_lambdas;
  double spread = 0.0;
  bool cyclic_exists = false;
  bool separating_exists = false;
  bool bicyclic_exists = false;
  /// Flags agree with direct span-rank tests on the witnesses.
  bool flags_confirmed = false;
  std::uint64_t seed = 0;
};

namespace detail {

template <typename Scalar>
void check_factor(const MatrixAlgebra<Scalar>& alg, const MatrixAlgebra<Scalar>& alg_commutant) {
  if (auto w = central_witness(alg, alg_commutant)) {
    std::ostringstream msg;
    msg << "not a factor: central non-scalar element with diagonal [";
    for (Eigen::Index i = 0; i < std::min<Eigen::Index>(w->rows(), 8); ++i) msg << (i ? ", " : "") << (*w)(i, i);
    msg << (w->rows() > 8 ? ", ...]" : "]");
    throw NotAFactorError(msg.str());
  }
}

}  // namespace detail

/// Murray-von Neumann coupling constant lambda(B) = tr(P_h)/tr'(P'_h).
///
/// P_h projects onto span(B'h) and lies in B; P'_h projects onto span(Bh) and lies in B'.
/// Both traces are Tr/N, the normalized trace of a finite-dimensional factor, so
/// lambda = dim span(B'h) / dim span(Bh).  Given explicit witnesses, those are used;
/// otherwise `witnesses` random unit vectors are drawn from `seed` and the modal value kept.
template <typename Scalar>
CouplingCertificate mvn_coupling(const MatrixAlgebra<Scalar>& alg, const std::vector<DenseVector<Scalar>>& given = {},
                                 std::uint64_t seed = kDefaultSeed, int witnesses = 5,
                                 Eigen::Index max_dim = kDefaultMaxDim) {
  const MatrixAlgebra<Scalar> comm = commutant(alg, max_dim, seed);
  detail::check_factor(alg, comm);
  const Eigen::Index n = alg.dim();

  std::vector<DenseVector<Scalar>> vectors = given;
  if (vectors.empty()) {
    std::mt19937_64 rng(seed);
    for (int k = 0; k < std::max(witnesses, 5); ++k) vectors.push_back(random_unit_vector<Scalar>(n, rng));
  }

  CouplingCertificate cert;
  cert.dim = n;
  cert.seed = seed;
  std::map<std::pair<Eigen::Index, Eigen::Index>, int> tally;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> ranks;
  for (const auto& v : vectors) {
    if (v.norm() == 0) throw DegenerateInputError("witness vector is zero");
    const DenseVector<Scalar> h = v / v.norm();
    const auto r = std::make_pair(orbit_rank(comm, h), orbit_rank(alg, h));
    ranks.push_back(r);
    ++tally[r];
    cert.witness_lambdas.push_back(double(r.first) / double(r.second));
    cert.witness_vectors.push_back(h.template cast<std::complex<double>>());
  }
  auto modal = std::max_element(tally.begin(), tally.end(),
                                [](const auto& a, const auto& b) { return a.second < b.second; });
  cert.commutant_orbit_rank = modal->first.first;
  cert.algebra_orbit_rank = modal->first.second;
  cert.lambda = double(cert.commutant_orbit_rank) / double(cert.algebra_orbit_rank);
  for (double l : cert.witness_lambdas) cert.spread = std::max(cert.spread, std::abs(l - cert.lambda) / cert.lambda);

  const Eigen::Index num = cert.commutant_orbit_rank;
  const Eigen::Index den = cert.algebra_orbit_rank;
  cert.cyclic_exists = num <= den;
  cert.separating_exists = num >= den;
  cert.bicyclic_exists = num == den;

  bool cyclic_seen = false;
  bool separating_seen = false;
  for (const auto& r : ranks) {
    cyclic_seen = cyclic_seen || r.second == n;
    separating_seen = separating_seen || r.first == n;
  }
  cert.flags_confirmed = cyclic_seen == cert.cyclic_exists && separating_seen == cert.separating_exists;
  return cert;
}

struct BicyclicReport {
  bool cyclic_for_algebra = false;
  bool cyclic_for_commutant = false;
};

template <typename Scalar>
BicyclicReport bicyclic_witness(const MatrixAlgebra<Scalar>& alg, const DenseVector<Scalar>& v,
                                Eigen::Index max_dim = kDefaultMaxDim) {
  if (v.norm() == 0) throw DegenerateInputError("bicyclic_witness: zero vector");
  const MatrixAlgebra<Scalar> comm = commutant(alg, max_dim);
  return BicyclicReport{orbit_rank(alg, v) == alg.dim(), orbit_rank(comm, v) == alg.dim()};
}

template <typename Scalar>
struct IrreducibilityReport {
  bool irreducible = false;
  Eigen::Index commutant_dim = 0;
  /// Traceless element of the joint commutant when reducible.
  std::optional<DenseMatrix<Scalar>> witness;
};

/// Irreducible iff the joint commutant of all algebras is the scalars.
template <typename Scalar>
IrreducibilityReport<Scalar> is_irreducible(const std::vector<MatrixAlgebra<Scalar>>& algebras,
                                            Eigen::Index max_dim = kDefaultMaxDim) {
  if (algebras.empty()) throw StructuralError("is_irreducible needs at least one algebra");
  const Eigen::Index n = algebras.front().dim();
  MatrixAlgebra<Scalar> joint = commutant(algebras.front(), max_dim);
  for (std::size_t k = 1; k < algebras.size(); ++k) {
    if (algebras[k].dim() != n) throw StructuralError("is_irreducible: ambient dimension mismatch");
    joint = intersect(joint, commutant(algebras[k], max_dim));
  }
  IrreducibilityReport<Scalar> report;
  report.commutant_dim = joint.size();
  report.irreducible = joint.size() == 1;
  if (!report.irreducible) {
    const DenseMatrix<Scalar> id = DenseMatrix<Scalar>::Identity(n, n);
    for (Eigen::Index i = 0; i < joint.size(); ++i) {
      DenseMatrix<Scalar> c = joint.element(i);
      DenseMatrix<Scalar> traceless = c - (c.trace() / Scalar(double(n))) * id;
      if (traceless.norm() > 1e-6 * c.norm()) {
        report.witness = traceless;
        break;
      }
    }
  }
  return report;
}

/// Abelian and equal to its own commutant.
template <typename Scalar>
bool is_maximal_abelian(const MatrixAlgebra<Scalar>& alg, Eigen::Index max_dim = kDefaultMaxDim) {
  if (!is_abelian(alg)) return false;
  return commutant(alg, max_dim).size() == alg.size();
}

// ---------------------------------------------------------------------------
// Operators of a paired system on l^2(X, mu), in the orthonormal basis delta_x / sqrt(mu(x)).
// Both actions preserve mu, so the group unitaries are plain permutation matrices.

/// [(U_g f)](x) = f(g^{-1} x) for Side::G, [(V_h f)](x) = f(x h) for Side::H.
template <typename Scalar = std::complex<double>>
DenseMatrix<Scalar> rep_unitary(const PairedSystem& sys, Side side, int element) {
  const FiniteGroup& grp = sys.group(side);
  if (element < 0 || element >= grp.order()) throw StructuralError("unknown group element id");
  const int n = sys.size();
  DenseMatrix<Scalar> m = DenseMatrix<Scalar>::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    if (side == Side::G)
      m(sys.act(side, element, x), x) = Scalar(1);
    else
      m(x, sys.act(side, element, x)) = Scalar(1);
  }
  return m;
}

/// Diagonal multiplicator by a function constant on the orbits of `side`, given per orbit block.
template <typename Scalar = std::complex<double>>
DenseMatrix<Scalar> multiplicator(const PairedSystem& sys, const DenseVector<Scalar>& phi_per_block, Side side) {
  const OrbitPartition part = orbits(sys, side);
  if (phi_per_block.size() != part.size()) {
    throw ContractViolation("multiplicator: function has " + std::to_string(phi_per_block.size()) +
                            " values but the " + std::string(to_string(side)) + "-orbit partition has " +
                            std::to_string(part.size()) + " blocks");
  }
  DenseVector<Scalar> diag(sys.size());
  for (int x = 0; x < sys.size(); ++x) diag(x) = phi_per_block(part.point_to_block[x]);
  return diag.asDiagonal();
}

/// Generators of A_side: the unitaries of `side` and the indicators of the other side's orbits.
template <typename Scalar = std::complex<double>>
std::vector<DenseMatrix<Scalar>> side_generators(const PairedSystem& sys, Side side) {
  std::vector<DenseMatrix<Scalar>> gens;
  for (int a = 0; a < sys.group(side).order(); ++a) gens.push_back(rep_unitary<Scalar>(sys, side, a));
  const OrbitPartition part = orbits(sys, other(side));
  for (int b = 0; b < part.size(); ++b) {
    DenseVector<Scalar> phi = DenseVector<Scalar>::Zero(part.size());
    phi(b) = Scalar(1);
    gens.push_back(multiplicator<Scalar>(sys, phi, other(side)));
  }
  return gens;
}

/// A_G (G-unitaries with H-invariant multiplicators) or A_H (H-unitaries with G-invariant multiplicators).
template <typename Scalar = std::complex<double>>
MatrixAlgebra<Scalar> side_algebra(const PairedSystem& sys, Side side, Eigen::Index max_dim = kDefaultMaxDim) {
  MatrixAlgebra<Scalar> alg = algebra_closure(side_generators<Scalar>(sys, side), max_dim);
  alg.log(std::string("A_") + std::string(to_string(side)));
  return alg;
}

/// Algebra generated by the multiplicators of both orbit partitions (diagonal, abelian).
template <typename Scalar = std::complex<double>>
MatrixAlgebra<Scalar> joint_multiplicator_algebra(const PairedSystem& sys, Eigen::Index max_dim = kDefaultMaxDim) {
  std::vector<DenseMatrix<Scalar>> gens;
  for (Side side : {Side::G, Side::H}) {
    const OrbitPartition part = orbits(sys, side);
    for (int b = 0; b < part.size(); ++b) {
      DenseVector<Scalar> phi = DenseVector<Scalar>::Zero(part.size());
      phi(b) = Scalar(1);
      gens.push_back(multiplicator<Scalar>(sys, phi, side));
    }
  }
  return algebra_closure(gens, max_dim);
}

/// Indicator vector of a point set in the orthonormal basis, normalized to unit length.
template <typename Scalar = std::complex<double>>
DenseVector<Scalar> indicator_vector(const PairedSystem& sys, const std::vector<int>& points) {
  DenseVector<Scalar> v = DenseVector<Scalar>::Zero(sys.size());
  // chi_E = sum_{x in E} sqrt(mu(x)) e_x in the basis delta_x / sqrt(mu(x))
  for (int x : points) v(x) = Scalar(std::sqrt(to_double(sys.weights()[x])));
  if (v.norm() == 0) throw DegenerateInputError("indicator of an empty set");
  return v / v.norm();
}

}  // namespace pairlab
