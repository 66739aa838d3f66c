#pragma once

#include "pairlab/measure_systems.hpp"
#include "pairlab/operator_lab.hpp"
#include "pairlab/rational.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace pairlab {

inline double frac(double x) { return x - std::floor(x); }

/// Exact fraction in reduced int64 form; arithmetic throws std::overflow_error instead of wrapping.
struct SmallFraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  SmallFraction(std::int64_t n = 0, std::int64_t d = 1);

  friend SmallFraction operator+(const SmallFraction& x, const SmallFraction& y);
  friend SmallFraction operator-(const SmallFraction& x, const SmallFraction& y);
  friend SmallFraction operator*(const SmallFraction& x, const SmallFraction& y);
  SmallFraction operator-() const { return {-num, den}; }
  friend bool operator==(const SmallFraction&, const SmallFraction&) = default;
};

SmallFraction frac(const SmallFraction& x);
/// Throws std::overflow_error when x does not fit.
SmallFraction to_small(const Rational& x);

/// Element (a, b, alpha) of the reduced Heisenberg group, with alpha = exp(2 pi i turns), turns in [0, 1).
template <typename Coord>
struct HeisenbergElement {
  Coord a{0};
  Coord b{0};
  Coord turns{0};

  static HeisenbergElement identity() { return {}; }
  friend bool operator==(const HeisenbergElement&, const HeisenbergElement&) = default;
};

using ExactHeisenberg = HeisenbergElement<Rational>;

/// (a,b,alpha)(a',b',alpha') = (a+a', b+b', alpha alpha' exp(2 pi i a b')).
template <typename Coord>
HeisenbergElement<Coord> h_multiply(const HeisenbergElement<Coord>& x, const HeisenbergElement<Coord>& y) {
  return {x.a + y.a, x.b + y.b, frac(Coord(x.turns + y.turns + x.a * y.b))};
}

template <typename Coord>
HeisenbergElement<Coord> h_inverse(const HeisenbergElement<Coord>& x) {
  return {Coord(-x.a), Coord(-x.b), frac(Coord(x.a * x.b - x.turns))};
}

/// Central phase (in turns) of x y x^-1 y^-1, computed by group multiplication.
template <typename Coord>
Coord commutator_turns(const HeisenbergElement<Coord>& x, const HeisenbergElement<Coord>& y) {
  const auto c = h_multiply(h_multiply(x, y), h_multiply(h_inverse(x), h_inverse(y)));
  return c.turns;
}

struct LatticeIndex {
  std::int64_t m = 0;
  std::int64_t n = 0;
  std::int64_t r = 0;
};

/// Forward: Gamma(l1, l2) = {(m l1, n / l2, r l1 / l2)}; Swapped: Gamma(l2, l1).
enum class LatticeOrder { Forward, Swapped };

ExactHeisenberg lattice_embed(const LatticeIndex& idx, const ShiftPairSpec& lambdas, LatticeOrder order);

/// Phase of the commutator of idx1 in Gamma(l1,l2) with idx2 in Gamma(l2,l1).
Rational cross_lattice_commutator(const LatticeIndex& idx1, const LatticeIndex& idx2, const ShiftPairSpec& lambdas);

/// Phase of the commutator of two elements of the same lattice.
Rational same_lattice_commutator(const LatticeIndex& idx1, const LatticeIndex& idx2, const ShiftPairSpec& lambdas,
                                 LatticeOrder order);

struct LatticeSweep {
  std::int64_t pairs = 0;
  std::int64_t nonzero = 0;
};

/// Commutators of every idx1 in Gamma(l1,l2) with every idx2 in Gamma(l2,l1), |m|,|n|,|r| <= bound.
LatticeSweep cross_lattice_sweep(const ShiftPairSpec& lambdas, int bound);

/// Pair of elements of the lattice with non-zero commutator phase, if one exists among small indices.
std::optional<std::pair<LatticeIndex, LatticeIndex>> noncommuting_witness(const ShiftPairSpec& lambdas,
                                                                          LatticeOrder order);

/// Periodic sampling window x_j = j * step, j = 0..points-1.
struct GridSpec {
  Rational step;
  int points = 0;

  Rational length() const { return step * points; }
};

/// (rho_n(a,b,alpha) f)(x) = alpha^n exp(2 pi i n a (x - b)) f(x - b) on the window.
///
/// b must be a multiple of the step and n a L an integer (L the window length), otherwise
/// DiscretizationError; with both, rho_n(x) rho_n(y) = rho_n(xy) holds on the window.
ComplexMatrix rho_n_operator(int n, const ExactHeisenberg& x, const GridSpec& grid);

/// Translations and characters of a finite abelian group Z_{n1} x ... x Z_{nk} on l^2(A).
class WeylSystem {
 public:
  explicit WeylSystem(std::vector<int> moduli);

  int order() const { return order_; }
  const std::vector<int>& moduli() const { return moduli_; }
  std::vector<int> coordinates(int element) const;
  int index(const std::vector<int>& coords) const;

  /// (T_x f)(y) = f(y + x)
  ComplexMatrix translation(int x) const;
  /// (M_chi f)(y) = <chi, y> f(y)
  ComplexMatrix character(int chi) const;
  /// <chi, x> in turns: sum_i chi_i x_i / n_i mod 1.
  Rational pairing_turns(int chi, int x) const;

 private:
  std::vector<int> moduli_;
  int order_ = 1;
};

struct WeylReport {
  int order = 0;
  /// max over x, chi of |T_x M_chi - exp(2 pi i <chi,x>) M_chi T_x|
  double max_cocycle_residual = 0.0;
  bool cocycle_exact = false;
  bool algebra_checks_run = false;
  Eigen::Index translation_dim = 0;
  Eigen::Index character_dim = 0;
  bool translations_maximal_abelian = false;
  bool characters_maximal_abelian = false;
  bool joint_irreducible = false;
  /// First cyclic factor's Weyl pair against the remaining factors' pairs.
  bool split_available = false;
  bool split_mutual_commutants = false;
  double split_lambda_first = 0.0;
  double split_lambda_second = 0.0;
};

WeylReport weyl_check(const std::vector<int>& moduli, Eigen::Index max_dim = kDefaultMaxDim);

/// U = diag(exp(2 pi i k p / N)), V e_k = e_{k+1}; UV = exp(2 pi i p / N) VU.
struct ClockShiftPair {
  int dim = 0;
  int step = 0;

  ComplexMatrix clock() const;
  ComplexMatrix shift() const;
};

/// Max-abs entry of UV - exp(2 pi i p/N) VU.  Requires 1 <= p < N.
double clock_shift_residual(const ClockShiftPair& cs);

/// Z_{pq} with G = <q> (order p) and H = <p> (order q): the shift pair lambda1 = q, lambda2 = p
/// on the common lattice, coupling p/q.  Throws ContractViolation unless gcd(p,q) = 1.
PairedSystem rational_torus_model(int p, int q);

struct TorusReport {
  int p = 0;
  int q = 0;
  Rational dyn_coupling;
  /// The factor generated by H-shifts and G-invariant multiplicators, and its commutant partner.
  double lambda_first = 0.0;
  double lambda_second = 0.0;
  Rational lambda_first_rational;
  Rational lambda_second_rational;
  bool mutual_commutants = false;
  bool irreducible = false;
  bool cyclic = false;
  bool separating = false;
  double commutant_span_distance = 0.0;
  double reciprocity_residual = 0.0;
  double witness_spread = 0.0;
};

TorusReport torus_bridge(int p, int q, std::uint64_t seed = kDefaultSeed, Eigen::Index max_dim = kDefaultMaxDim);

struct K0Verdict {
  bool positive = false;
  /// theta was rational, outside the intended irrational setting.
  bool rational_theta_warning = false;
};

/// m theta + n > 0
bool k0_positive(std::int64_t m, std::int64_t n, double theta);
K0Verdict k0_positive(std::int64_t m, std::int64_t n, const Rational& theta);

/// Partial quotients [a0; a1, a2, ...] of x, at most `count` of them.
std::vector<BigInt> continued_fraction(const Rational& x, int count);
/// Convergents p_k/q_k of x, at most `count`.
std::vector<Rational> convergents(const Rational& x, int count);

}  // namespace pairlab
