#include "pairlab/heisenberg_torus.hpp"

#include "pairlab/errors.hpp"

#include <numbers>
#include <numeric>
#include <limits>
#include <stdexcept>

namespace pairlab {

namespace {

std::complex<double> phase(const Rational& turns) {
  const double t = to_double(frac(turns));
  return std::polar(1.0, 2.0 * std::numbers::pi * t);
}

bool is_integer(const Rational& x) { return boost::multiprecision::denominator(x) == 1; }

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("fraction overflow");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("fraction overflow");
  return out;
}

}  // namespace

SmallFraction::SmallFraction(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (d == 0) throw DegenerateInputError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

SmallFraction operator+(const SmallFraction& x, const SmallFraction& y) {
  const std::int64_t g = std::gcd(x.den, y.den);
  const std::int64_t yd = y.den / g;
  return {checked_add(checked_mul(x.num, yd), checked_mul(y.num, x.den / g)), checked_mul(x.den, yd)};
}

SmallFraction operator-(const SmallFraction& x, const SmallFraction& y) { return x + (-y); }

SmallFraction operator*(const SmallFraction& x, const SmallFraction& y) {
  const std::int64_t g1 = std::gcd(x.num, y.den);
  const std::int64_t g2 = std::gcd(y.num, x.den);
  const std::int64_t d1 = g1 == 0 ? 1 : g1;
  const std::int64_t d2 = g2 == 0 ? 1 : g2;
  return {checked_mul(x.num / d1, y.num / d2), checked_mul(x.den / d2, y.den / d1)};
}

SmallFraction frac(const SmallFraction& x) {
  std::int64_t q = x.num / x.den;
  if (x.num % x.den != 0 && x.num < 0) --q;
  return {x.num - q * x.den, x.den};
}

SmallFraction to_small(const Rational& x) {
  const BigInt n = boost::multiprecision::numerator(x);
  const BigInt d = boost::multiprecision::denominator(x);
  const BigInt limit = std::numeric_limits<std::int64_t>::max();
  if (abs(n) > limit || d > limit) throw std::overflow_error("rational " + to_string(x) + " exceeds int64");
  return {n.convert_to<std::int64_t>(), d.convert_to<std::int64_t>()};
}

ExactHeisenberg lattice_embed(const LatticeIndex& idx, const ShiftPairSpec& lambdas, LatticeOrder order) {
  lambdas.validate();
  const Rational& first = order == LatticeOrder::Forward ? lambdas.lambda1 : lambdas.lambda2;
  const Rational& second = order == LatticeOrder::Forward ? lambdas.lambda2 : lambdas.lambda1;
  return {Rational(idx.m) * first, Rational(idx.n) / second, frac(Rational(Rational(idx.r) * first / second))};
}

Rational cross_lattice_commutator(const LatticeIndex& idx1, const LatticeIndex& idx2, const ShiftPairSpec& lambdas) {
  return commutator_turns(lattice_embed(idx1, lambdas, LatticeOrder::Forward),
                          lattice_embed(idx2, lambdas, LatticeOrder::Swapped));
}

Rational same_lattice_commutator(const LatticeIndex& idx1, const LatticeIndex& idx2, const ShiftPairSpec& lambdas,
                                 LatticeOrder order) {
  return commutator_turns(lattice_embed(idx1, lambdas, order), lattice_embed(idx2, lambdas, order));
}

LatticeSweep cross_lattice_sweep(const ShiftPairSpec& lambdas, int bound) {
  using Small = HeisenbergElement<SmallFraction>;
  auto small = [](const ExactHeisenberg& x) { return Small{to_small(x.a), to_small(x.b), to_small(x.turns)}; };
  std::vector<Small> first, second;
  for (std::int64_t m = -bound; m <= bound; ++m)
    for (std::int64_t n = -bound; n <= bound; ++n)
      for (std::int64_t r = -bound; r <= bound; ++r) {
        first.push_back(small(lattice_embed({m, n, r}, lambdas, LatticeOrder::Forward)));
        second.push_back(small(lattice_embed({m, n, r}, lambdas, LatticeOrder::Swapped)));
      }
  LatticeSweep sweep;
  for (const Small& x : first)
    for (const Small& y : second) {
      ++sweep.pairs;
      if (commutator_turns(x, y) != SmallFraction(0)) ++sweep.nonzero;
    }
  return sweep;
}

std::optional<std::pair<LatticeIndex, LatticeIndex>> noncommuting_witness(const ShiftPairSpec& lambdas,
                                                                          LatticeOrder order) {
  for (std::int64_t m = -3; m <= 3; ++m)
    for (std::int64_t n = -3; n <= 3; ++n) {
      LatticeIndex x{m, 0, 0};
      LatticeIndex y{0, n, 0};
      if (same_lattice_commutator(x, y, lambdas, order) != 0) return std::make_pair(x, y);
    }
  return std::nullopt;
}

ComplexMatrix rho_n_operator(int n, const ExactHeisenberg& x, const GridSpec& grid) {
  if (n == 0) throw DegenerateInputError("rho_n needs a non-zero integer n");
  if (grid.points < 1 || grid.step <= 0) throw DiscretizationError("grid needs positive step and point count");
  const Rational shift = x.b / grid.step;
  if (!is_integer(shift)) throw DiscretizationError("shift " + to_string(x.b) + " is not a multiple of the grid step");
  if (!is_integer(Rational(Rational(n) * x.a * grid.length())))
    throw DiscretizationError("frequency " + to_string(x.a) + " is not periodic on the window");

  const int m = grid.points;
  const BigInt k_big = boost::multiprecision::numerator(shift);
  const int k = static_cast<int>(((k_big % m) + m) % m);
  ComplexMatrix out = ComplexMatrix::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    const Rational turns = Rational(n) * x.turns + Rational(n) * x.a * (Rational(j) * grid.step - x.b);
    out(j, ((j - k) % m + m) % m) = phase(turns);
  }
  return out;
}

WeylSystem::WeylSystem(std::vector<int> moduli) : moduli_(std::move(moduli)) {
  if (moduli_.empty()) throw StructuralError("abelian group needs at least one cyclic factor");
  for (int n : moduli_) {
    if (n < 1) throw StructuralError("cyclic factor orders must be positive");
    order_ *= n;
  }
  if (order_ > 4096) throw DimensionCapError("finite abelian group larger than 4096");
}

std::vector<int> WeylSystem::coordinates(int element) const {
  std::vector<int> c(moduli_.size());
  for (std::size_t i = moduli_.size(); i-- > 0;) {
    c[i] = element % moduli_[i];
    element /= moduli_[i];
  }
  return c;
}

int WeylSystem::index(const std::vector<int>& coords) const {
  int id = 0;
  for (std::size_t i = 0; i < moduli_.size(); ++i) id = id * moduli_[i] + ((coords[i] % moduli_[i]) + moduli_[i]) % moduli_[i];
  return id;
}

ComplexMatrix WeylSystem::translation(int x) const {
  ComplexMatrix t = ComplexMatrix::Zero(order_, order_);
  const auto xc = coordinates(x);
  for (int y = 0; y < order_; ++y) {
    auto yc = coordinates(y);
    for (std::size_t i = 0; i < yc.size(); ++i) yc[i] += xc[i];
    t(y, index(yc)) = 1.0;
  }
  return t;
}

Rational WeylSystem::pairing_turns(int chi, int x) const {
  const auto cc = coordinates(chi);
  const auto xc = coordinates(x);
  Rational t = 0;
  for (std::size_t i = 0; i < moduli_.size(); ++i) t += Rational(cc[i] * xc[i], moduli_[i]);
  return frac(t);
}

ComplexMatrix WeylSystem::character(int chi) const {
  ComplexMatrix m = ComplexMatrix::Zero(order_, order_);
  for (int y = 0; y < order_; ++y) m(y, y) = phase(pairing_turns(chi, y));
  return m;
}

WeylReport weyl_check(const std::vector<int>& moduli, Eigen::Index max_dim) {
  const WeylSystem weyl(moduli);
  const int n = weyl.order();
  WeylReport report;
  report.order = n;

  // T_x M_chi has entry chi(y + x) at (y, y + x); M_chi T_x has chi(y) there.
  for (int x = 0; x < n; ++x) {
    for (int chi = 0; chi < n; ++chi) {
      const std::complex<double> expected = phase(weyl.pairing_turns(chi, x));
      if (n <= 64) {
        const ComplexMatrix t = weyl.translation(x);
        const ComplexMatrix c = weyl.character(chi);
        report.max_cocycle_residual =
            std::max(report.max_cocycle_residual, (t * c - expected * c * t).cwiseAbs().maxCoeff());
      } else {
        for (int y = 0; y < n; ++y) {
          auto yc = weyl.coordinates(y);
          const auto xc = weyl.coordinates(x);
          for (std::size_t i = 0; i < yc.size(); ++i) yc[i] += xc[i];
          const double r = std::abs(phase(weyl.pairing_turns(chi, weyl.index(yc))) -
                                    expected * phase(weyl.pairing_turns(chi, y)));
          report.max_cocycle_residual = std::max(report.max_cocycle_residual, r);
        }
      }
    }
  }
  report.cocycle_exact = report.max_cocycle_residual <= 1e-12;

  if (n > max_dim) return report;
  report.algebra_checks_run = true;

  const std::size_t k = moduli.size();
  auto unit = [&](std::size_t i) {
    std::vector<int> c(k, 0);
    c[i] = 1;
    return weyl.index(c);
  };
  std::vector<ComplexMatrix> translations;
  std::vector<ComplexMatrix> characters;
  for (std::size_t i = 0; i < k; ++i) {
    translations.push_back(weyl.translation(unit(i)));
    characters.push_back(weyl.character(unit(i)));
  }
  const ComplexAlgebra trans = algebra_closure(translations, max_dim);
  const ComplexAlgebra chars = algebra_closure(characters, max_dim);
  report.translation_dim = trans.size();
  report.character_dim = chars.size();
  report.translations_maximal_abelian = is_maximal_abelian(trans, max_dim);
  report.characters_maximal_abelian = is_maximal_abelian(chars, max_dim);
  report.joint_irreducible = is_irreducible(std::vector<ComplexAlgebra>{trans, chars}, max_dim).irreducible;

  if (k >= 2) {
    report.split_available = true;
    std::vector<ComplexMatrix> first{translations[0], characters[0]};
    std::vector<ComplexMatrix> rest;
    for (std::size_t i = 1; i < k; ++i) {
      rest.push_back(translations[i]);
      rest.push_back(characters[i]);
    }
    const ComplexAlgebra a = algebra_closure(first, max_dim);
    const ComplexAlgebra b = algebra_closure(rest, max_dim);
    report.split_mutual_commutants = same_span(commutant(a, max_dim), b) && same_span(commutant(b, max_dim), a);
    report.split_lambda_first = mvn_coupling(a, {}, kDefaultSeed, 5, max_dim).lambda;
    report.split_lambda_second = mvn_coupling(b, {}, kDefaultSeed, 5, max_dim).lambda;
  }
  return report;
}

ComplexMatrix ClockShiftPair::clock() const {
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) u(k, k) = phase(Rational((static_cast<long long>(k) * step) % dim, dim));
  return u;
}

ComplexMatrix ClockShiftPair::shift() const {
  ComplexMatrix v = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) v((k + 1) % dim, k) = 1.0;
  return v;
}

double clock_shift_residual(const ClockShiftPair& cs) {
  if (cs.dim < 2 || cs.step < 1 || cs.step >= cs.dim) throw DegenerateInputError("clock/shift needs 1 <= p < N");
  const ComplexMatrix u = cs.clock();
  const ComplexMatrix v = cs.shift();
  const std::complex<double> q = phase(Rational(cs.step, cs.dim));
  return (u * v - q * v * u).cwiseAbs().maxCoeff();
}

PairedSystem rational_torus_model(int p, int q) {
  if (p < 1 || q < 1) throw DegenerateInputError("torus model needs p, q >= 1");
  if (std::gcd(p, q) != 1) throw ContractViolation("transversality fails: gcd(p, q) > 1");
  return shift_pair_model({Rational(q), Rational(p)});
}

TorusReport torus_bridge(int p, int q, std::uint64_t seed, Eigen::Index max_dim) {
  const PairedSystem sys = rational_torus_model(p, q);
  TorusReport report;
  report.p = p;
  report.q = q;
  report.dyn_coupling = dyn_coupling(sys).lambda_gh;

  const ComplexAlgebra first = side_algebra(sys, Side::H, max_dim);
  const ComplexAlgebra second = side_algebra(sys, Side::G, max_dim);
  const CouplingCertificate c1 = mvn_coupling(first, {}, seed, 5, max_dim);
  const CouplingCertificate c2 = mvn_coupling(second, {}, seed + 1, 5, max_dim);
  report.lambda_first = c1.lambda;
  report.lambda_second = c2.lambda;
  report.lambda_first_rational = Rational(c1.commutant_orbit_rank, c1.algebra_orbit_rank);
  report.lambda_second_rational = Rational(c2.commutant_orbit_rank, c2.algebra_orbit_rank);
  report.reciprocity_residual = std::abs(c1.lambda * c2.lambda - 1.0);
  report.witness_spread = std::max(c1.spread, c2.spread);

  const ComplexAlgebra first_comm = commutant(first, max_dim, seed);
  report.commutant_span_distance = span_distance(first_comm, second);
  report.mutual_commutants = report.commutant_span_distance <= kSpanTol;
  report.irreducible = is_irreducible(std::vector<ComplexAlgebra>{first, second}, max_dim).irreducible;

  std::mt19937_64 rng(seed + 2);
  const ComplexVector h = random_unit_vector(sys.size(), rng);
  report.cyclic = orbit_rank(first, h) == sys.size();
  report.separating = orbit_rank(first_comm, h) == sys.size();
  return report;
}

bool k0_positive(std::int64_t m, std::int64_t n, double theta) {
  return static_cast<double>(m) * theta + static_cast<double>(n) > 0.0;
}

K0Verdict k0_positive(std::int64_t m, std::int64_t n, const Rational& theta) {
  return K0Verdict{Rational(Rational(m) * theta + Rational(n)) > 0, true};
}

std::vector<BigInt> continued_fraction(const Rational& x, int count) {
  std::vector<BigInt> out;
  Rational rest = x;
  while (static_cast<int>(out.size()) < count) {
    const BigInt a = floor(rest);
    out.push_back(a);
    const Rational tail = rest - Rational(a);
    if (tail == 0) break;
    rest = 1 / tail;
  }
  return out;
}

std::vector<Rational> convergents(const Rational& x, int count) {
  const std::vector<BigInt> cf = continued_fraction(x, count);
  std::vector<Rational> out;
  BigInt p_prev = 1, p = cf[0];
  BigInt q_prev = 0, q = 1;
  out.emplace_back(p, q);
  for (std::size_t k = 1; k < cf.size(); ++k) {
    BigInt p_next = cf[k] * p + p_prev;
    BigInt q_next = cf[k] * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    out.emplace_back(p, q);
  }
  return out;
}

}  // namespace pairlab
