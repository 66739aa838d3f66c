// One PASS/FAIL line per acceptance criterion; exit status is nonzero if any fails.
#include "pairlab/crossed_product.hpp"
#include "pairlab/heisenberg_torus.hpp"
#include "pairlab/lab.hpp"
#include "pairlab/measure_systems.hpp"
#include "pairlab/operator_lab.hpp"
#include "pairlab/symmetric_pseudogroupoid.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace pairlab;

namespace {

// pinned tolerances
constexpr double kSpanTol = 1e-8;
constexpr double kReciprocityTol = 1e-8;
constexpr double kSpreadTol = 1e-8;
constexpr double kClockTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kTracialTol = 1e-9;
constexpr double kSigmas = 3.0;
constexpr std::int64_t kSamples = 100000;
constexpr int kMinWitnesses = 5;
constexpr int kLatticeBound = 5;
constexpr int kLatticeRandom = 10000;
constexpr int kCrossedSamples = 100;
constexpr double kCouplingSeconds = 10.0;
constexpr double kTorusSeconds = 30.0;
constexpr double kSymmetricSeconds = 20.0;
constexpr std::uint64_t kSeed = 20240229;

const std::vector<std::pair<int, int>> kProductModels{{2, 3}, {3, 4}, {2, 5}, {4, 4}};
const std::vector<std::pair<int, int>> kTorusPairs{{1, 2}, {2, 3}, {3, 2}, {3, 5}, {5, 3}, {5, 8}, {8, 5}};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string label(int a, int b) { return std::to_string(a) + "," + std::to_string(b); }

bool same_unordered(const Rational& a, const Rational& b, const Rational& x, const Rational& y) {
  return (a == x && b == y) || (a == y && b == x);
}

BernoulliSpec three_letter() { return {{Rational(1, 2), Rational(3, 10), Rational(1, 5)}, 0}; }
BernoulliSpec fair_coin() { return {{Rational(1, 2), Rational(1, 2)}, 0}; }

void criterion_1(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t seed = kSeed;
  for (const auto& [m, n] : kProductModels) {
    const PairedSystem sys = product_model(m, n);
    const ComplexAlgebra first = side_algebra(sys, Side::H);
    const ComplexAlgebra second = side_algebra(sys, Side::G);
    const double d1 = span_distance(commutant(first), second);
    const double d2 = span_distance(commutant(second), first);
    out.require(d1 <= kSpanTol && d2 <= kSpanTol, "mutual commutant " + label(m, n));
    out.require(is_irreducible(std::vector<ComplexAlgebra>{first, second}).irreducible, "irreducible " + label(m, n));
    const CouplingCertificate c1 = mvn_coupling(first, {}, ++seed);
    const CouplingCertificate c2 = mvn_coupling(second, {}, ++seed);
    out.require(same_unordered(Rational(c1.commutant_orbit_rank, c1.algebra_orbit_rank),
                               Rational(c2.commutant_orbit_rank, c2.algebra_orbit_rank), Rational(m, n), Rational(n, m)),
                "coupling pair " + label(m, n));
  }
  const double secs = seconds_since(t0);
  out.require(secs < kCouplingSeconds, "runtime");
  out.detail << "4 product models, " << secs << " s";
}

void criterion_2(Outcome& out) {
  std::uint64_t seed = kSeed + 100;
  double worst_recip = 0.0, worst_spread = 0.0;
  std::size_t fewest = SIZE_MAX;
  for (const auto& [m, n] : kProductModels) {
    const PairedSystem sys = product_model(m, n);
    const CouplingCertificate c1 = mvn_coupling(side_algebra(sys, Side::H), {}, ++seed, kMinWitnesses);
    const CouplingCertificate c2 = mvn_coupling(side_algebra(sys, Side::G), {}, ++seed, kMinWitnesses);
    worst_recip = std::max(worst_recip, std::abs(c1.lambda * c2.lambda - 1.0));
    worst_spread = std::max({worst_spread, c1.spread, c2.spread});
    fewest = std::min({fewest, c1.witness_vectors.size(), c2.witness_vectors.size()});
  }
  out.require(worst_recip <= kReciprocityTol, "reciprocity");
  out.require(worst_spread <= kSpreadTol, "spread");
  out.require(fewest >= static_cast<std::size_t>(kMinWitnesses), "witness count");
  out.detail << "max |lambda lambda' - 1| = " << worst_recip << ", max spread = " << worst_spread << ", witnesses >= "
             << fewest;
}

void criterion_3(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t seed = kSeed + 200;
  for (const auto& [p, q] : kTorusPairs) {
    const TorusReport t = torus_bridge(p, q, ++seed);
    out.require(t.dyn_coupling == Rational(p, q), "dyn " + label(p, q));
    out.require(same_unordered(t.lambda_first_rational, t.lambda_second_rational, Rational(p, q), Rational(q, p)),
                "mvn pair " + label(p, q));
    out.require(t.cyclic == (p < q), "cyclic " + label(p, q));
  }
  const double secs = seconds_since(t0);
  out.require(secs < kTorusSeconds, "runtime");
  out.detail << kTorusPairs.size() << " rational torus models, " << secs << " s";
}

void criterion_4(Outcome& out) {
  const std::vector<Rational> ratios{Rational(2, 5), Rational(7, 3), Rational(355, 113)};
  std::mt19937_64 rng(kSeed + 300);
  std::uniform_int_distribution<std::int64_t> coord(-100000, 100000);
  std::int64_t pairs = 0, nonzero = 0;
  for (const Rational& theta : ratios) {
    const ShiftPairSpec spec{theta, Rational(1)};
    const LatticeSweep sweep = cross_lattice_sweep(spec, kLatticeBound);
    pairs += sweep.pairs;
    nonzero += sweep.nonzero;
    for (int t = 0; t < kLatticeRandom; ++t) {
      const LatticeIndex a{coord(rng), coord(rng), coord(rng)};
      const LatticeIndex b{coord(rng), coord(rng), coord(rng)};
      ++pairs;
      if (cross_lattice_commutator(a, b, spec) != 0) ++nonzero;
    }
    for (LatticeOrder order : {LatticeOrder::Forward, LatticeOrder::Swapped}) {
      const auto w = noncommuting_witness(spec, order);
      out.require(w.has_value() && same_lattice_commutator(w->first, w->second, spec, order) != 0,
                  "same-lattice witness " + to_string(theta));
    }
  }
  const std::int64_t side = 2 * kLatticeBound + 1;
  out.require(pairs == 3 * (side * side * side * side * side * side + kLatticeRandom), "pair count");
  out.require(nonzero == 0, "nonzero cross commutators");
  out.detail << pairs << " cross-lattice pairs, " << nonzero << " nonzero; witnesses found";
}

void criterion_5(Outcome& out) {
  double worst = 0.0;
  int tried = 0;
  for (int n : {4, 12, 64})
    for (int s = 1; s < n; ++s)
      if (std::gcd(s, n) == 1) {
        worst = std::max(worst, clock_shift_residual({n, s}));
        ++tried;
      }
  out.require(worst <= kClockTol, "clock/shift residual");
  for (const auto& moduli : std::vector<std::vector<int>>{{2}, {6}, {2, 3}})
    out.require(weyl_check(moduli).cocycle_exact, "Weyl cocycle");
  out.detail << tried << " (N,p) pairs, max residual " << worst << "; Weyl cocycle exact on Z2, Z6, Z2xZ3";
}

void criterion_6(Outcome& out) {
  for (int n : {5, 7}) {
    const RegularModel model = regular_model_cyclic(n);
    out.require(dyn_coupling(model.system).lambda_gh == 1, "dyn Z" + std::to_string(n));
    const ComplexAlgebra alg = side_algebra(model.system, Side::H);
    const BicyclicReport bi = bicyclic_witness(alg, indicator_vector(model.system, model.common_domain));
    out.require(bi.cyclic_for_algebra && bi.cyclic_for_commutant, "bicyclic Z" + std::to_string(n));
  }
  out.detail << "Z5, Z7: coupling 1, domain indicator bicyclic";
}

void criterion_7(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out.require(coupling_formula(three_letter(), 1) == Rational(19, 50), "r = 1 value");
  out.require(coupling_formula(three_letter(), 2) == Rational(361, 2500), "r = 2 value");
  std::uint64_t seed = kSeed + 700;
  double worst_z = 0.0;
  for (const auto& spec : {three_letter(), fair_coin()})
    for (int r = 0; r <= 3; ++r) {
      const double exact = to_double(coupling_formula(spec, r));
      const McEstimate est = mc_coupling(spec, r, kSamples, ++seed);
      out.require(std::abs(est.mean - exact) <= kSigmas * est.stderr_, "MC r = " + std::to_string(r));
      if (est.stderr_ > 0) worst_z = std::max(worst_z, est.z_score(exact));
    }
  const double secs = seconds_since(t0);
  out.require(secs < kSymmetricSeconds, "runtime");
  out.detail << "19/50, 361/2500 exact; 8 MC cells, max z " << worst_z << ", " << secs << " s";
}

void criterion_8(Outcome& out) {
  const std::vector<std::vector<int>> perms{{0, 1, 2, 3}, {1, 0, 2, 3}, {1, 2, 0, 3}, {1, 0, 3, 2}};
  std::uint64_t seed = kSeed + 800;
  double worst_z = 0.0;
  for (const auto& spec : {three_letter(), fair_coin()}) {
    for (const auto& perm : perms) {
      const double exact = to_double(character_value(cycle_type(perm), spec));
      const McEstimate est = mc_character(perm, spec, kSamples, ++seed);
      out.require(std::abs(est.mean - exact) <= kSigmas * est.stderr_, "character MC");
      if (est.stderr_ > 0) worst_z = std::max(worst_z, est.z_score(exact));
    }
    const Rational t = character_value({2}, spec);
    out.require(character_value({2, 2}, spec) == t * t, "multiplicative 2+2");
    out.require(character_value({3, 2}, spec) == character_value({3}, spec) * t, "multiplicative 3+2");
  }
  out.detail << "8 character cells, max z " << worst_z << "; multiplicativity exact";
}

void criterion_9(Outcome& out) {
  std::mt19937_64 rng(kSeed + 900);
  double gap = 0.0, tracial = 0.0, positivity = 0.0;
  for (const auto& [m, n] : kProductModels) {
    const auto sys = std::make_shared<const PairedSystem>(product_model(m, n));
    for (Side side : {Side::G, Side::H}) {
      const auto ctx = CrossedContext::make(sys, side);
      for (int k = 0; k < kCrossedSamples; ++k) {
        const CrossedElement a = CrossedElement::random(ctx, rng);
        const CrossedElement b = CrossedElement::random(ctx, rng);
        gap = std::max(gap, std::abs(cp_trace(a) - cp_represent(a, *sys).trace() / double(sys->size())));
        tracial = std::max(tracial, std::abs(cp_trace(a * b) - cp_trace(b * a)));
        const std::complex<double> aa = cp_trace(a.adjoint() * a);
        positivity = std::max({positivity, std::abs(aa.imag()), aa.real() > 0 ? 0.0 : 1.0});
      }
    }
  }
  out.require(gap <= kTraceTol, "trace formula");
  out.require(tracial <= kTracialTol, "traciality");
  out.require(positivity <= kTracialTol, "positivity");
  out.detail << "max trace gap " << gap << ", max tau(ab)-tau(ba) " << tracial;
}

void criterion_10(Outcome& out) {
  ExperimentConfig cfg;
  cfg.seed = kSeed;
  cfg.suites = {"all"};
  const std::string a = render(run_suite(cfg), "json");
  const std::string b = render(run_suite(cfg), "json");
  out.require(a == b, "byte-identical JSON");
  out.detail << "two runs of all, " << a.size() << " bytes each";
}

}  // namespace

int main() {
  const std::vector<std::function<void(Outcome&)>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                            criterion_5, criterion_6, criterion_7, criterion_8,
                                                            criterion_9, criterion_10};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      criteria[i](out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    if (!out.pass) ++failed;
    std::printf("criterion %zu: %s: %s\n", i + 1, out.pass ? "PASS" : "FAIL", out.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
