#include "doctest.h"

#include "pairlab/errors.hpp"
#include "pairlab/symmetric_pseudogroupoid.hpp"

#include <algorithm>
#include <map>

using namespace pairlab;

namespace {

BernoulliSpec three_letter() { return {{Rational(1, 2), Rational(3, 10), Rational(1, 5)}, 0}; }
BernoulliSpec fair_coin() { return {{Rational(1, 2), Rational(1, 2)}, 0}; }

// Exact P(constant on each cycle) by summing over all words of length n.
Rational fixed_point_mass(const std::vector<int>& perm, const BernoulliSpec& spec) {
  const int n = static_cast<int>(perm.size());
  const int k = spec.k();
  int total = 1;
  for (int i = 0; i < n; ++i) total *= k;
  Rational mass = 0;
  for (int code = 0; code < total; ++code) {
    std::vector<int> w(n);
    int rest = code;
    for (int i = 0; i < n; ++i, rest /= k) w[i] = rest % k;
    bool fixed = true;
    for (int i = 0; i < n; ++i) fixed = fixed && w[perm[i]] == w[i];
    if (!fixed) continue;
    Rational p = 1;
    for (int x : w) p *= spec.weights[x];
    mass += p;
  }
  return mass;
}

// Exact measure of X'_{0,r} inside X_{0,r} by enumerating x_1..x_{2r}.
Rational prime_domain_mass(const BernoulliSpec& spec, int r) {
  const int n = std::max(r, 1);
  const int len = n + r;
  const int k = spec.k();
  int total = 1;
  for (int i = 0; i < len; ++i) total *= k;
  Rational mass = 0;
  for (int code = 0; code < total; ++code) {
    SeqWindow w{r, n, std::vector<int>(n), std::vector<int>(len)};
    int rest = code;
    for (int i = 0; i < len; ++i, rest /= k) w.pos[i] = rest % k;
    for (int i = 1; i <= n; ++i) w.neg[i - 1] = w.pos[i + r - 1];
    if (!in_Xprime0r(w)) continue;
    // only x_1..x_{2r} are constrained; the rest integrate to 1
    Rational p = 1;
    for (int i = 0; i < std::min(len, 2 * r); ++i) p *= spec.weights[w.pos[i]];
    for (int i = 2 * r; i < len; ++i) p *= spec.weights[w.pos[i]];
    mass += p;
  }
  return mass;
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_NOTHROW(three_letter().validate());
  CHECK_THROWS_AS((BernoulliSpec{{Rational(1, 5), Rational(4, 5)}, 0}).validate(), DegenerateInputError);
  CHECK_THROWS_AS((BernoulliSpec{{Rational(1, 2), Rational(1, 3)}, 0}).validate(), DegenerateInputError);
  CHECK_THROWS_AS((BernoulliSpec{{Rational(1), Rational(0)}, 0}).validate(), DegenerateInputError);
  CHECK_THROWS_AS((BernoulliSpec{{}, 0}).validate(), DegenerateInputError);
  CHECK(fair_coin().degenerate());
  CHECK_FALSE(three_letter().degenerate());

  // geometric 1/2, 1/4, 1/8, ... cut after three letters
  const BernoulliSpec cut = truncate_spec({Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 16)}, 3);
  CHECK(cut.tail_mass == Rational(1, 8));
  CHECK(cut.weights == std::vector<Rational>{Rational(4, 7), Rational(2, 7), Rational(1, 7)});
}

TEST_CASE("window membership") {
  // r = 0, palindromic
  SeqWindow pal{0, 3, {1, 0, 2}, {1, 0, 2}};
  CHECK(in_X0r(pal));
  CHECK(in_Xprime0r(pal));
  // r = 1: x_{-i} = x_{i+1}
  SeqWindow shifted{1, 3, {0, 1, 1}, {2, 0, 1, 1}};
  CHECK(in_X0r(shifted));
  CHECK_FALSE(in_Xprime0r(shifted));  // x_{-1} = 0 but x_1 = 2
  shifted.pos[0] = 0;
  CHECK(in_Xprime0r(shifted));
  SeqWindow broken = pal;
  broken.neg[2] = 0;
  CHECK_FALSE(in_X0r(broken));
  CHECK_FALSE(in_Xprime0r(broken));
  // r = 2 forces x_1 = x_3, x_2 = x_4
  SeqWindow r2{2, 2, {1, 0}, {1, 0, 1, 0}};
  CHECK(in_Xprime0r(r2));
  SeqWindow r2bad{2, 2, {0, 0}, {1, 0, 0, 0}};
  CHECK(in_X0r(r2bad));
  CHECK_FALSE(in_Xprime0r(r2bad));
  CHECK_THROWS_AS(in_X0r(SeqWindow{1, 2, {0, 0}, {0, 0}}), ContractViolation);
  CHECK_THROWS_AS(pal.at(0), ContractViolation);
}

TEST_CASE("exact coupling against enumeration") {
  CHECK(coupling_formula(three_letter(), 0) == 1);
  CHECK(coupling_formula(three_letter(), 1) == Rational(19, 50));
  CHECK(coupling_formula(three_letter(), 2) == Rational(361, 2500));
  CHECK(coupling_formula(fair_coin(), 1) == Rational(1, 2));
  for (const auto& spec : {three_letter(), fair_coin()})
    for (int r = 0; r <= 3; ++r) {
      CHECK(coupling_formula(spec, r) == prime_domain_mass(spec, r));
      if (r > 0) CHECK(coupling_formula(spec, r) < coupling_formula(spec, r - 1));
    }
}

TEST_CASE("Monte Carlo coupling") {
  const McEstimate zero = mc_coupling(three_letter(), 0, 5000, 1);
  CHECK(zero.mean == 1.0);
  CHECK(zero.stderr_ == 0.0);
  for (const auto& spec : {three_letter(), fair_coin()})
    for (int r = 1; r <= 3; ++r) {
      const McEstimate est = mc_coupling(spec, r, 100000, 42 + r);
      CHECK(est.z_score(to_double(coupling_formula(spec, r))) <= 3.0);
    }
  CHECK_THROWS_AS(mc_coupling(fair_coin(), 1, 999, 1), DegenerateInputError);
}

TEST_CASE("Monte Carlo is reproducible and stream-merged") {
  const McEstimate a = mc_coupling(three_letter(), 2, 20000, 9);
  const McEstimate b = mc_coupling(three_letter(), 2, 20000, 9);
  CHECK(a.hits == b.hits);
  const McEstimate single = mc_coupling(three_letter(), 2, 20000, 9, 1);
  CHECK(single.samples == 20000);
  CHECK(mc_coupling(three_letter(), 2, 20000, 10).hits != a.hits);
}

TEST_CASE("character values") {
  CHECK(cycle_type({1, 0, 2, 3}) == std::vector<int>{2, 1, 1});
  CHECK(cycle_type({1, 2, 0, 3}) == std::vector<int>{3, 1});
  CHECK_THROWS_AS(cycle_type({0, 0}), StructuralError);

  CHECK(character_value({1, 1, 1}, three_letter()) == 1);
  CHECK(character_value({2}, fair_coin()) == Rational(1, 2));
  CHECK(character_value({3}, three_letter()) == Rational(4, 25));
  CHECK(character_value({2, 2}, fair_coin()) == Rational(1, 4));

  const std::vector<std::vector<int>> perms{{0, 1, 2, 3}, {1, 0, 2, 3}, {1, 2, 0, 3}, {1, 0, 3, 2}, {1, 2, 3, 0}};
  for (const auto& spec : {three_letter(), fair_coin()}) {
    for (const auto& perm : perms) {
      const Rational exact = character_value(cycle_type(perm), spec);
      CHECK(exact == fixed_point_mass(perm, spec));
      CHECK(exact > 0);
      CHECK(exact <= 1);
      CHECK((exact == 1) == (perm == perms.front()));
      const McEstimate est = mc_character(perm, spec, 100000, 77);
      CHECK(est.z_score(to_double(exact)) <= 3.0);
    }
    // disjoint cycles multiply
    CHECK(character_value({3, 2}, spec) == character_value({3}, spec) * character_value({2}, spec));
    CHECK(character_value({2, 2, 4}, spec) ==
          character_value({2}, spec) * character_value({2}, spec) * character_value({4}, spec));
  }
}

TEST_CASE("pseudogroupoid conditions on windows") {
  for (auto [r, n] : std::vector<std::pair<int, int>>{{0, 3}, {1, 4}}) {
    const PseudogroupoidReport rep = pseudogroupoid_check(r, n, fair_coin());
    CHECK(rep.homogeneity);
    CHECK(rep.commutation);
    CHECK(rep.ergodicity);
    CHECK(rep.all());
    CHECK_FALSE(rep.commutation_witness.has_value());
  }
  const PseudogroupoidReport three = pseudogroupoid_check(0, 3, three_letter());
  CHECK(three.all());
  CHECK(three.components == three.composition_classes);

  PseudogroupoidOptions bad;
  bad.corrupt_overlap = true;
  const PseudogroupoidReport corrupted = pseudogroupoid_check(0, 3, fair_coin(), bad);
  CHECK_FALSE(corrupted.commutation);
  CHECK(corrupted.commutation_witness.has_value());

  CHECK_THROWS_AS(pseudogroupoid_check(2, 3, fair_coin()), DegenerateInputError);
  PseudogroupoidOptions tiny;
  tiny.max_windows = 100;
  CHECK_THROWS_AS(pseudogroupoid_check(0, 4, fair_coin(), tiny), DimensionCapError);
}

TEST_CASE("composition classes of binary windows") {
  // r = 0, N = 3 binary: containment of both letter counts forces equal compositions
  const PseudogroupoidReport rep = pseudogroupoid_check(0, 3, fair_coin());
  CHECK(rep.composition_classes == 4);
  CHECK(rep.windows == 20);  // sum_j C(3,j)^2
  // r = 1, N = 3: negatives j ones, positives j or j+1 ones out of 4
  const PseudogroupoidReport wider = pseudogroupoid_check(1, 3, fair_coin());
  CHECK(wider.composition_classes == 8);
  CHECK(wider.windows == 1 * 1 + 1 * 4 + 3 * 4 + 3 * 6 + 3 * 6 + 3 * 4 + 1 * 4 + 1 * 1);
}

TEST_CASE("cylinder decomposition") {
  const CylinderReport one = commutant_projections_report(1, fair_coin());
  CHECK(one.labels.size() == 2);
  CHECK(one.weights == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  CHECK(one.identity_value == Rational(1, 2));
  CHECK(one.consistent);

  const CylinderReport zero = commutant_projections_report(0, three_letter());
  CHECK(zero.labels.size() == 1);
  CHECK(zero.identity_value == 1);

  const CylinderReport two = commutant_projections_report(2, three_letter());
  CHECK(two.labels.size() == 9);
  CHECK(two.weight_sum == 1);
  CHECK(two.identity_value == Rational(361, 2500));
  CHECK(two.consistent);
}

TEST_CASE("S_N matrix model: the side algebras commute") {
  for (int n : {2, 3}) {
    const SymmetricMatrixReport rep = symmetric_matrix_smoke(n, fair_coin());
    CHECK(rep.commute);
    CHECK(rep.dim_first > 1);
    CHECK(rep.dim_second > 1);
  }
  const PairedSystem sys = symmetric_window_system(3, fair_coin());
  CHECK(sys.size() == 20);
  CHECK(check_axioms(sys).commuting);
  CHECK_THROWS_AS(symmetric_window_system(3, three_letter()), DegenerateInputError);
  CHECK_THROWS_AS(symmetric_window_system(5, fair_coin()), DimensionCapError);
}
