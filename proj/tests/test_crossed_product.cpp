#include "doctest.h"

#include "pairlab/crossed_product.hpp"
#include "pairlab/errors.hpp"

#include <numeric>

using namespace pairlab;

namespace {

using C = std::complex<double>;

// Two copies of Z_2 x Z_2 with weights 1 and 2; G flips the first bit, H the second.
PairedSystem two_layer_system() {
  std::vector<std::string> names;
  std::vector<Rational> weights;
  std::vector<std::vector<int>> left(2, std::vector<int>(8)), right(2, std::vector<int>(8));
  for (int layer = 0; layer < 2; ++layer)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const int id = layer * 4 + a * 2 + b;
        names.push_back(std::to_string(layer) + ":" + std::to_string(a) + std::to_string(b));
        weights.emplace_back(layer + 1);
        for (int g = 0; g < 2; ++g) {
          left[g][id] = layer * 4 + ((a + g) % 2) * 2 + b;
          right[g][id] = layer * 4 + a * 2 + (b + g) % 2;
        }
      }
  return PairedSystem(names, weights, FiniteGroup::cyclic(2), FiniteGroup::cyclic(2), left, right);
}

double max_abs(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// sum_x pi(a)_xx mu(x) / mu(X)
C weighted_trace(const ComplexMatrix& m, const PairedSystem& sys) {
  C total = 0;
  Rational mass = 0;
  for (int x = 0; x < sys.size(); ++x) {
    total += m(x, x) * to_double(sys.weights()[x]);
    mass += sys.weights()[x];
  }
  return total / to_double(mass);
}

}  // namespace

TEST_CASE("crossed product algebra laws against the regular representation") {
  const std::vector<std::shared_ptr<const PairedSystem>> systems{
      std::make_shared<const PairedSystem>(product_model(2, 3)),
      std::make_shared<const PairedSystem>(regular_model_cyclic(3).system),
      std::make_shared<const PairedSystem>(two_layer_system())};
  std::mt19937_64 rng(5);
  for (const auto& sys : systems) {
    for (Side side : {Side::G, Side::H}) {
      const auto ctx = CrossedContext::make(sys, side);
      CHECK(ctx->blocks() == orbits(*sys, other(side)).size());
      const CrossedElement one = CrossedElement::unit(ctx);
      CHECK(max_abs(cp_represent(one, *sys) - ComplexMatrix::Identity(sys->size(), sys->size())) < 1e-15);
      for (int k = 0; k < 20; ++k) {
        const CrossedElement a = CrossedElement::random(ctx, rng);
        const CrossedElement b = CrossedElement::random(ctx, rng);
        const CrossedElement c = CrossedElement::random(ctx, rng);
        const ComplexMatrix pa = cp_represent(a, *sys), pb = cp_represent(b, *sys), pc = cp_represent(c, *sys);
        CHECK(max_abs(cp_represent(a * b, *sys) - pa * pb) < 1e-10);
        CHECK(max_abs(cp_represent((a * b) * c, *sys) - cp_represent(a * (b * c), *sys)) < 1e-10);
        CHECK(max_abs(cp_represent(a + b, *sys) - pa - pb) < 1e-12);
        CHECK(max_abs(cp_represent(a.adjoint(), *sys) - pa.adjoint()) < 1e-12);
        CHECK(max_abs(cp_represent((a * b).adjoint(), *sys) - cp_represent(b.adjoint() * a.adjoint(), *sys)) < 1e-10);
        CHECK(max_abs(cp_represent(a * one, *sys) - pa) < 1e-12);

        CHECK(std::abs(cp_trace(a) - weighted_trace(pa, *sys)) < 1e-12);
        CHECK(std::abs(cp_trace(a * b) - cp_trace(b * a)) < 1e-10);
        const C aa = cp_trace(a.adjoint() * a);
        CHECK(std::abs(aa.imag()) < 1e-10);
        CHECK(aa.real() > 0.0);
      }
    }
  }
}

TEST_CASE("trace is Tr/N for uniform weights and scales with the domain measure") {
  const auto sys = std::make_shared<const PairedSystem>(product_model(3, 4));
  const auto ctx = CrossedContext::make(sys, Side::G);
  std::mt19937_64 rng(9);
  const CrossedElement a = CrossedElement::random(ctx, rng, 4);
  CHECK(std::abs(cp_trace(a) - cp_represent(a, *sys).trace() / 12.0) < 1e-12);
  const Rational mu = fundamental_domain(*sys, Side::H).measure;
  CHECK(std::abs(cp_trace(a, false) - cp_trace(a) * to_double(mu)) < 1e-12);
  CHECK(cp_trace(CrossedElement::unit(ctx)) == C(1.0));
}

TEST_CASE("covariance: U_g M_psi U_g^* = M_{psi o g^-1}") {
  const auto sys = std::make_shared<const PairedSystem>(product_model(2, 3));
  const auto ctx = CrossedContext::make(sys, Side::H);
  const int blocks = ctx->blocks();
  CrossedElement::Coefficients psi(blocks);
  for (int b = 0; b < blocks; ++b) psi(b) = C(b + 1, -b);
  for (int h = 0; h < sys->group(Side::H).order(); ++h) {
    const CrossedElement u = CrossedElement::term(ctx, h, CrossedElement::Coefficients::Ones(blocks));
    const CrossedElement m = CrossedElement::term(ctx, sys->group(Side::H).identity(), psi);
    const ComplexMatrix direct = rep_unitary(*sys, Side::H, h) * multiplicator<C>(*sys, psi, Side::G) *
                                 rep_unitary(*sys, Side::H, h).adjoint();
    const CrossedElement conj = u * m * u.adjoint();
    REQUIRE(conj.terms().size() == 1);
    CHECK(conj.terms().begin()->first == sys->group(Side::H).identity());
    CHECK(max_abs(cp_represent(conj, *sys) - direct) < 1e-12);
  }
}

TEST_CASE("zero terms are dropped and contexts are not mixed") {
  const auto sys = std::make_shared<const PairedSystem>(product_model(2, 2));
  const auto ctx = CrossedContext::make(sys, Side::G);
  const auto other_ctx = CrossedContext::make(sys, Side::H);
  CrossedElement a = CrossedElement::term(ctx, 1, CrossedElement::Coefficients::Ones(2));
  a.add(1, -CrossedElement::Coefficients::Ones(2));
  CHECK(a.terms().empty());
  CHECK(a.is_zero());
  const CrossedElement u = CrossedElement::unit(ctx);
  CHECK_THROWS_AS(cp_multiply(u, CrossedElement::unit(other_ctx)), ContractViolation);
  CHECK_THROWS_AS(u + CrossedElement::unit(other_ctx), ContractViolation);
  CHECK_THROWS_AS(CrossedElement::term(ctx, 0, CrossedElement::Coefficients::Ones(3)), ContractViolation);
  CHECK_THROWS_AS(CrossedElement::term(ctx, 7, CrossedElement::Coefficients::Ones(2)), StructuralError);
  CHECK_THROWS_AS(cp_represent(u, product_model(2, 3)), ContractViolation);
}

TEST_CASE("regular models") {
  for (int n : {2, 5, 7}) {
    const RegularModel model = regular_model_cyclic(n);
    CHECK(model.system.size() == n * n);
    CHECK(check_axioms(model.system).free_G);
    CHECK(check_axioms(model.system).free_H);
    CHECK(check_axioms(model.system).commuting);
    CHECK(dyn_coupling(model.system).lambda_gh == 1);

    // X0 x {e} meets every orbit of either action exactly once
    for (Side side : {Side::G, Side::H}) {
      const OrbitPartition part = orbits(model.system, side);
      std::vector<int> hits(part.size(), 0);
      for (int p : model.common_domain) ++hits[part.point_to_block[p]];
      CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    }

    const DomainActions acts = induced_on_common_domain(model);
    const FiniteGroup& grp = model.base_group;
    for (int g = 0; g < grp.order(); ++g) {
      CHECK(acts.from_h[g] == model.base_action[g]);
      CHECK(acts.from_g[g] == model.base_action[grp.inverse(g)]);
    }
  }
}

TEST_CASE("regular model over a non-abelian group") {
  const FiniteGroup s3 = FiniteGroup::symmetric(3);
  // X0 = S3 with the free right action x.g = x g
  std::vector<std::vector<int>> action(6, std::vector<int>(6));
  for (int g = 0; g < 6; ++g)
    for (int x = 0; x < 6; ++x) action[g][x] = s3.multiply(x, g);
  const RegularModel model = regular_model(s3.names(), std::vector<Rational>(6, Rational(1, 6)), s3, action);
  CHECK(model.system.size() == 36);
  CHECK(check_axioms(model.system).commuting);
  const DomainActions acts = induced_on_common_domain(model);
  for (int g = 0; g < 6; ++g) CHECK(acts.from_h[g] == action[g]);
}

TEST_CASE("regular model rejects bad base actions") {
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  const std::vector<std::vector<int>> trivial{{0, 1}, {0, 1}};
  CHECK_THROWS_AS(regular_model({"a", "b"}, {Rational(1), Rational(1)}, z2, trivial), StructuralError);
  CHECK_THROWS_AS(regular_model({}, {}, z2, {{}, {}}), StructuralError);
  CHECK_THROWS_AS(regular_model({"a", "b"}, {Rational(1)}, z2, {{0, 1}, {1, 0}}), StructuralError);
}
