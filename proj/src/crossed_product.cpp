#include "pairlab/crossed_product.hpp"

#include "pairlab/errors.hpp"

#include <algorithm>

namespace pairlab {

std::shared_ptr<const CrossedContext> CrossedContext::make(std::shared_ptr<const PairedSystem> sys, Side side) {
  auto ctx = std::make_shared<CrossedContext>();
  ctx->group_side = side;
  ctx->quotient = induced_quotient_action(*sys, other(side));
  const FundamentalDomain fd = fundamental_domain(*sys, other(side));
  ctx->block_measure.resize(ctx->quotient.partition.size());
  for (int b = 0; b < ctx->quotient.partition.size(); ++b) {
    // every point of an orbit carries the same weight, and the least one is the domain representative
    ctx->block_measure[b] = sys->weights()[ctx->quotient.partition.blocks[b].front()] / fd.measure;
  }
  ctx->system = std::move(sys);
  return ctx;
}

namespace {

void check_same_context(const CrossedElement& a, const CrossedElement& b) {
  if (a.context_ptr() != b.context_ptr()) throw ContractViolation("crossed elements belong to different crossed products");
}

// Coefficient psi transported through U_g: U_g M_psi = M_{shifted} U_g.
CrossedElement::Coefficients transported(const CrossedContext& ctx, int element, const CrossedElement::Coefficients& psi) {
  const FiniteGroup& grp = ctx.group();
  // left action: psi(g^-1 . beta); right action: psi(beta . h)
  const int acting = ctx.group_side == Side::G ? grp.inverse(element) : element;
  CrossedElement::Coefficients out(psi.size());
  for (int b = 0; b < psi.size(); ++b) out(b) = psi(ctx.quotient.table[acting][b]);
  return out;
}

}  // namespace

CrossedElement CrossedElement::unit(std::shared_ptr<const CrossedContext> ctx) {
  const int blocks = ctx->blocks();
  const int e = ctx->group().identity();
  return term(std::move(ctx), e, Coefficients::Ones(blocks));
}

CrossedElement CrossedElement::term(std::shared_ptr<const CrossedContext> ctx, int element, Coefficients phi) {
  if (element < 0 || element >= ctx->group().order()) throw StructuralError("unknown group element id");
  if (phi.size() != ctx->blocks()) throw ContractViolation("coefficient function indexed by the wrong orbit partition");
  CrossedElement a(std::move(ctx));
  a.add(element, phi);
  return a;
}

CrossedElement CrossedElement::random(std::shared_ptr<const CrossedContext> ctx, std::mt19937_64& rng, int max_terms) {
  const int order = ctx->group().order();
  const int blocks = ctx->blocks();
  std::uniform_int_distribution<int> count(1, std::max(1, max_terms));
  std::uniform_int_distribution<int> pick(0, order - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  CrossedElement a(std::move(ctx));
  const int terms = count(rng);
  for (int t = 0; t < terms; ++t) {
    Coefficients phi(blocks);
    for (int b = 0; b < blocks; ++b) {
      const double re = normal(rng);
      const double im = normal(rng);
      phi(b) = {re, im};
    }
    a.add(pick(rng), phi);
  }
  return a;
}

void CrossedElement::add(int element, const Coefficients& phi) {
  if (phi.size() != ctx_->blocks()) throw ContractViolation("coefficient function indexed by the wrong orbit partition");
  auto [it, inserted] = terms_.try_emplace(element, phi);
  if (!inserted) it->second += phi;
  if (it->second.isZero(0.0)) terms_.erase(it);
}

bool CrossedElement::is_zero(double tol) const {
  for (const auto& [g, phi] : terms_)
    if (phi.cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

CrossedElement CrossedElement::adjoint() const {
  CrossedElement out(ctx_);
  const FiniteGroup& grp = ctx_->group();
  for (const auto& [g, phi] : terms_) {
    const int inv = grp.inverse(g);
    out.add(inv, transported(*ctx_, inv, phi.conjugate()));
  }
  return out;
}

CrossedElement CrossedElement::operator+(const CrossedElement& other) const {
  check_same_context(*this, other);
  CrossedElement out = *this;
  for (const auto& [g, phi] : other.terms_) out.add(g, phi);
  return out;
}

CrossedElement CrossedElement::operator*(const CrossedElement& other) const { return cp_multiply(*this, other); }

CrossedElement cp_multiply(const CrossedElement& a, const CrossedElement& b) {
  check_same_context(a, b);
  const CrossedContext& ctx = a.context();
  CrossedElement out(a.context_ptr());
  for (const auto& [g, phi] : a.terms()) {
    for (const auto& [h, psi] : b.terms()) {
      out.add(ctx.group().multiply(g, h), phi.cwiseProduct(transported(ctx, g, psi)));
    }
  }
  return out;
}

std::complex<double> cp_trace(const CrossedElement& a, bool normalized) {
  const CrossedContext& ctx = a.context();
  auto it = a.terms().find(ctx.group().identity());
  if (it == a.terms().end()) return {0.0, 0.0};
  Rational scale = 1;
  if (!normalized) scale = fundamental_domain(*ctx.system, other(ctx.group_side)).measure;
  std::complex<double> total{0.0, 0.0};
  for (int b = 0; b < ctx.blocks(); ++b) total += it->second(b) * to_double(ctx.block_measure[b] * scale);
  return total;
}

ComplexMatrix cp_represent(const CrossedElement& a, const PairedSystem& sys) {
  const CrossedContext& ctx = a.context();
  if (!(sys == *ctx.system)) throw ContractViolation("crossed element belongs to a different paired system");
  const int n = sys.size();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& [g, phi] : a.terms()) {
    out += multiplicator<std::complex<double>>(sys, phi, other(ctx.group_side)) *
           rep_unitary<std::complex<double>>(sys, ctx.group_side, g);
  }
  return out;
}

RegularModel regular_model(std::vector<std::string> base_points, std::vector<Rational> base_weights,
                           FiniteGroup base_group, std::vector<std::vector<int>> base_action) {
  const int n0 = static_cast<int>(base_points.size());
  const int order = base_group.order();
  if (n0 == 0) throw StructuralError("regular model needs a nonempty base space");
  if (static_cast<int>(base_weights.size()) != n0) throw StructuralError("base weights length mismatch");
  if (static_cast<int>(base_action.size()) != order) throw StructuralError("base action has wrong row count");
  for (int g = 0; g < order; ++g) {
    if (static_cast<int>(base_action[g].size()) != n0) throw StructuralError("base action row has wrong length");
    for (int x = 0; x < n0; ++x) {
      const int y = base_action[g][x];
      if (y < 0 || y >= n0) throw StructuralError("base action image out of range");
      if (g != base_group.identity() && y == x) throw StructuralError("base action is not free");
      for (int h = 0; h < order; ++h) {
        if (base_action[h][y] != base_action[base_group.multiply(g, h)][x])
          throw StructuralError("base action is not a right action");
      }
    }
  }

  const int size = n0 * order;
  std::vector<std::string> points(size);
  std::vector<Rational> weights(size);
  std::vector<std::vector<int>> left(order, std::vector<int>(size));
  std::vector<std::vector<int>> right(order, std::vector<int>(size));
  for (int x = 0; x < n0; ++x) {
    for (int q = 0; q < order; ++q) {
      const int p = x * order + q;
      points[p] = "(" + base_points[x] + "," + base_group.name(q) + ")";
      weights[p] = base_weights[x];
      for (int g = 0; g < order; ++g) {
        left[g][p] = x * order + base_group.multiply(g, q);
        right[g][p] = base_action[g][x] * order + base_group.multiply(q, g);
      }
    }
  }
  PairedSystem sys(std::move(points), std::move(weights), base_group, base_group, std::move(left), std::move(right));

  std::vector<int> domain(n0);
  for (int x = 0; x < n0; ++x) domain[x] = x * order + base_group.identity();
  return RegularModel{std::move(base_group), std::move(base_points), std::move(base_weights), std::move(base_action),
                      std::move(sys), std::move(domain)};
}

RegularModel regular_model_cyclic(int n) {
  FiniteGroup zn = FiniteGroup::cyclic(n);
  std::vector<std::string> points(n);
  std::vector<std::vector<int>> action(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x) {
    points[x] = std::to_string(x);
    for (int g = 0; g < n; ++g) action[g][x] = (x + g) % n;
  }
  return regular_model(std::move(points), std::vector<Rational>(n, Rational(1, n)), std::move(zn), std::move(action));
}

DomainActions induced_on_common_domain(const RegularModel& model) {
  const PairedSystem& sys = model.system;
  const int n0 = static_cast<int>(model.base_points.size());
  std::vector<int> point_to_base(sys.size(), -1);
  for (int x = 0; x < n0; ++x) point_to_base[model.common_domain[x]] = x;

  auto transport = [&](Side partition_side) {
    const QuotientAction qa = induced_quotient_action(sys, partition_side);
    std::vector<int> block_to_base(qa.partition.size(), -1);
    for (int b = 0; b < qa.partition.size(); ++b) {
      for (int p : qa.partition.blocks[b]) {
        if (point_to_base[p] < 0) continue;
        if (block_to_base[b] >= 0) throw ContractViolation("common domain meets an orbit twice");
        block_to_base[b] = point_to_base[p];
      }
      if (block_to_base[b] < 0) throw ContractViolation("common domain misses an orbit");
    }
    std::vector<std::vector<int>> table(qa.table.size(), std::vector<int>(n0));
    for (std::size_t g = 0; g < qa.table.size(); ++g)
      for (int x = 0; x < n0; ++x) {
        const int block = qa.partition.point_to_block[model.common_domain[x]];
        table[g][x] = block_to_base[qa.table[g][block]];
      }
    return table;
  };
  return DomainActions{transport(Side::G), transport(Side::H)};
}

}  // namespace pairlab
