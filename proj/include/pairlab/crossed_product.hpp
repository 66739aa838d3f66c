#pragma once

#include "pairlab/measure_systems.hpp"
#include "pairlab/operator_lab.hpp"

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <vector>

namespace pairlab {

/// Shared data of a crossed product: the group acting, its orbit-space of the other
/// action (where coefficients live) and the induced action on that orbit space.
struct CrossedContext {
  std::shared_ptr<const PairedSystem> system;
  Side group_side = Side::G;
  QuotientAction quotient;  // action of group_side on the orbits of other(group_side)
  /// Normalized measure of each orbit block (weight of one point over the fundamental-domain measure).
  std::vector<Rational> block_measure;

  static std::shared_ptr<const CrossedContext> make(std::shared_ptr<const PairedSystem> sys, Side side);

  int blocks() const { return quotient.partition.size(); }
  const FiniteGroup& group() const { return system->group(group_side); }
};

/// Finite formal sum sum_g phi_g U_g with phi_g given per orbit block.
class CrossedElement {
 public:
  using Coefficients = Eigen::VectorXcd;

  explicit CrossedElement(std::shared_ptr<const CrossedContext> ctx) : ctx_(std::move(ctx)) {}

  static CrossedElement unit(std::shared_ptr<const CrossedContext> ctx);
  /// phi * U_g
  static CrossedElement term(std::shared_ptr<const CrossedContext> ctx, int element, Coefficients phi);
  static CrossedElement random(std::shared_ptr<const CrossedContext> ctx, std::mt19937_64& rng, int max_terms = 3);

  const CrossedContext& context() const { return *ctx_; }
  const std::shared_ptr<const CrossedContext>& context_ptr() const { return ctx_; }
  const std::map<int, Coefficients>& terms() const { return terms_; }

  /// Adds phi to the coefficient of U_g; terms that become identically zero are dropped.
  void add(int element, const Coefficients& phi);
  bool is_zero(double tol = 0.0) const;

  /// (phi U_g)^* = (conj(phi) o g) U_{g^-1}
  CrossedElement adjoint() const;

  CrossedElement operator+(const CrossedElement& other) const;
  CrossedElement operator*(const CrossedElement& other) const;

 private:
  std::shared_ptr<const CrossedContext> ctx_;
  std::map<int, Coefficients> terms_;
};

/// (sum phi_g U_g)(sum psi_h U_h) = sum_k (sum_{gh=k} phi_g (psi_h o g^-1)) U_k.  Throws ContractViolation on tag mismatch.
CrossedElement cp_multiply(const CrossedElement& a, const CrossedElement& b);

/// Integral of the identity coefficient against the quotient measure (normalized to 1 unless `normalized` is false,
/// in which case the raw fundamental-domain measure is used).
std::complex<double> cp_trace(const CrossedElement& a, bool normalized = true);

/// sum_g M_{phi_g} U_g on l^2(X).  Throws ContractViolation if `sys` is not the element's system.
ComplexMatrix cp_represent(const CrossedElement& a, const PairedSystem& sys);

/// X = X0 x G0 with g.(x,q) = (x, g q) and (x,q).h = (x h, q h).
struct RegularModel {
  FiniteGroup base_group;
  std::vector<std::string> base_points;
  std::vector<Rational> base_weights;
  std::vector<std::vector<int>> base_action;  // base_action[g][x] = x.g
  PairedSystem system;
  /// X0 x {e}, a fundamental domain for both actions.
  std::vector<int> common_domain;

  int point(int x, int q) const { return x * base_group.order() + q; }
};

/// Throws StructuralError if the base action is not a free right action.
RegularModel regular_model(std::vector<std::string> base_points, std::vector<Rational> base_weights,
                           FiniteGroup base_group, std::vector<std::vector<int>> base_action);

/// X0 = Z_n with G0 = Z_n acting by rotation, uniform weights.
RegularModel regular_model_cyclic(int n);

/// The two induced actions transported to the common fundamental domain, indexed by base point:
/// on_domain_from_h[h][x] and on_domain_from_g[g][x].
struct DomainActions {
  std::vector<std::vector<int>> from_h;
  std::vector<std::vector<int>> from_g;
};
DomainActions induced_on_common_domain(const RegularModel& model);

}  // namespace pairlab
