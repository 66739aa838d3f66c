#pragma once

#include "pairlab/rational.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pairlab {

/// Which of the two commuting actions: G acts on the left, H on the right.
enum class Side { G, H };

constexpr Side other(Side side) { return side == Side::G ? Side::H : Side::G; }
std::string_view to_string(Side side);

/// A finite group stored as a full multiplication table over element ids 0..order-1.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  /// Validates closure, associativity, identity and inverses; throws StructuralError otherwise.
  static FiniteGroup from_table(std::vector<std::string> names, std::vector<std::vector<int>> table);

  static FiniteGroup cyclic(int n);
  /// S_n with elements in lexicographic one-line order, named by their images ("120" sends 0->1, 1->2, 2->0).
  /// Product is composition: (s*t)(i) = s(t(i)).
  static FiniteGroup symmetric(int n);
  static FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

  int order() const { return static_cast<int>(names_.size()); }
  int identity() const { return identity_; }
  int multiply(int a, int b) const { return table_[a][b]; }
  int inverse(int a) const { return inverse_[a]; }
  const std::string& name(int id) const { return names_[id]; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::vector<int>>& table() const { return table_; }

  /// Element id by name, or -1.
  int find(std::string_view name) const;
  int element_order(int id) const;

  bool operator==(const FiniteGroup&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  int identity_ = 0;
};

/// A subgroup realized as its own FiniteGroup; embedding[i] is the parent id of element i.
struct Subgroup {
  FiniteGroup group;
  std::vector<int> embedding;
};

/// Throws StructuralError when the subset is not closed under multiplication and inverses.
Subgroup subgroup_of(const FiniteGroup& parent, std::vector<int> elements);
Subgroup generated_subgroup(const FiniteGroup& parent, const std::vector<int>& generators);

/// Shift lengths of two translation actions on the line, kept exact.
struct ShiftPairSpec {
  Rational lambda1;
  Rational lambda2;

  /// Throws DegenerateInputError unless both are positive.
  void validate() const;
};

/// Finite measured space with a left G-action and a right H-action given by full tables.
///
/// Actions are checked on construction to be bijective per element, homomorphic
/// (g(g'x) = (gg')x and (xh)h' = x(hh')) and weight preserving.  Commutation,
/// freeness and transversality are properties, reported by check_axioms.
class PairedSystem {
 public:
  PairedSystem(std::vector<std::string> points, std::vector<Rational> weights, FiniteGroup g, FiniteGroup h,
               std::vector<std::vector<int>> left_action, std::vector<std::vector<int>> right_action);

  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<std::string>& points() const { return points_; }
  const std::vector<Rational>& weights() const { return weights_; }
  const FiniteGroup& group(Side side) const { return side == Side::G ? g_ : h_; }
  const std::vector<std::vector<int>>& action_table(Side side) const { return side == Side::G ? left_ : right_; }

  /// g.x for Side::G, x.h for Side::H.
  int act(Side side, int element, int point) const {
    return side == Side::G ? left_[element][point] : right_[element][point];
  }

  /// Point id by name, or -1.
  int find_point(std::string_view name) const;

  const std::optional<ShiftPairSpec>& shift_origin() const { return shift_origin_; }
  PairedSystem with_shift_origin(ShiftPairSpec spec) const;

  bool operator==(const PairedSystem& other) const;

 private:
  std::vector<std::string> points_;
  std::vector<Rational> weights_;
  FiniteGroup g_;
  FiniteGroup h_;
  std::vector<std::vector<int>> left_;
  std::vector<std::vector<int>> right_;
  std::optional<ShiftPairSpec> shift_origin_;
};

struct AxiomReport {
  bool free_G = false;
  bool free_H = false;
  bool commuting = false;
  bool transversal = false;
  bool ergodic = false;

  bool all() const { return free_G && free_H && commuting && transversal && ergodic; }
};

/// Blocks are sorted internally and ordered by their smallest point id.
struct OrbitPartition {
  std::vector<std::vector<int>> blocks;
  std::vector<int> point_to_block;

  int size() const { return static_cast<int>(blocks.size()); }
};

struct FundamentalDomain {
  std::vector<int> points;
  Side for_group = Side::G;
  Rational measure;
};

struct CouplingReport {
  Rational lambda_gh;
  Rational lambda_hg;
  Rational mu_fg;
  Rational mu_fh;
  std::string orientation_note;
};

/// Action of one group on the orbit space of the other; table[element][block] is the image block.
struct QuotientAction {
  Side acting = Side::H;
  OrbitPartition partition;
  std::vector<std::vector<int>> table;
  /// {lambda2/lambda1} and {lambda1/lambda2} for systems built from a ShiftPairSpec.
  std::optional<std::pair<Rational, Rational>> rotation_numbers;
};

AxiomReport check_axioms(const PairedSystem& sys);
OrbitPartition orbits(const PairedSystem& sys, Side side);

/// One representative per orbit, the least point id; measure is the sum of their weights.
FundamentalDomain fundamental_domain(const PairedSystem& sys, Side side);

/// lambda(G,H) = mu(F_H)/mu(F_G) exactly.  Throws DegenerateInputError on a zero-measure domain.
CouplingReport dyn_coupling(const PairedSystem& sys);

/// Action of the other group on the orbits of `side`.  Throws ContractViolation if the actions do not commute.
QuotientAction induced_quotient_action(const PairedSystem& sys, Side side);

std::pair<Rational, Rational> rotation_numbers(const ShiftPairSpec& spec);

struct TranslationPair {
  PairedSystem system;
  bool trivial_intersection = false;
};

/// X = K with uniform weights, G acting by left and H by right translation.
TranslationPair translation_pair(const FiniteGroup& k, const std::vector<int>& g_elements,
                                 const std::vector<int>& h_elements);

/// Z_m x Z_n with unit weights, G = Z_m on the first coordinate and H = Z_n on the second.
/// Point (a,b) has id a*n + b.
PairedSystem product_model(int m, int n);

/// The two shifts restricted to the common refinement lattice delta*Z modulo lcm(lambda1, lambda2),
/// point weights delta.  G = Z lambda1, H = Z lambda2.
PairedSystem shift_pair_model(const ShiftPairSpec& spec);

PairedSystem scale_weights(const PairedSystem& sys, const Rational& factor);

/// Relabels point k as size-1-k (same system, reversed ids).
PairedSystem reverse_points(const PairedSystem& sys);

}  // namespace pairlab
