#pragma once

#include "pairlab/measure_systems.hpp"
#include "pairlab/rational.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pairlab {

/// Bernoulli weights alpha_1 >= ... >= alpha_k > 0 summing to 1, optionally a truncation
/// of a countable alphabet whose dropped tail carried mass `tail_mass`.
struct BernoulliSpec {
  std::vector<Rational> weights;
  Rational tail_mass = 0;

  /// Throws DegenerateInputError on empty, non-positive, unsorted or non-normalized weights.
  void validate() const;
  int k() const { return static_cast<int>(weights.size()); }
  /// Some weight repeats, so permuting equal-weight letters is an extra symmetry.
  bool degenerate() const;
  Rational power_sum(int j) const;
};

/// Renormalizes the first k weights of a longer (possibly countable) list and records the dropped mass.
BernoulliSpec truncate_spec(const std::vector<Rational>& weights, int k);

/// Symbols at indices -N..-1 and 1..N+r.  neg[i-1] = x_{-i}, pos[i-1] = x_i.
struct SeqWindow {
  int r = 0;
  int n = 0;
  std::vector<int> neg;
  std::vector<int> pos;

  /// x_i for i in {-N..-1} and {1..N+r}; throws ContractViolation otherwise.
  int at(int i) const;
};

/// x_{-i} = x_{i+r} for 1 <= i <= N
bool in_X0r(const SeqWindow& w);
/// in_X0r and x_{-i} = x_i for 1 <= i <= r
bool in_Xprime0r(const SeqWindow& w);

/// (sum alpha_i^2)^r
Rational coupling_formula(const BernoulliSpec& spec, int r);

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::int64_t samples = 0;
  std::int64_t hits = 0;

  double z_score(double exact) const;
};

inline constexpr int kMcStreams = 4;

/// Fraction of X_{0,r} windows (positives iid, negatives forced) that lie in X'_{0,r}.
/// Parallel over `streams` seeded streams, merged in stream order.
McEstimate mc_coupling(const BernoulliSpec& spec, int r, std::int64_t samples, std::uint64_t seed,
                       int streams = kMcStreams);

/// Cycle lengths of a permutation of {0..n-1} in one-line form.
std::vector<int> cycle_type(const std::vector<int>& perm);

/// prod_{j>=2} (sum_k alpha_k^j)^{c_j} for the cycle-length multiset.
Rational character_value(const std::vector<int>& cycle_lengths, const BernoulliSpec& spec);

/// Fraction of iid sequences on 1..N fixed by perm (0-based one-line form on 1..N).
McEstimate mc_character(const std::vector<int>& perm, const BernoulliSpec& spec, std::int64_t samples,
                        std::uint64_t seed, int streams = kMcStreams);

struct PseudogroupoidOptions {
  int trials = 200;
  std::uint64_t seed = 1;
  /// Let the positive-side move also touch index -1, which must break commutation.
  bool corrupt_overlap = false;
  std::int64_t max_windows = 200000;
};

struct PseudogroupoidReport {
  int r = 0;
  int n = 0;
  std::int64_t windows = 0;
  bool homogeneity = false;
  bool commutation = false;
  bool ergodicity = false;
  std::int64_t neg_blocks = 0;
  std::int64_t pos_blocks = 0;
  std::int64_t components = 0;
  std::int64_t composition_classes = 0;
  /// Window, sigma-, sigma+ of a non-commuting pair, described in text.
  std::optional<std::string> commutation_witness;

  bool all() const { return homogeneity && commutation && ergodicity; }
};

/// Window-scale checks over all windows whose negative composition is contained in the positive one.
PseudogroupoidReport pseudogroupoid_check(int r, int n, const BernoulliSpec& spec,
                                          const PseudogroupoidOptions& options = {});

struct CylinderReport {
  int r = 0;
  std::vector<std::vector<int>> labels;
  std::vector<Rational> weights;
  Rational weight_sum;
  /// sum_a alpha_a * alpha_a
  Rational identity_value;
  Rational coupling;
  bool consistent = false;
};

CylinderReport commutant_projections_report(int r, const BernoulliSpec& spec);

/// Two S_n actions on binary windows (negatives, positives) of equal composition.
PairedSystem symmetric_window_system(int n, const BernoulliSpec& spec);

struct SymmetricMatrixReport {
  int n = 0;
  int points = 0;
  Eigen::Index dim_first = 0;
  Eigen::Index dim_second = 0;
  double max_commutator = 0.0;
  bool commute = false;
};

/// Builds both side algebras for n <= 4 on a binary spec and checks they commute.
SymmetricMatrixReport symmetric_matrix_smoke(int n, const BernoulliSpec& spec);

}  // namespace pairlab
