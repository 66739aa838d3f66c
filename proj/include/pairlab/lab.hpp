#pragma once

#include "pairlab/ini.hpp"
#include "pairlab/operator_lab.hpp"
#include "pairlab/rational.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pairlab {

using Json = nlohmann::ordered_json;

class UnknownSuiteError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnwritablePathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> names{"axioms", "coupling", "torus", "symmetric", "regular"};
  return names;
}

/// Tolerances used by the suites; every one can be overridden from the [tolerances] section.
struct Tolerances {
  double span = 1e-8;
  double reciprocity = 1e-8;
  double spread = 1e-8;
  double clock = 1e-12;
  double trace = 1e-12;
  double sigmas = 3.0;
};

struct ExperimentConfig {
  /// Suite names; "all" expands to every known suite.
  std::vector<std::string> suites{"all"};
  std::uint64_t seed = kDefaultSeed;
  std::int64_t samples = 100000;
  Eigen::Index max_dim = kDefaultMaxDim;
  std::string format = "json";
  std::string out;
  Tolerances tol;

  std::vector<std::pair<int, int>> product_models{{2, 3}, {3, 4}, {2, 5}, {4, 4}};
  std::vector<std::string> system_files;
  std::vector<std::pair<int, int>> torus_pairs{{1, 2}, {2, 3}, {3, 2}, {3, 5}, {5, 3}, {5, 8}, {8, 5}};
  std::vector<int> clock_dims{4, 12, 64};
  std::vector<Rational> lattice_ratios{Rational(2, 5), Rational(7, 3), Rational(355, 113)};
  int lattice_random = 10000;
  std::vector<std::vector<int>> weyl_groups{{2}, {6}, {2, 3}};
  std::vector<std::vector<Rational>> symmetric_specs{{Rational(1, 2), Rational(3, 10), Rational(1, 5)},
                                                     {Rational(1, 2), Rational(1, 2)}};
  int r_max = 3;
  std::vector<int> regular_orders{5, 7};
  int crossed_samples = 100;
};

/// Throws ConfigError on unknown sections or keys and unparsable values.
ExperimentConfig config_from_ini(const IniDocument& doc);
ExperimentConfig load_config(const std::string& path);
/// Canonical key = value rendering of every field, the input of config_hash.
std::string canonical_config(const ExperimentConfig& cfg);
/// FNV-1a 64 of canonical_config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

enum class CheckKind { Exact, Absolute, Bound, Sigma };
enum class CheckStatus { Pass, Fail, Skip };

struct CheckRecord {
  std::string id;
  /// Claim the check is tied to, e.g. "coupling.reciprocity".
  std::string anchor;
  CheckKind kind = CheckKind::Exact;
  Json expected;
  Json observed;
  std::optional<double> tolerance;
  CheckStatus status = CheckStatus::Fail;
  std::string skip_reason;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<std::string> suites_run;
  std::vector<CheckRecord> checks;
  /// Printed to stdout only, so serialized reports stay byte-identical across runs.
  double wall_seconds = 0.0;

  int count(CheckStatus status) const;
  bool all_passed() const { return count(CheckStatus::Fail) == 0; }
};

/// Throws UnknownSuiteError for an empty list or an unknown name; module errors propagate.
RunReport run_suite(const ExperimentConfig& cfg);

Json report_json(const RunReport& report);
std::string report_csv(const RunReport& report);
/// Renders in cfg.format ("json" or "csv").
std::string render(const RunReport& report, const std::string& format);
/// Throws UnwritablePathError.
void emit(const RunReport& report, const std::string& format, const std::string& path);

std::string summary_line(const RunReport& report);

}  // namespace pairlab
