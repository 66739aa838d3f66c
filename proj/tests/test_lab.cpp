#include "doctest.h"

#include "pairlab/errors.hpp"
#include "pairlab/ini.hpp"
#include "pairlab/lab.hpp"

#include <algorithm>
#include <sstream>

using namespace pairlab;

namespace {

ExperimentConfig parse(const std::string& text) { return config_from_ini(parse_ini(text)); }

ExperimentConfig small_coupling() {
  return parse("[experiment]\nsuite = coupling\n[coupling]\nmodels = 2x3\n");
}

const CheckRecord* find(const RunReport& rep, const std::string& id) {
  for (const auto& c : rep.checks)
    if (c.id == id) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = parse(
      "# comment\n"
      "[experiment]\n"
      "suite = torus, regular\n"
      "seed = 17\n"
      "samples = 2000\n"
      "format = csv\n"
      "[tolerances]\n"
      "sigmas = 4\n"
      "[torus]\n"
      "pairs = 2/3 5/8\n"
      "weyl = 2x3, 4\n"
      "lattice_ratios = 7/3\n"
      "[symmetric]\n"
      "specs = 1/2,3/10,1/5; 1/2,1/2\n"
      "[regular]\n"
      "orders = 3\n");
  CHECK(cfg.suites == std::vector<std::string>{"torus", "regular"});
  CHECK(cfg.seed == 17);
  CHECK(cfg.samples == 2000);
  CHECK(cfg.format == "csv");
  CHECK(cfg.tol.sigmas == 4.0);
  CHECK(cfg.torus_pairs == std::vector<std::pair<int, int>>{{2, 3}, {5, 8}});
  CHECK(cfg.weyl_groups == std::vector<std::vector<int>>{{2, 3}, {4}});
  CHECK(cfg.lattice_ratios == std::vector<Rational>{Rational(7, 3)});
  REQUIRE(cfg.symmetric_specs.size() == 2);
  CHECK(cfg.symmetric_specs[0].size() == 3);
  CHECK(cfg.regular_orders == std::vector<int>{3});
  // untouched fields keep their defaults
  CHECK(cfg.clock_dims == ExperimentConfig{}.clock_dims);
}

TEST_CASE("malformed configs are rejected") {
  CHECK_THROWS_AS(parse("[experiment]\nseed = banana\n"), ConfigError);
  CHECK_THROWS_AS(parse("[experiment]\nsamples = 10\n"), ConfigError);
  CHECK_THROWS_AS(parse("[experiment]\nformat = xml\n"), ConfigError);
  CHECK_THROWS_AS(parse("[experiment]\ncolour = blue\n"), ConfigError);
  CHECK_THROWS_AS(parse("[nowhere]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[torus]\npairs = 2-3\n"), ConfigError);
  CHECK_THROWS_AS(parse("[tolerances]\nspan = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[experiment\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/dir/config.ini"), ConfigError);
}

TEST_CASE("suite selection") {
  ExperimentConfig cfg;
  cfg.suites = {};
  CHECK_THROWS_AS(run_suite(cfg), UnknownSuiteError);
  cfg.suites = {"nonsense"};
  CHECK_THROWS_AS(run_suite(cfg), UnknownSuiteError);
  cfg = small_coupling();
  cfg.suites = {"coupling", "coupling"};
  CHECK(run_suite(cfg).suites_run == std::vector<std::string>{"coupling"});
}

TEST_CASE("coupling suite on the 2x3 product model") {
  const RunReport rep = run_suite(small_coupling());
  CHECK(rep.all_passed());
  CHECK(rep.count(CheckStatus::Pass) == static_cast<int>(rep.checks.size()));
  const CheckRecord* dyn = find(rep, "coupling.product(2,3).dyn");
  REQUIRE(dyn != nullptr);
  CHECK(dyn->observed == "2/3");
  CHECK(std::is_sorted(rep.checks.begin(), rep.checks.end(),
                       [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; }));
}

TEST_CASE("reports are deterministic") {
  const ExperimentConfig cfg = small_coupling();
  const std::string a = render(run_suite(cfg), "json");
  const std::string b = render(run_suite(cfg), "json");
  CHECK(a == b);

  ExperimentConfig other = cfg;
  other.seed = cfg.seed + 1;
  const Json ja = report_json(run_suite(cfg));
  const Json jb = report_json(run_suite(other));
  CHECK(ja["header"]["config_hash"] != jb["header"]["config_hash"]);
  REQUIRE(ja["checks"].size() == jb["checks"].size());
  for (std::size_t i = 0; i < ja["checks"].size(); ++i) {
    const Json& x = ja["checks"][i];
    const Json& y = jb["checks"][i];
    CHECK(x["id"] == y["id"]);
    if (x["kind"] == "exact") CHECK(x["observed"] == y["observed"]);
  }
  CHECK(ja["summary"]["total"] == static_cast<int>(ja["checks"].size()));
}

TEST_CASE("csv rendering") {
  const RunReport rep = run_suite(small_coupling());
  const std::string csv = render(rep, "csv");
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header.rfind("id,anchor,kind,", 0) == 0);
  int rows = 0;
  for (std::string line; std::getline(lines, line);) {
    ++rows;
    CHECK(line.find(config_hash(rep.config)) != std::string::npos);
  }
  CHECK(rows == static_cast<int>(rep.checks.size()));
  CHECK_THROWS_AS(render(rep, "xml"), ConfigError);
}

TEST_CASE("emitting to an unwritable path") {
  const RunReport rep = run_suite(small_coupling());
  CHECK_THROWS_AS(emit(rep, "json", "/nonexistent/dir/out.json"), UnwritablePathError);
}

TEST_CASE("config hash tracks content only") {
  const ExperimentConfig a = small_coupling();
  ExperimentConfig b = small_coupling();
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.tol.span = 1e-6;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(canonical_config(a).find("seed=") != std::string::npos);
}
