// pairlab: run verification suites on commuting actions and print or write a report.
//
// exit codes: 0 all checks pass, 1 some check failed, 2 unknown or empty suite (or bad usage),
// 3 malformed config, 4 dimension cap exceeded, 5 output path not writable.

#include "pairlab/errors.hpp"
#include "pairlab/lab.hpp"
#include "pairlab/symmetric_pseudogroupoid.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace pairlab;

enum Exit { kOk = 0, kChecksFailed = 1, kBadSuite = 2, kBadConfig = 3, kDimCap = 4, kUnwritable = 5 };

struct PointQuery {
  std::string weights;
  std::optional<int> r;
  std::optional<int> n;
};

std::vector<Rational> parse_weights(const std::string& text) {
  std::string spaced = text;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::vector<Rational> out;
  for (const auto& t : split_tokens(spaced)) {
    try {
      out.push_back(parse_rational(t));
    } catch (const std::exception&) {
      throw ConfigError("--weights: cannot parse '" + t + "'");
    }
  }
  return out;
}

// Single (spec, r) evaluation of the symmetric coupling: exact value against Monte Carlo.
Json symmetric_point(const ExperimentConfig& cfg, const PointQuery& q) {
  const BernoulliSpec spec{q.weights.empty() ? cfg.symmetric_specs.front() : parse_weights(q.weights), 0};
  spec.validate();
  const Rational exact = coupling_formula(spec, *q.r);
  const McEstimate est = mc_coupling(spec, *q.r, cfg.samples, cfg.seed);
  Json out;
  out["weights"] = Json::array();
  for (const auto& w : spec.weights) out["weights"].push_back(to_string(w));
  out["r"] = *q.r;
  out["seed"] = cfg.seed;
  out["config_hash"] = config_hash(cfg);
  out["exact"] = to_string(exact);
  out["exact_value"] = to_double(exact);
  out["mc_mean"] = est.mean;
  out["mc_stderr"] = est.stderr_;
  out["samples"] = est.samples;
  out["z_score"] = est.z_score(to_double(exact));
  out["degenerate_flag"] = spec.degenerate();
  if (q.n) {
    const PseudogroupoidReport rep = pseudogroupoid_check(*q.r, *q.n, spec);
    out["pseudogroupoid"] = {{"N", *q.n},
                             {"windows", rep.windows},
                             {"homogeneity", rep.homogeneity},
                             {"commutation", rep.commutation},
                             {"ergodicity", rep.ergodicity}};
  }
  return out;
}

std::string point_csv(const Json& j) {
  std::string w;
  for (const auto& x : j["weights"]) w += (w.empty() ? "" : " ") + x.get<std::string>();
  std::ostringstream os;
  os << "weights,r,exact,mc_mean,mc_stderr,z_score,degenerate_flag,config_hash,seed\n"
     << w << ',' << j["r"].dump() << ',' << j["exact"].get<std::string>() << ',' << j["mc_mean"].dump() << ','
     << j["mc_stderr"].dump() << ',' << j["z_score"].dump() << ',' << j["degenerate_flag"].dump() << ','
     << j["config_hash"].get<std::string>() << ',' << j["seed"].dump() << '\n';
  return os.str();
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UnwritablePathError("cannot write " + path);
  out << text;
  if (!out.flush()) throw UnwritablePathError("failed writing " + path);
}

int run(int argc, char** argv) {
  CLI::App app{"Numerical lab for commuting group actions and their coupling constants"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> samples;
  std::optional<long> max_dim;
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::string config_path;
  app.add_option("--seed", seed, "random seed");
  app.add_option("--out", out, "output file (default: standard output)");
  app.add_option("--format", format, "json or csv");
  app.add_option("--samples", samples, "Monte Carlo samples");
  app.add_option("--max-dim", max_dim, "largest Hilbert space dimension for matrix work");
  app.add_option("--config", config_path, "experiment config (INI)");

  auto* verify = app.add_subcommand("verify", "axiom checks on product models, a translation pair and system files");
  std::vector<std::string> files;
  verify->add_option("--system", files, "system description file(s) to check");

  auto* coupling = app.add_subcommand("coupling", "dynamical and Murray-von Neumann coupling of product models");
  std::vector<std::string> models;
  coupling->add_option("--model", models, "product model as MxN, repeatable");

  auto* torus = app.add_subcommand("torus", "rational rotation models, lattices, Weyl systems");
  std::optional<int> p, q;
  torus->add_option("--p", p, "numerator of the coupling p/q");
  torus->add_option("--q", q, "denominator of the coupling p/q");

  auto* symmetric = app.add_subcommand("symmetric", "Bernoulli sequence-space model");
  PointQuery point;
  symmetric->add_option("--weights", point.weights, "comma-separated rational weights, descending");
  symmetric->add_option("--r", point.r, "shift r; with it a single exact-vs-Monte-Carlo evaluation is printed");
  symmetric->add_option("--N", point.n, "window radius for the pseudogroupoid check (needs --r)");

  auto* regular = app.add_subcommand("regular", "regular models and crossed-product traces");
  std::vector<int> orders;
  regular->add_option("--n", orders, "cyclic base group order, repeatable");

  auto* all = app.add_subcommand("all", "every suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadSuite;
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (samples) {
      if (*samples < 1000) throw ConfigError("--samples must be at least 1000");
      cfg.samples = *samples;
    }
    if (max_dim) {
      if (*max_dim < 1) throw ConfigError("--max-dim must be positive");
      cfg.max_dim = *max_dim;
    }
    if (format) {
      if (*format != "json" && *format != "csv") throw ConfigError("--format must be json or csv");
      cfg.format = *format;
    }
    if (out) cfg.out = *out;

    if (verify->parsed()) {
      cfg.suites = {"axioms"};
      if (!files.empty()) cfg.system_files = files;
    } else if (coupling->parsed()) {
      cfg.suites = {"coupling"};
      if (!models.empty()) {
        cfg.product_models.clear();
        for (const auto& m : models) {
          const auto x = m.find('x');
          if (x == std::string::npos) throw ConfigError("--model expects MxN, got '" + m + "'");
          try {
            cfg.product_models.emplace_back(std::stoi(m.substr(0, x)), std::stoi(m.substr(x + 1)));
          } catch (const std::logic_error&) {
            throw ConfigError("--model expects MxN, got '" + m + "'");
          }
        }
      }
    } else if (torus->parsed()) {
      cfg.suites = {"torus"};
      if (p.has_value() != q.has_value()) throw ConfigError("--p and --q go together");
      if (p) cfg.torus_pairs = {{*p, *q}};
    } else if (symmetric->parsed()) {
      cfg.suites = {"symmetric"};
      if (!point.weights.empty() && !point.r) cfg.symmetric_specs = {parse_weights(point.weights)};
      if (point.n && !point.r) throw ConfigError("--N needs --r");
      if (point.r) {
        const Json j = symmetric_point(cfg, point);
        write_output(cfg.format == "csv" ? point_csv(j) : j.dump(2) + "\n", cfg.out);
        return kOk;
      }
    } else if (regular->parsed()) {
      cfg.suites = {"regular"};
      if (!orders.empty()) cfg.regular_orders = orders;
    } else if (all->parsed()) {
      cfg.suites = {"all"};
    } else if (config_path.empty()) {
      throw UnknownSuiteError("no suite given: use a subcommand or --config");
    }

    if (!cfg.out.empty()) {
      // fail before the run, not after it
      std::ofstream probe(cfg.out, std::ios::app);
      if (!probe) throw UnwritablePathError("cannot write " + cfg.out);
    }
    const RunReport report = run_suite(cfg);
    if (cfg.out.empty()) {
      std::cout << render(report, cfg.format);
      std::cerr << summary_line(report) << '\n';
    } else {
      emit(report, cfg.format, cfg.out);
      std::cout << summary_line(report) << '\n';
    }
    return report.all_passed() ? kOk : kChecksFailed;
  } catch (const UnknownSuiteError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadSuite;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kBadConfig;
  } catch (const DimensionCapError& e) {
    std::cerr << "dimension cap: " << e.what() << '\n';
    return kDimCap;
  } catch (const UnwritablePathError& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kUnwritable;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kChecksFailed;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
