#include "pairlab/lab.hpp"

#include "pairlab/crossed_product.hpp"
#include "pairlab/errors.hpp"
#include "pairlab/heisenberg_torus.hpp"
#include "pairlab/measure_systems.hpp"
#include "pairlab/symmetric_pseudogroupoid.hpp"
#include "pairlab/system_io.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

namespace pairlab {

// ---------------------------------------------------------------------------
// configuration

namespace {

std::int64_t parse_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
}

std::uint64_t parse_uint(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    if (!text.empty() && text[0] == '-') throw std::invalid_argument(text);
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a nonnegative integer, got '" + text + "'");
  }
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !(v >= 0.0)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a nonnegative number, got '" + text + "'");
  }
}

Rational parse_exact(const std::string& key, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a rational, got '" + text + "'");
  }
}

std::vector<std::string> list_of(const std::string& text) {
  std::string spaced = text;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  return split_tokens(spaced);
}

std::pair<int, int> parse_pair(const std::string& key, const std::string& text, char sep) {
  const auto at = text.find(sep);
  if (at == std::string::npos) throw ConfigError(key + ": expected a" + sep + "b, got '" + text + "'");
  return {static_cast<int>(parse_int(key, text.substr(0, at))), static_cast<int>(parse_int(key, text.substr(at + 1)))};
}

}  // namespace

ExperimentConfig config_from_ini(const IniDocument& doc) {
  ExperimentConfig cfg;
  for (const IniSection& sec : doc.sections) {
    for (const auto& [key, value] : sec.entries) {
      const std::string where = (sec.name.empty() ? "" : sec.name + ".") + key;
      if (sec.name == "experiment") {
        if (key == "suite" || key == "suites") {
          cfg.suites = list_of(value);
        } else if (key == "seed") {
          cfg.seed = parse_uint(where, value);
        } else if (key == "samples") {
          cfg.samples = parse_int(where, value);
          if (cfg.samples < 1000) throw ConfigError(where + ": at least 1000 samples are required");
        } else if (key == "max_dim") {
          cfg.max_dim = parse_int(where, value);
          if (cfg.max_dim < 1) throw ConfigError(where + ": must be positive");
        } else if (key == "format") {
          if (value != "json" && value != "csv") throw ConfigError(where + ": format is json or csv");
          cfg.format = value;
        } else if (key == "out") {
          cfg.out = value;
        } else {
          throw ConfigError("unknown key " + where);
        }
      } else if (sec.name == "tolerances") {
        const double v = parse_double(where, value);
        if (key == "span") cfg.tol.span = v;
        else if (key == "reciprocity") cfg.tol.reciprocity = v;
        else if (key == "spread") cfg.tol.spread = v;
        else if (key == "clock") cfg.tol.clock = v;
        else if (key == "trace") cfg.tol.trace = v;
        else if (key == "sigmas") cfg.tol.sigmas = v;
        else throw ConfigError("unknown key " + where);
      } else if (sec.name == "axioms" && key == "files") {
        cfg.system_files = split_tokens(value);
      } else if ((sec.name == "coupling" || sec.name == "axioms") && key == "models") {
        cfg.product_models.clear();
        for (const auto& t : list_of(value)) cfg.product_models.push_back(parse_pair(where, t, 'x'));
      } else if (sec.name == "torus") {
        if (key == "pairs") {
          cfg.torus_pairs.clear();
          for (const auto& t : list_of(value)) cfg.torus_pairs.push_back(parse_pair(where, t, '/'));
        } else if (key == "clock_dims") {
          cfg.clock_dims.clear();
          for (const auto& t : list_of(value)) cfg.clock_dims.push_back(static_cast<int>(parse_int(where, t)));
        } else if (key == "lattice_ratios") {
          cfg.lattice_ratios.clear();
          for (const auto& t : list_of(value)) cfg.lattice_ratios.push_back(parse_exact(where, t));
        } else if (key == "lattice_random") {
          cfg.lattice_random = static_cast<int>(parse_int(where, value));
        } else if (key == "weyl") {
          cfg.weyl_groups.clear();
          for (const auto& t : list_of(value)) {
            std::vector<int> moduli;
            std::string rest = t;
            std::replace(rest.begin(), rest.end(), 'x', ' ');
            for (const auto& m : split_tokens(rest)) moduli.push_back(static_cast<int>(parse_int(where, m)));
            cfg.weyl_groups.push_back(moduli);
          }
        } else {
          throw ConfigError("unknown key " + where);
        }
      } else if (sec.name == "symmetric") {
        if (key == "specs") {
          cfg.symmetric_specs.clear();
          for (const auto& group : split_tokens(value, ';')) {
            std::vector<Rational> weights;
            for (const auto& w : list_of(group)) weights.push_back(parse_exact(where, w));
            if (!weights.empty()) cfg.symmetric_specs.push_back(weights);
          }
        } else if (key == "r_max") {
          cfg.r_max = static_cast<int>(parse_int(where, value));
        } else {
          throw ConfigError("unknown key " + where);
        }
      } else if (sec.name == "regular") {
        if (key == "orders") {
          cfg.regular_orders.clear();
          for (const auto& t : list_of(value)) cfg.regular_orders.push_back(static_cast<int>(parse_int(where, t)));
        } else if (key == "crossed_samples") {
          cfg.crossed_samples = static_cast<int>(parse_int(where, value));
        } else {
          throw ConfigError("unknown key " + where);
        }
      } else {
        throw ConfigError("unknown key " + where);
      }
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_ini(parse_ini(buf.str()));
}

std::string canonical_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << std::setprecision(17);
  auto join = [&](const auto& items, auto fmt) {
    std::string s;
    for (const auto& it : items) s += (s.empty() ? "" : " ") + fmt(it);
    return s;
  };
  auto int_str = [](int v) { return std::to_string(v); };
  auto pair_str = [](char sep) {
    return [sep](const std::pair<int, int>& p) { return std::to_string(p.first) + sep + std::to_string(p.second); };
  };
  auto rat_str = [](const Rational& r) { return to_string(r); };
  os << "suites=" << join(cfg.suites, [](const std::string& s) { return s; }) << '\n';
  os << "seed=" << cfg.seed << '\n';
  os << "samples=" << cfg.samples << '\n';
  os << "max_dim=" << cfg.max_dim << '\n';
  os << "tol.span=" << cfg.tol.span << "\ntol.reciprocity=" << cfg.tol.reciprocity << "\ntol.spread=" << cfg.tol.spread
     << "\ntol.clock=" << cfg.tol.clock << "\ntol.trace=" << cfg.tol.trace << "\ntol.sigmas=" << cfg.tol.sigmas << '\n';
  os << "product_models=" << join(cfg.product_models, pair_str('x')) << '\n';
  os << "system_files=" << join(cfg.system_files, [](const std::string& s) { return s; }) << '\n';
  os << "torus_pairs=" << join(cfg.torus_pairs, pair_str('/')) << '\n';
  os << "clock_dims=" << join(cfg.clock_dims, int_str) << '\n';
  os << "lattice_ratios=" << join(cfg.lattice_ratios, rat_str) << '\n';
  os << "lattice_random=" << cfg.lattice_random << '\n';
  os << "weyl=" << join(cfg.weyl_groups, [&](const std::vector<int>& g) {
    std::string s;
    for (int m : g) s += (s.empty() ? "" : "x") + std::to_string(m);
    return s;
  }) << '\n';
  os << "symmetric_specs=" << join(cfg.symmetric_specs, [&](const std::vector<Rational>& w) {
    std::string s;
    for (const auto& a : w) s += (s.empty() ? "" : ",") + to_string(a);
    return s;
  }) << '\n';
  os << "r_max=" << cfg.r_max << '\n';
  os << "regular_orders=" << join(cfg.regular_orders, int_str) << '\n';
  os << "crossed_samples=" << cfg.crossed_samples << '\n';
  return os.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical_config(cfg)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// checks

int RunReport::count(CheckStatus status) const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [&](const CheckRecord& c) { return c.status == status; }));
}

namespace {

class Checks {
 public:
  explicit Checks(std::vector<CheckRecord>& out) : out_(out) {}

  void exact(std::string id, std::string anchor, const Rational& expected, const Rational& observed) {
    push(std::move(id), std::move(anchor), CheckKind::Exact, to_string(expected), to_string(observed), std::nullopt,
         expected == observed);
  }
  void exact(std::string id, std::string anchor, std::int64_t expected, std::int64_t observed) {
    push(std::move(id), std::move(anchor), CheckKind::Exact, expected, observed, std::nullopt, expected == observed);
  }
  void flag(std::string id, std::string anchor, bool expected, bool observed) {
    push(std::move(id), std::move(anchor), CheckKind::Exact, expected, observed, std::nullopt, expected == observed);
  }
  void close(std::string id, std::string anchor, double expected, double observed, double tol) {
    push(std::move(id), std::move(anchor), CheckKind::Absolute, expected, observed, tol,
         std::abs(expected - observed) <= tol);
  }
  /// observed <= bound
  void bound(std::string id, std::string anchor, double observed, double bound) {
    push(std::move(id), std::move(anchor), CheckKind::Bound, 0.0, observed, bound, observed <= bound);
  }
  void sigma(std::string id, std::string anchor, double exact, const McEstimate& est, double sigmas) {
    const double tol = sigmas * est.stderr_;
    Json observed{{"mean", est.mean}, {"stderr", est.stderr_}, {"samples", est.samples}, {"z", est.z_score(exact)}};
    push(std::move(id), std::move(anchor), CheckKind::Sigma, exact, observed, tol, std::abs(est.mean - exact) <= tol);
  }
  void skip(std::string id, std::string anchor, std::string reason) {
    CheckRecord c;
    c.id = std::move(id);
    c.anchor = std::move(anchor);
    c.status = CheckStatus::Skip;
    c.skip_reason = std::move(reason);
    out_.push_back(std::move(c));
  }

 private:
  void push(std::string id, std::string anchor, CheckKind kind, Json expected, Json observed,
            std::optional<double> tol, bool pass) {
    CheckRecord c;
    c.id = std::move(id);
    c.anchor = std::move(anchor);
    c.kind = kind;
    c.expected = std::move(expected);
    c.observed = std::move(observed);
    c.tolerance = tol;
    c.status = pass ? CheckStatus::Pass : CheckStatus::Fail;
    out_.push_back(std::move(c));
  }

  std::vector<CheckRecord>& out_;
};

std::string pair_label(const char* kind, int a, int b) {
  return std::string(kind) + "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

void suite_axioms(const ExperimentConfig& cfg, Checks& ck) {
  auto record = [&](const std::string& prefix, const AxiomReport& ax) {
    ck.flag(prefix + ".free_G", "system.free", true, ax.free_G);
    ck.flag(prefix + ".free_H", "system.free", true, ax.free_H);
    ck.flag(prefix + ".commuting", "system.commuting", true, ax.commuting);
    ck.flag(prefix + ".transversal", "system.transversal", true, ax.transversal);
    ck.flag(prefix + ".ergodic", "system.ergodic", true, ax.ergodic);
  };
  for (const auto& [m, n] : cfg.product_models) {
    const PairedSystem sys = product_model(m, n);
    record("axioms." + pair_label("product", m, n), check_axioms(sys));
    const CouplingReport cr = dyn_coupling(sys);
    ck.exact("axioms." + pair_label("product", m, n) + ".reciprocal", "coupling.reciprocal",
             Rational(1), Rational(cr.lambda_gh * cr.lambda_hg));
  }

  const FiniteGroup s3 = FiniteGroup::symmetric(3);
  const TranslationPair tp = translation_pair(s3, {s3.identity(), s3.find("120"), s3.find("201")},
                                              {s3.identity(), s3.find("102")});
  record("axioms.translation(S3;A3,S2)", check_axioms(tp.system));
  ck.exact("axioms.translation(S3;A3,S2).coupling", "coupling.index-ratio", Rational(3, 2),
           dyn_coupling(tp.system).lambda_gh);

  for (const std::string& path : cfg.system_files) {
    const PairedSystem sys = load_system(path);
    record("axioms.file(" + path + ")", check_axioms(sys));
  }
}

void suite_coupling(const ExperimentConfig& cfg, Checks& ck) {
  std::uint64_t seed = cfg.seed;
  for (const auto& [m, n] : cfg.product_models) {
    const std::string p = "coupling." + pair_label("product", m, n);
    const PairedSystem sys = product_model(m, n);
    const Rational dyn = dyn_coupling(sys).lambda_gh;
    ck.exact(p + ".dyn", "coupling.dynamical", Rational(m, n), dyn);

    const ComplexAlgebra first = side_algebra(sys, Side::H, cfg.max_dim);
    const ComplexAlgebra second = side_algebra(sys, Side::G, cfg.max_dim);
    const CouplingCertificate c1 = mvn_coupling(first, {}, ++seed, 5, cfg.max_dim);
    const CouplingCertificate c2 = mvn_coupling(second, {}, ++seed, 5, cfg.max_dim);
    ck.exact(p + ".mvn_first", "coupling.dynamical-equals-mvn", dyn,
             Rational(c1.commutant_orbit_rank, c1.algebra_orbit_rank));
    ck.exact(p + ".mvn_second", "coupling.dynamical-equals-mvn", Rational(1) / dyn,
             Rational(c2.commutant_orbit_rank, c2.algebra_orbit_rank));
    ck.bound(p + ".commutant_first", "coupling.mutual-commutant",
             span_distance(commutant(first, cfg.max_dim, seed), second), cfg.tol.span);
    ck.bound(p + ".commutant_second", "coupling.mutual-commutant",
             span_distance(commutant(second, cfg.max_dim, seed), first), cfg.tol.span);
    ck.flag(p + ".irreducible", "coupling.irreducible", true,
            is_irreducible(std::vector<ComplexAlgebra>{first, second}, cfg.max_dim).irreducible);
    ck.close(p + ".reciprocity", "coupling.reciprocity", 1.0, c1.lambda * c2.lambda, cfg.tol.reciprocity);
    ck.bound(p + ".spread", "coupling.witness-independence", std::max(c1.spread, c2.spread), cfg.tol.spread);
    ck.flag(p + ".flags_confirmed", "coupling.cyclic-separating", true, c1.flags_confirmed && c2.flags_confirmed);
  }
}

void suite_torus(const ExperimentConfig& cfg, Checks& ck) {
  std::uint64_t seed = cfg.seed;
  for (const auto& [p, q] : cfg.torus_pairs) {
    const std::string id = "torus." + pair_label("model", p, q);
    const TorusReport t = torus_bridge(p, q, ++seed, cfg.max_dim);
    ck.exact(id + ".dyn", "torus.coupling", Rational(p, q), t.dyn_coupling);
    ck.exact(id + ".mvn_first", "torus.coupling", Rational(p, q), t.lambda_first_rational);
    ck.exact(id + ".mvn_second", "torus.coupling", Rational(q, p), t.lambda_second_rational);
    ck.bound(id + ".commutant", "torus.mutual-commutant", t.commutant_span_distance, cfg.tol.span);
    ck.flag(id + ".irreducible", "torus.irreducible", true, t.irreducible);
    ck.flag(id + ".cyclic", "torus.cyclic-iff-coupling-le-1", p <= q, t.cyclic);
    ck.flag(id + ".separating", "torus.separating-iff-coupling-ge-1", p >= q, t.separating);
    ck.close(id + ".reciprocity", "coupling.reciprocity", 1.0, t.lambda_first * t.lambda_second, cfg.tol.reciprocity);
  }

  for (int n : cfg.clock_dims) {
    double worst = 0.0;
    for (int s = 1; s < n; ++s)
      if (std::gcd(s, n) == 1) worst = std::max(worst, clock_shift_residual({n, s}));
    ck.bound("torus.clock_shift(N=" + std::to_string(n) + ")", "torus.clock-shift", worst, cfg.tol.clock);
  }

  for (const Rational& theta : cfg.lattice_ratios) {
    const std::string id = "torus.lattice(" + to_string(theta) + ")";
    const ShiftPairSpec spec{theta, Rational(1)};
    const LatticeSweep sweep = cross_lattice_sweep(spec, 5);
    ck.exact(id + ".exhaustive_pairs", "torus.lattices-commute", std::int64_t{11 * 11 * 11} * (11 * 11 * 11), sweep.pairs);
    ck.exact(id + ".exhaustive", "torus.lattices-commute", std::int64_t{0}, sweep.nonzero);

    std::mt19937_64 rng(++seed);
    std::uniform_int_distribution<std::int64_t> coord(-1000000, 1000000);
    std::int64_t random_nonzero = 0;
    for (int t = 0; t < cfg.lattice_random; ++t) {
      const LatticeIndex a{coord(rng), coord(rng), coord(rng)};
      const LatticeIndex b{coord(rng), coord(rng), coord(rng)};
      if (cross_lattice_commutator(a, b, spec) != 0) ++random_nonzero;
    }
    ck.exact(id + ".random", "torus.lattices-commute", std::int64_t{0}, random_nonzero);
    ck.flag(id + ".same_lattice_witness", "torus.lattice-noncommutative", true,
            noncommuting_witness(spec, LatticeOrder::Forward).has_value());
  }

  for (const auto& moduli : cfg.weyl_groups) {
    std::string name;
    for (int m : moduli) name += (name.empty() ? "Z" : "xZ") + std::to_string(m);
    const std::string id = "torus.weyl(" + name + ")";
    const WeylReport w = weyl_check(moduli, cfg.max_dim);
    ck.flag(id + ".cocycle", "torus.weyl-cocycle", true, w.cocycle_exact);
    if (!w.algebra_checks_run) {
      ck.skip(id + ".algebras", "torus.weyl-maximal-abelian", "group order exceeds max_dim");
      continue;
    }
    ck.flag(id + ".translations_masa", "torus.weyl-maximal-abelian", true, w.translations_maximal_abelian);
    ck.flag(id + ".characters_masa", "torus.weyl-maximal-abelian", true, w.characters_maximal_abelian);
    ck.flag(id + ".irreducible", "torus.weyl-irreducible", true, w.joint_irreducible);
    if (w.split_available)
      ck.flag(id + ".split_commutants", "torus.weyl-split", true, w.split_mutual_commutants);
  }

  // rho_n is a representation once the window resolves every element used
  const GridSpec grid{Rational(1, 4), 8};
  const std::vector<ExactHeisenberg> elems{{Rational(1, 2), Rational(1, 4), Rational(1, 3)},
                                           {Rational(3, 2), Rational(-3, 4), Rational(0)},
                                           {Rational(-1), Rational(5, 4), Rational(7, 10)}};
  for (int n : {1, 2, -3}) {
    double worst = 0.0;
    for (const auto& x : elems)
      for (const auto& y : elems)
        worst = std::max(worst, (rho_n_operator(n, x, grid) * rho_n_operator(n, y, grid) -
                                 rho_n_operator(n, h_multiply(x, y), grid))
                                    .cwiseAbs()
                                    .maxCoeff());
    ck.bound("torus.rho(n=" + std::to_string(n) + ").homomorphism", "torus.rho-representation", worst, 1e-12);
  }

  // continued-fraction approximants of sqrt(2) - 1 and their rational models
  const Rational theta = parse_rational("0.41421356237309504880168872420969807856967187537694807317667973799");
  const std::vector<Rational> conv = convergents(theta, 9);
  for (std::size_t k = 1; k < conv.size(); ++k) {
    const Rational& c = conv[k];
    const std::string id = "torus.convergent(" + to_string(c) + ")";
    const double err = std::abs(to_double(c) - to_double(theta));
    if (boost::multiprecision::denominator(c) <= 70) {
      const int p = boost::multiprecision::numerator(c).convert_to<int>();
      const int q = boost::multiprecision::denominator(c).convert_to<int>();
      ck.exact(id + ".dyn", "torus.rational-approximation", c, dyn_coupling(rational_torus_model(p, q)).lambda_gh);
    }
    if (k == 8) ck.bound(id + ".error", "torus.rational-approximation", err, 1e-6);
  }
}

BernoulliSpec spec_of(const std::vector<Rational>& weights) {
  BernoulliSpec spec{weights, 0};
  spec.validate();
  return spec;
}

void suite_symmetric(const ExperimentConfig& cfg, Checks& ck) {
  std::uint64_t seed = cfg.seed;
  for (std::size_t s = 0; s < cfg.symmetric_specs.size(); ++s) {
    const BernoulliSpec spec = spec_of(cfg.symmetric_specs[s]);
    const std::string id = "symmetric.spec" + std::to_string(s);

    Rational previous = 2;
    bool decreasing = true;
    for (int r = 0; r <= cfg.r_max; ++r) {
      const std::string rid = id + ".r" + std::to_string(r);
      const Rational exact = coupling_formula(spec, r);
      decreasing = decreasing && exact < previous;
      previous = exact;
      ck.exact(rid + ".cylinders", "symmetric.coupling-decomposition", exact,
               commutant_projections_report(r, spec).identity_value);
      ck.sigma(rid + ".mc", "symmetric.coupling", to_double(exact),
               mc_coupling(spec, r, cfg.samples, ++seed), cfg.tol.sigmas);
    }
    if (spec.k() >= 2) ck.flag(id + ".decreasing", "symmetric.coupling", true, decreasing);

    std::set<Rational> distinct(spec.weights.begin(), spec.weights.end());
    ck.flag(id + ".degenerate", "symmetric.extra-symmetry", distinct.size() < spec.weights.size(), spec.degenerate());

    const std::vector<std::pair<std::string, std::vector<int>>> perms{
        {"identity", {0, 1, 2, 3}}, {"transposition", {1, 0, 2, 3}},
        {"3-cycle", {1, 2, 0, 3}}, {"double-transposition", {1, 0, 3, 2}}};
    for (const auto& [name, perm] : perms) {
      const Rational exact = character_value(cycle_type(perm), spec);
      ck.sigma(id + ".character(" + name + ")", "symmetric.character", to_double(exact),
               mc_character(perm, spec, cfg.samples, ++seed), cfg.tol.sigmas);
    }
    const Rational t = character_value({2}, spec);
    ck.exact(id + ".character.multiplicative(2+2)", "symmetric.character-multiplicative", t * t,
             character_value({2, 2}, spec));
    ck.exact(id + ".character.multiplicative(3+2)", "symmetric.character-multiplicative",
             character_value({3}, spec) * t, character_value({3, 2}, spec));

    for (const auto& [r, n] : std::vector<std::pair<int, int>>{{0, 3}, {1, 4}}) {
      const std::string pid = id + ".pseudogroupoid(r=" + std::to_string(r) + ",N=" + std::to_string(n) + ")";
      PseudogroupoidOptions opt;
      opt.seed = ++seed;
      const PseudogroupoidReport rep = pseudogroupoid_check(r, n, spec, opt);
      ck.flag(pid + ".homogeneity", "symmetric.pseudogroupoid-homogeneous", true, rep.homogeneity);
      ck.flag(pid + ".commutation", "symmetric.pseudogroupoid-commuting", true, rep.commutation);
      ck.flag(pid + ".ergodicity", "symmetric.pseudogroupoid-ergodic", true, rep.ergodicity);
      opt.corrupt_overlap = true;
      const PseudogroupoidReport bad = pseudogroupoid_check(r, n, spec, opt);
      ck.flag(pid + ".corrupted_detected", "symmetric.pseudogroupoid-commuting", true,
              !bad.commutation && bad.commutation_witness.has_value());
    }

    if (spec.k() == 2) {
      for (int n : {2, 3}) {
        const SymmetricMatrixReport m = symmetric_matrix_smoke(n, spec);
        ck.bound(id + ".matrix(N=" + std::to_string(n) + ").commute", "symmetric.matrix-model", m.max_commutator,
                 1e-9);
      }
    }
  }
}

void suite_regular(const ExperimentConfig& cfg, Checks& ck) {
  std::uint64_t seed = cfg.seed;
  auto crossed = [&](const std::string& id, const std::shared_ptr<const PairedSystem>& sys) {
    for (Side side : {Side::G, Side::H}) {
      const auto ctx = CrossedContext::make(sys, side);
      std::mt19937_64 rng(++seed);
      double trace_gap = 0.0, tracial = 0.0, positivity = 0.0, hom = 0.0, star = 0.0;
      for (int k = 0; k < cfg.crossed_samples; ++k) {
        const CrossedElement a = CrossedElement::random(ctx, rng);
        const CrossedElement b = CrossedElement::random(ctx, rng);
        const ComplexMatrix pa = cp_represent(a, *sys);
        const ComplexMatrix pb = cp_represent(b, *sys);
        trace_gap = std::max(trace_gap, std::abs(cp_trace(a) - pa.trace() / double(sys->size())));
        tracial = std::max(tracial, std::abs(cp_trace(a * b) - cp_trace(b * a)));
        const std::complex<double> aa = cp_trace(a.adjoint() * a);
        positivity = std::max({positivity, std::abs(aa.imag()), std::max(0.0, -aa.real())});
        hom = std::max(hom, (cp_represent(a * b, *sys) - pa * pb).cwiseAbs().maxCoeff());
        star = std::max(star, (cp_represent(a.adjoint(), *sys) - pa.adjoint()).cwiseAbs().maxCoeff());
      }
      const std::string sid = id + ".crossed_" + std::string(to_string(side));
      ck.bound(sid + ".trace", "crossed.trace-formula", trace_gap, cfg.tol.trace);
      ck.bound(sid + ".tracial", "crossed.trace-tracial", tracial, 1e-9);
      ck.bound(sid + ".positive", "crossed.trace-positive", positivity, 1e-9);
      ck.bound(sid + ".homomorphism", "crossed.representation", hom, 1e-9);
      ck.bound(sid + ".adjoint", "crossed.representation", star, 1e-9);
    }
  };

  for (int n : cfg.regular_orders) {
    const std::string id = "regular.Z" + std::to_string(n);
    RegularModel model = regular_model_cyclic(n);
    ck.exact(id + ".dyn", "regular.coupling-one", Rational(1), dyn_coupling(model.system).lambda_gh);
    const ComplexAlgebra first = side_algebra(model.system, Side::H, cfg.max_dim);
    const CouplingCertificate cert = mvn_coupling(first, {}, ++seed, 5, cfg.max_dim);
    ck.exact(id + ".mvn", "regular.coupling-one", Rational(1),
             Rational(cert.commutant_orbit_rank, cert.algebra_orbit_rank));
    ck.flag(id + ".bicyclic", "regular.bicyclic", true, cert.bicyclic_exists);
    // the indicator of the common domain is cyclic and separating
    const ComplexVector chi = indicator_vector(model.system, model.common_domain);
    const BicyclicReport bi = bicyclic_witness(first, chi, cfg.max_dim);
    ck.flag(id + ".domain_indicator_bicyclic", "regular.bicyclic", true,
            bi.cyclic_for_algebra && bi.cyclic_for_commutant);

    const DomainActions acts = induced_on_common_domain(model);
    bool h_matches = true, g_inverse = true;
    const FiniteGroup& grp = model.base_group;
    for (int g = 0; g < grp.order(); ++g) {
      h_matches = h_matches && acts.from_h[g] == model.base_action[g];
      g_inverse = g_inverse && acts.from_g[g] == model.base_action[grp.inverse(g)];
    }
    ck.flag(id + ".induced_from_H", "regular.induced-actions", true, h_matches);
    ck.flag(id + ".induced_from_G", "regular.induced-actions", true, g_inverse);

    crossed(id, std::make_shared<const PairedSystem>(model.system));
  }
  crossed("regular.product(2,3)", std::make_shared<const PairedSystem>(product_model(2, 3)));
}

std::vector<std::string> expand_suites(const std::vector<std::string>& requested) {
  if (requested.empty()) throw UnknownSuiteError("no suite requested");
  std::vector<std::string> out;
  auto add = [&](const std::string& s) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  };
  for (std::string s : requested) {
    if (s == "verify") s = "axioms";
    if (s == "all") {
      for (const auto& k : known_suites()) add(k);
    } else if (std::find(known_suites().begin(), known_suites().end(), s) != known_suites().end()) {
      add(s);
    } else {
      throw UnknownSuiteError("unknown suite '" + s + "'");
    }
  }
  return out;
}

std::string kind_name(CheckKind k) {
  switch (k) {
    case CheckKind::Exact: return "exact";
    case CheckKind::Absolute: return "absolute";
    case CheckKind::Bound: return "bound";
    case CheckKind::Sigma: return "sigma";
  }
  return "?";
}

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skip: return "skip";
  }
  return "?";
}

}  // namespace

RunReport run_suite(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = cfg;
  report.suites_run = expand_suites(cfg.suites);
  for (const std::string& suite : report.suites_run) {
    std::vector<CheckRecord> records;
    Checks ck(records);
    if (suite == "axioms") suite_axioms(cfg, ck);
    else if (suite == "coupling") suite_coupling(cfg, ck);
    else if (suite == "torus") suite_torus(cfg, ck);
    else if (suite == "symmetric") suite_symmetric(cfg, ck);
    else if (suite == "regular") suite_regular(cfg, ck);
    report.checks.insert(report.checks.end(), records.begin(), records.end());
  }
  std::stable_sort(report.checks.begin(), report.checks.end(),
                   [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------------------
// output

Json report_json(const RunReport& report) {
  Json header;
  header["tool"] = "pairlab";
  header["version"] = "0.1.0";
  header["config_hash"] = config_hash(report.config);
  header["seed"] = report.config.seed;
  header["suites"] = report.suites_run;
  Json cfg = Json::object();
  std::istringstream lines(canonical_config(report.config));
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find('=');
    cfg[line.substr(0, eq)] = line.substr(eq + 1);
  }
  header["config"] = cfg;

  Json checks = Json::array();
  for (const CheckRecord& c : report.checks) {
    Json j;
    j["id"] = c.id;
    j["anchor"] = c.anchor;
    j["kind"] = kind_name(c.kind);
    j["expected"] = c.expected;
    j["observed"] = c.observed;
    j["tolerance"] = c.tolerance ? Json(*c.tolerance) : Json(nullptr);
    j["status"] = status_name(c.status);
    j["pass"] = c.status == CheckStatus::Pass;
    if (c.status == CheckStatus::Skip) j["skip_reason"] = c.skip_reason;
    checks.push_back(std::move(j));
  }

  Json out;
  out["header"] = header;
  out["checks"] = checks;
  out["summary"] = {{"pass_count", report.count(CheckStatus::Pass)},
                    {"fail_count", report.count(CheckStatus::Fail)},
                    {"skip_count", report.count(CheckStatus::Skip)},
                    {"total", static_cast<int>(report.checks.size())}};
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string json_text(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

}  // namespace

std::string report_csv(const RunReport& report) {
  std::ostringstream os;
  const std::string hash = config_hash(report.config);
  const std::string seed = std::to_string(report.config.seed);
  os << "id,anchor,kind,expected,observed,tolerance,status,skip_reason,config_hash,seed\n";
  for (const CheckRecord& c : report.checks) {
    os << csv_field(c.id) << ',' << csv_field(c.anchor) << ',' << kind_name(c.kind) << ','
       << csv_field(c.status == CheckStatus::Skip ? "" : json_text(c.expected)) << ','
       << csv_field(c.status == CheckStatus::Skip ? "" : json_text(c.observed)) << ','
       << (c.tolerance ? Json(*c.tolerance).dump() : "") << ',' << status_name(c.status) << ','
       << csv_field(c.skip_reason) << ',' << hash << ',' << seed << '\n';
  }
  return os.str();
}

std::string render(const RunReport& report, const std::string& format) {
  if (format == "json") return report_json(report).dump(2) + "\n";
  if (format == "csv") return report_csv(report);
  throw ConfigError("unknown output format '" + format + "'");
}

void emit(const RunReport& report, const std::string& format, const std::string& path) {
  const std::string text = render(report, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UnwritablePathError("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw UnwritablePathError("failed writing " + path);
}

std::string summary_line(const RunReport& report) {
  std::ostringstream os;
  os << "suites:";
  for (const auto& s : report.suites_run) os << ' ' << s;
  os << " | pass " << report.count(CheckStatus::Pass) << " fail " << report.count(CheckStatus::Fail) << " skip "
     << report.count(CheckStatus::Skip) << " of " << report.checks.size() << " | " << std::fixed
     << std::setprecision(2) << report.wall_seconds << " s";
  return os.str();
}

}  // namespace pairlab
