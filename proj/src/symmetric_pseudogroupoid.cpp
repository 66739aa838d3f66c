#include "pairlab/symmetric_pseudogroupoid.hpp"

#include "pairlab/errors.hpp"
#include "pairlab/operator_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace pairlab {

void BernoulliSpec::validate() const {
  if (weights.empty()) throw DegenerateInputError("Bernoulli spec needs at least one letter");
  Rational total = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) throw DegenerateInputError("Bernoulli weights must be positive");
    if (i > 0 && weights[i] > weights[i - 1]) throw DegenerateInputError("Bernoulli weights must be sorted descending");
    total += weights[i];
  }
  if (total != 1) throw DegenerateInputError("Bernoulli weights sum to " + to_string(total) + ", not 1");
  if (tail_mass < 0 || tail_mass >= 1) throw DegenerateInputError("tail mass must lie in [0, 1)");
}

bool BernoulliSpec::degenerate() const {
  for (std::size_t i = 1; i < weights.size(); ++i)
    if (weights[i] == weights[i - 1]) return true;
  return false;
}

Rational BernoulliSpec::power_sum(int j) const {
  Rational s = 0;
  for (const Rational& a : weights) {
    Rational p = 1;
    for (int e = 0; e < j; ++e) p *= a;
    s += p;
  }
  return s;
}

BernoulliSpec truncate_spec(const std::vector<Rational>& weights, int k) {
  if (k < 1 || k > static_cast<int>(weights.size())) throw DegenerateInputError("truncation length out of range");
  Rational kept = 0;
  Rational all = 0;
  for (int i = 0; i < static_cast<int>(weights.size()); ++i) {
    all += weights[i];
    if (i < k) kept += weights[i];
  }
  if (all > 1) throw DegenerateInputError("weights exceed total mass 1");
  BernoulliSpec spec;
  for (int i = 0; i < k; ++i) spec.weights.push_back(weights[i] / kept);
  spec.tail_mass = 1 - kept;
  spec.validate();
  return spec;
}

int SeqWindow::at(int i) const {
  if (i < 0 && -i <= n) return neg[-i - 1];
  if (i > 0 && i <= n + r) return pos[i - 1];
  throw ContractViolation("index " + std::to_string(i) + " outside the window");
}

namespace {

void check_window(const SeqWindow& w) {
  if (w.r < 0 || w.n < 0 || static_cast<int>(w.neg.size()) != w.n || static_cast<int>(w.pos.size()) != w.n + w.r)
    throw ContractViolation("window shape does not match r and N");
}

}  // namespace

bool in_X0r(const SeqWindow& w) {
  check_window(w);
  for (int i = 1; i <= w.n; ++i)
    if (w.at(-i) != w.at(i + w.r)) return false;
  return true;
}

bool in_Xprime0r(const SeqWindow& w) {
  if (!in_X0r(w)) return false;
  for (int i = 1; i <= w.r; ++i) {
    // x_{-i} is only inside the window for i <= N; beyond it the condition reads x_{i+r} = x_i
    const int left = i <= w.n ? w.at(-i) : w.at(i + w.r);
    if (left != w.at(i)) return false;
  }
  return true;
}

Rational coupling_formula(const BernoulliSpec& spec, int r) {
  spec.validate();
  if (r < 0) throw DegenerateInputError("r must be nonnegative");
  const Rational s = spec.power_sum(2);
  Rational out = 1;
  for (int i = 0; i < r; ++i) out *= s;
  return out;
}

double McEstimate::z_score(double exact) const {
  const double diff = std::abs(mean - exact);
  if (stderr_ > 0.0) return diff / stderr_;
  return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

namespace {

class LetterSampler {
 public:
  explicit LetterSampler(const BernoulliSpec& spec) {
    double acc = 0.0;
    for (const Rational& a : spec.weights) {
      acc += to_double(a);
      cdf_.push_back(acc);
    }
    cdf_.back() = 1.0;
  }

  int operator()(std::mt19937_64& rng) const {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    return static_cast<int>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

// Runs `trial` over independent streams and merges hit counts in stream order.
template <typename Trial>
McEstimate run_streams(std::int64_t samples, std::uint64_t seed, int streams, const Trial& trial) {
  if (samples < 1000) throw DegenerateInputError("Monte Carlo needs at least 1000 samples");
  streams = std::max(1, streams);
  std::vector<std::int64_t> hits(streams, 0);
  std::vector<std::thread> workers;
  for (int s = 0; s < streams; ++s) {
    const std::int64_t share = samples / streams + (s < samples % streams ? 1 : 0);
    workers.emplace_back([&, s, share] {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(s)};
      std::mt19937_64 rng(seq);
      std::int64_t local = 0;
      for (std::int64_t i = 0; i < share; ++i) local += trial(rng) ? 1 : 0;
      hits[s] = local;
    });
  }
  for (auto& w : workers) w.join();

  McEstimate est;
  est.samples = samples;
  for (std::int64_t h : hits) est.hits += h;
  est.mean = static_cast<double>(est.hits) / static_cast<double>(samples);
  est.stderr_ = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(samples));
  return est;
}

}  // namespace

McEstimate mc_coupling(const BernoulliSpec& spec, int r, std::int64_t samples, std::uint64_t seed, int streams) {
  spec.validate();
  if (r < 0) throw DegenerateInputError("r must be nonnegative");
  const LetterSampler letter(spec);
  const int n = std::max(r, 1);
  return run_streams(samples, seed, streams, [&](std::mt19937_64& rng) {
    SeqWindow w{r, n, std::vector<int>(n), std::vector<int>(n + r)};
    for (int& x : w.pos) x = letter(rng);
    for (int i = 1; i <= n; ++i) w.neg[i - 1] = w.pos[i + r - 1];
    return in_Xprime0r(w);
  });
}

std::vector<int> cycle_type(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<bool> seen(n, false);
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (perm[i] < 0 || perm[i] >= n) throw StructuralError("permutation image out of range");
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    out.push_back(len);
  }
  if (std::accumulate(out.begin(), out.end(), 0) != n) throw StructuralError("not a permutation");
  std::vector<int> images(perm);
  std::sort(images.begin(), images.end());
  for (int i = 0; i < n; ++i)
    if (images[i] != i) throw StructuralError("not a permutation");
  std::sort(out.rbegin(), out.rend());
  return out;
}

Rational character_value(const std::vector<int>& cycle_lengths, const BernoulliSpec& spec) {
  spec.validate();
  Rational out = 1;
  for (int len : cycle_lengths) {
    if (len < 1) throw StructuralError("cycle lengths must be positive");
    if (len >= 2) out *= spec.power_sum(len);
  }
  return out;
}

McEstimate mc_character(const std::vector<int>& perm, const BernoulliSpec& spec, std::int64_t samples,
                        std::uint64_t seed, int streams) {
  spec.validate();
  cycle_type(perm);
  const LetterSampler letter(spec);
  const int n = static_cast<int>(perm.size());
  return run_streams(samples, seed, streams, [&](std::mt19937_64& rng) {
    std::vector<int> x(n);
    for (int& v : x) v = letter(rng);
    for (int i = 0; i < n; ++i)
      if (x[perm[i]] != x[i]) return false;
    return true;
  });
}

namespace {

struct UnionFind {
  std::vector<std::int64_t> parent;
  explicit UnionFind(std::int64_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::int64_t find(std::int64_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::int64_t a, std::int64_t b) { parent[find(a)] = find(b); }
};

std::vector<int> composition(const std::vector<int>& word, int k) {
  std::vector<int> c(k, 0);
  for (int x : word) ++c[x];
  return c;
}

// Moves the symbol at slot i to slot perm[i].
std::vector<int> permute(const std::vector<int>& word, const std::vector<int>& perm) {
  std::vector<int> out(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) out[perm[i]] = word[i];
  return out;
}

std::string describe(const std::vector<int>& v) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ']';
  return os.str();
}

}  // namespace

PseudogroupoidReport pseudogroupoid_check(int r, int n, const BernoulliSpec& spec,
                                          const PseudogroupoidOptions& options) {
  spec.validate();
  if (r < 0 || n < r + 2) throw DegenerateInputError("pseudogroupoid check needs N >= r + 2");
  const int k = spec.k();
  const int len = 2 * n + r;
  std::int64_t total = 1;
  for (int i = 0; i < len; ++i) {
    total *= k;
    if (total > options.max_windows) throw DimensionCapError("window space exceeds " + std::to_string(options.max_windows));
  }

  PseudogroupoidReport report;
  report.r = r;
  report.n = n;

  // Window code: negatives x_{-1..-N} then positives x_{1..N+r}, base k, first slot most significant.
  auto decode = [&](std::int64_t code) {
    std::vector<int> w(len);
    for (int i = len - 1; i >= 0; --i) {
      w[i] = static_cast<int>(code % k);
      code /= k;
    }
    return w;
  };
  auto encode = [&](const std::vector<int>& w) {
    std::int64_t code = 0;
    for (int x : w) code = code * k + x;
    return code;
  };

  std::vector<std::int64_t> codes;
  for (std::int64_t c = 0; c < total; ++c) {
    const std::vector<int> w = decode(c);
    const auto cn = composition({w.begin(), w.begin() + n}, k);
    const auto cp = composition({w.begin() + n, w.end()}, k);
    bool contained = true;
    for (int a = 0; a < k; ++a) contained = contained && cn[a] <= cp[a];
    if (contained) codes.push_back(c);
  }
  report.windows = static_cast<std::int64_t>(codes.size());
  std::unordered_map<std::int64_t, std::int64_t> index;
  for (std::size_t i = 0; i < codes.size(); ++i) index[codes[i]] = static_cast<std::int64_t>(i);

  std::vector<Rational> weight(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    Rational p = 1;
    for (int x : decode(codes[i])) p *= spec.weights[x];
    weight[i] = p;
  }

  // Adjacent transpositions generate each side's symmetric group.
  auto side_union = [&](bool negative_side, UnionFind& uf) {
    const int lo = negative_side ? 0 : n;
    const int hi = negative_side ? n : len;
    for (std::size_t i = 0; i < codes.size(); ++i) {
      std::vector<int> w = decode(codes[i]);
      for (int s = lo; s + 1 < hi; ++s) {
        std::swap(w[s], w[s + 1]);
        uf.unite(static_cast<std::int64_t>(i), index.at(encode(w)));
        std::swap(w[s], w[s + 1]);
      }
    }
  };

  // (1) finite blocks of equal weight for each side
  report.homogeneity = true;
  for (bool negative_side : {true, false}) {
    UnionFind uf(report.windows);
    side_union(negative_side, uf);
    std::unordered_map<std::int64_t, Rational> block_weight;
    for (std::int64_t i = 0; i < report.windows; ++i) {
      auto [it, inserted] = block_weight.try_emplace(uf.find(i), weight[i]);
      if (!inserted && it->second != weight[i]) report.homogeneity = false;
    }
    (negative_side ? report.neg_blocks : report.pos_blocks) = static_cast<std::int64_t>(block_weight.size());
  }

  // (2) sampled sigma- / sigma+ pairs commute as maps on windows
  report.commutation = true;
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::int64_t> pick(0, report.windows - 1);
  for (int t = 0; t < options.trials && report.commutation; ++t) {
    const std::vector<int> w = decode(codes[pick(rng)]);
    std::vector<int> minus(len), plus(len);
    std::iota(minus.begin(), minus.end(), 0);
    std::iota(plus.begin(), plus.end(), 0);
    std::shuffle(minus.begin(), minus.begin() + n, rng);
    if (minus[0] == 0) std::swap(minus[0], minus[1]);
    if (options.corrupt_overlap) {
      // positive move on {-1} u {1..N+r}
      std::vector<int> slots{0};
      for (int s = n; s < len; ++s) slots.push_back(s);
      std::vector<int> images = slots;
      std::shuffle(images.begin(), images.end(), rng);
      if (images[0] == 0) std::swap(images[0], images[1]);
      for (std::size_t s = 0; s < slots.size(); ++s) plus[slots[s]] = images[s];
    } else {
      std::shuffle(plus.begin() + n, plus.end(), rng);
    }
    const auto ab = permute(permute(w, plus), minus);
    const auto ba = permute(permute(w, minus), plus);
    if (ab != ba) {
      report.commutation = false;
      report.commutation_witness = "window " + describe(w) + " sigma- " + describe(minus) + " sigma+ " + describe(plus);
    }
  }

  // (3) the joint action is transitive on every composition class
  UnionFind joint(report.windows);
  side_union(true, joint);
  side_union(false, joint);
  std::unordered_map<std::int64_t, std::vector<int>> component_class;
  std::unordered_map<std::string, int> classes;
  bool single_class = true;
  for (std::int64_t i = 0; i < report.windows; ++i) {
    const std::vector<int> w = decode(codes[i]);
    std::vector<int> key = composition({w.begin(), w.begin() + n}, k);
    const auto cp = composition({w.begin() + n, w.end()}, k);
    key.insert(key.end(), cp.begin(), cp.end());
    classes.try_emplace(describe(key), 0);
    auto [it, inserted] = component_class.try_emplace(joint.find(i), key);
    if (!inserted && it->second != key) single_class = false;
  }
  report.components = static_cast<std::int64_t>(component_class.size());
  report.composition_classes = static_cast<std::int64_t>(classes.size());
  report.ergodicity = single_class && report.components == report.composition_classes;
  return report;
}

CylinderReport commutant_projections_report(int r, const BernoulliSpec& spec) {
  spec.validate();
  if (r < 0) throw DegenerateInputError("r must be nonnegative");
  const int k = spec.k();
  CylinderReport report;
  report.r = r;
  std::int64_t count = 1;
  for (int i = 0; i < r; ++i) {
    count *= k;
    if (count > 1000000) throw DimensionCapError("too many cylinders");
  }
  report.weight_sum = 0;
  report.identity_value = 0;
  for (std::int64_t c = 0; c < count; ++c) {
    std::vector<int> label(r);
    std::int64_t rest = c;
    for (int i = r - 1; i >= 0; --i) {
      label[i] = static_cast<int>(rest % k);
      rest /= k;
    }
    Rational w = 1;
    for (int a : label) w *= spec.weights[a];
    report.weight_sum += w;
    report.identity_value += w * w;
    report.labels.push_back(std::move(label));
    report.weights.push_back(w);
  }
  report.coupling = coupling_formula(spec, r);
  report.consistent = report.weight_sum == 1 && report.identity_value == report.coupling;
  return report;
}

PairedSystem symmetric_window_system(int n, const BernoulliSpec& spec) {
  spec.validate();
  if (spec.k() != 2) throw DegenerateInputError("matrix model uses a binary alphabet");
  if (n < 1 || n > 4) throw DimensionCapError("matrix model supports 1 <= N <= 4");
  const FiniteGroup sn = FiniteGroup::symmetric(n);
  std::vector<std::vector<int>> perms(sn.order());
  for (int g = 0; g < sn.order(); ++g)
    for (char c : sn.name(g)) perms[g].push_back(c - '0');

  std::vector<std::vector<int>> words;
  for (int code = 0; code < (1 << (2 * n)); ++code) {
    std::vector<int> w(2 * n);
    for (int i = 0; i < 2 * n; ++i) w[i] = (code >> (2 * n - 1 - i)) & 1;
    if (std::count(w.begin(), w.begin() + n, 1) == std::count(w.begin() + n, w.end(), 1)) words.push_back(w);
  }
  std::map<std::vector<int>, int> id;
  std::vector<std::string> names;
  std::vector<Rational> weights;
  for (const auto& w : words) {
    id[w] = static_cast<int>(names.size());
    std::string name;
    for (int i = 0; i < n; ++i) name += static_cast<char>('0' + w[i]);
    name += '|';
    for (int i = n; i < 2 * n; ++i) name += static_cast<char>('0' + w[i]);
    names.push_back(name);
    Rational p = 1;
    for (int x : w) p *= spec.weights[x];
    weights.push_back(p);
  }

  const int size = static_cast<int>(words.size());
  std::vector<std::vector<int>> left(sn.order(), std::vector<int>(size));
  std::vector<std::vector<int>> right(sn.order(), std::vector<int>(size));
  for (int g = 0; g < sn.order(); ++g) {
    for (int p = 0; p < size; ++p) {
      // left: symbol at negative slot i moves to slot g(i); right: x.h reads positive slot i from h(i)
      std::vector<int> l = words[p];
      std::vector<int> rw = words[p];
      for (int i = 0; i < n; ++i) {
        l[perms[g][i]] = words[p][i];
        rw[n + i] = words[p][n + perms[g][i]];
      }
      left[g][p] = id.at(l);
      right[g][p] = id.at(rw);
    }
  }
  return PairedSystem(std::move(names), std::move(weights), sn, sn, std::move(left), std::move(right));
}

SymmetricMatrixReport symmetric_matrix_smoke(int n, const BernoulliSpec& spec) {
  const PairedSystem sys = symmetric_window_system(n, spec);
  SymmetricMatrixReport report;
  report.n = n;
  report.points = sys.size();
  const ComplexAlgebra first = side_algebra(sys, Side::H, kDefaultMaxDim);
  const ComplexAlgebra second = side_algebra(sys, Side::G, kDefaultMaxDim);
  report.dim_first = first.size();
  report.dim_second = second.size();
  // generated algebras commute iff their generators do
  for (const ComplexMatrix& a : side_generators(sys, Side::H))
    for (const ComplexMatrix& b : side_generators(sys, Side::G))
      report.max_commutator = std::max(report.max_commutator, (a * b - b * a).cwiseAbs().maxCoeff());
  report.commute = report.max_commutator <= 1e-9;
  return report;
}

}  // namespace pairlab
