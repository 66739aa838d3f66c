#include "pairlab/measure_systems.hpp"

#include "pairlab/errors.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace pairlab {

std::string_view to_string(Side side) { return side == Side::G ? "G" : "H"; }

namespace {

bool is_permutation_row(const std::vector<int>& row, int n) {
  if (static_cast<int>(row.size()) != n) return false;
  std::vector<char> seen(n, 0);
  for (int v : row) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

}  // namespace

FiniteGroup FiniteGroup::from_table(std::vector<std::string> names, std::vector<std::vector<int>> table) {
  const int n = static_cast<int>(names.size());
  if (n == 0) throw StructuralError("group must have at least one element");
  if (static_cast<int>(table.size()) != n) throw StructuralError("multiplication table has wrong row count");
  for (const auto& row : table) {
    if (!is_permutation_row(row, n)) throw StructuralError("multiplication table row is not a permutation");
  }
  std::set<std::string> unique(names.begin(), names.end());
  if (static_cast<int>(unique.size()) != n) throw StructuralError("duplicate element names");

  int identity = -1;
  for (int e = 0; e < n && identity < 0; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) ok = table[e][a] == a && table[a][e] == a;
    if (ok) identity = e;
  }
  if (identity < 0) throw StructuralError("no identity element");

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]]) throw StructuralError("multiplication is not associative");

  std::vector<int> inverse(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (table[a][b] == identity && table[b][a] == identity) {
        inverse[a] = b;
        break;
      }
    }
    if (inverse[a] < 0) throw StructuralError("element without inverse: " + names[a]);
  }

  FiniteGroup g;
  g.names_ = std::move(names);
  g.table_ = std::move(table);
  g.inverse_ = std::move(inverse);
  g.identity_ = identity;
  return g;
}

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw StructuralError("cyclic group order must be positive");
  std::vector<std::string> names(n);
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    names[a] = std::to_string(a);
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  }
  return from_table(std::move(names), std::move(table));
}

FiniteGroup FiniteGroup::symmetric(int n) {
  if (n < 1 || n > 6) throw StructuralError("symmetric group supported for 1 <= n <= 6");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  const int order = static_cast<int>(perms.size());
  auto index_of = [&](const std::vector<int>& q) {
    return static_cast<int>(std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
  };
  std::vector<std::string> names(order);
  std::vector<std::vector<int>> table(order, std::vector<int>(order));
  for (int a = 0; a < order; ++a) {
    for (int v : perms[a]) names[a] += std::to_string(v);
    for (int b = 0; b < order; ++b) {
      std::vector<int> c(n);
      for (int i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
      table[a][b] = index_of(c);
    }
  }
  return from_table(std::move(names), std::move(table));
}

FiniteGroup FiniteGroup::direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const int na = a.order();
  const int nb = b.order();
  std::vector<std::string> names(na * nb);
  std::vector<std::vector<int>> table(na * nb, std::vector<int>(na * nb));
  for (int i = 0; i < na * nb; ++i) {
    names[i] = "(" + a.name(i / nb) + "," + b.name(i % nb) + ")";
    for (int j = 0; j < na * nb; ++j)
      table[i][j] = a.multiply(i / nb, j / nb) * nb + b.multiply(i % nb, j % nb);
  }
  return from_table(std::move(names), std::move(table));
}

int FiniteGroup::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

int FiniteGroup::element_order(int id) const {
  int k = 1;
  for (int x = id; x != identity_; x = multiply(x, id)) ++k;
  return k;
}

Subgroup subgroup_of(const FiniteGroup& parent, std::vector<int> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  for (int e : elements)
    if (e < 0 || e >= parent.order()) throw StructuralError("subgroup element out of range");

  const int n = static_cast<int>(elements.size());
  auto local = [&](int parent_id) {
    auto it = std::lower_bound(elements.begin(), elements.end(), parent_id);
    return (it != elements.end() && *it == parent_id) ? static_cast<int>(it - elements.begin()) : -1;
  };
  std::vector<std::string> names(n);
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) {
    names[i] = parent.name(elements[i]);
    for (int j = 0; j < n; ++j) {
      int k = local(parent.multiply(elements[i], elements[j]));
      if (k < 0) throw StructuralError("subset is not closed under multiplication");
      table[i][j] = k;
    }
  }
  return Subgroup{FiniteGroup::from_table(std::move(names), std::move(table)), std::move(elements)};
}

Subgroup generated_subgroup(const FiniteGroup& parent, const std::vector<int>& generators) {
  std::set<int> members{parent.identity()};
  std::deque<int> frontier{parent.identity()};
  while (!frontier.empty()) {
    int x = frontier.front();
    frontier.pop_front();
    for (int s : generators) {
      int y = parent.multiply(x, s);
      if (members.insert(y).second) frontier.push_back(y);
    }
  }
  return subgroup_of(parent, std::vector<int>(members.begin(), members.end()));
}

void ShiftPairSpec::validate() const {
  if (lambda1 <= 0 || lambda2 <= 0) throw DegenerateInputError("shift lengths must be positive");
}

PairedSystem::PairedSystem(std::vector<std::string> points, std::vector<Rational> weights, FiniteGroup g,
                           FiniteGroup h, std::vector<std::vector<int>> left_action,
                           std::vector<std::vector<int>> right_action)
    : points_(std::move(points)),
      weights_(std::move(weights)),
      g_(std::move(g)),
      h_(std::move(h)),
      left_(std::move(left_action)),
      right_(std::move(right_action)) {
  const int n = size();
  if (n == 0) throw StructuralError("system has no points");
  if (static_cast<int>(weights_.size()) != n) throw StructuralError("weights length differs from point count");
  for (const auto& w : weights_)
    if (w <= 0) throw StructuralError("point weights must be positive");

  auto validate_action = [&](Side side) {
    const FiniteGroup& grp = group(side);
    const auto& tab = action_table(side);
    const std::string label(to_string(side));
    if (static_cast<int>(tab.size()) != grp.order()) throw StructuralError(label + " action table has wrong row count");
    for (const auto& row : tab)
      if (!is_permutation_row(row, n)) throw StructuralError(label + " action row is not a bijection of the points");
    for (int a = 0; a < grp.order(); ++a) {
      for (int x = 0; x < n; ++x)
        if (weights_[tab[a][x]] != weights_[x]) throw StructuralError(label + " action does not preserve weights");
      for (int b = 0; b < grp.order(); ++b) {
        const auto& ab = tab[grp.multiply(a, b)];
        for (int x = 0; x < n; ++x) {
          // left: a(bx) = (ab)x; right: (xa)b = x(ab)
          int composed = side == Side::G ? tab[a][tab[b][x]] : tab[b][tab[a][x]];
          if (composed != ab[x]) throw StructuralError(label + " action is not a homomorphism");
        }
      }
    }
  };
  validate_action(Side::G);
  validate_action(Side::H);
}

int PairedSystem::find_point(std::string_view name) const {
  auto it = std::find(points_.begin(), points_.end(), name);
  return it == points_.end() ? -1 : static_cast<int>(it - points_.begin());
}

PairedSystem PairedSystem::with_shift_origin(ShiftPairSpec spec) const {
  spec.validate();
  PairedSystem copy = *this;
  copy.shift_origin_ = std::move(spec);
  return copy;
}

bool PairedSystem::operator==(const PairedSystem& other) const {
  return points_ == other.points_ && weights_ == other.weights_ && g_ == other.g_ && h_ == other.h_ &&
         left_ == other.left_ && right_ == other.right_;
}

AxiomReport check_axioms(const PairedSystem& sys) {
  const int n = sys.size();
  AxiomReport report;

  auto is_free = [&](Side side) {
    const FiniteGroup& grp = sys.group(side);
    for (int a = 0; a < grp.order(); ++a) {
      if (a == grp.identity()) continue;
      for (int x = 0; x < n; ++x)
        if (sys.act(side, a, x) == x) return false;
    }
    return true;
  };
  report.free_G = is_free(Side::G);
  report.free_H = is_free(Side::H);

  report.commuting = true;
  for (int g = 0; g < sys.group(Side::G).order() && report.commuting; ++g)
    for (int h = 0; h < sys.group(Side::H).order() && report.commuting; ++h)
      for (int x = 0; x < n; ++x)
        if (sys.act(Side::G, g, sys.act(Side::H, h, x)) != sys.act(Side::H, h, sys.act(Side::G, g, x))) {
          report.commuting = false;
          break;
        }

  const OrbitPartition g_orbits = orbits(sys, Side::G);
  const OrbitPartition h_orbits = orbits(sys, Side::H);
  std::set<std::pair<int, int>> meets;
  report.transversal = true;
  for (int x = 0; x < n; ++x) {
    if (!meets.emplace(g_orbits.point_to_block[x], h_orbits.point_to_block[x]).second) {
      report.transversal = false;
      break;
    }
  }

  std::vector<char> seen(n, 0);
  std::deque<int> frontier{0};
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    int x = frontier.front();
    frontier.pop_front();
    for (Side side : {Side::G, Side::H}) {
      for (int a = 0; a < sys.group(side).order(); ++a) {
        int y = sys.act(side, a, x);
        if (!seen[y]) {
          seen[y] = 1;
          ++reached;
          frontier.push_back(y);
        }
      }
    }
  }
  report.ergodic = reached == n;
  return report;
}

OrbitPartition orbits(const PairedSystem& sys, Side side) {
  const int n = sys.size();
  OrbitPartition part;
  part.point_to_block.assign(n, -1);
  for (int x = 0; x < n; ++x) {
    if (part.point_to_block[x] >= 0) continue;
    const int id = part.size();
    std::vector<int> block;
    for (int a = 0; a < sys.group(side).order(); ++a) {
      int y = sys.act(side, a, x);
      if (part.point_to_block[y] < 0) {
        part.point_to_block[y] = id;
        block.push_back(y);
      }
    }
    std::sort(block.begin(), block.end());
    part.blocks.push_back(std::move(block));
  }
  return part;
}

FundamentalDomain fundamental_domain(const PairedSystem& sys, Side side) {
  FundamentalDomain fd;
  fd.for_group = side;
  fd.measure = 0;
  for (const auto& block : orbits(sys, side).blocks) {
    int rep = block.front();
    fd.points.push_back(rep);
    fd.measure += sys.weights()[rep];
  }
  std::sort(fd.points.begin(), fd.points.end());
  return fd;
}

CouplingReport dyn_coupling(const PairedSystem& sys) {
  const FundamentalDomain fg = fundamental_domain(sys, Side::G);
  const FundamentalDomain fh = fundamental_domain(sys, Side::H);
  if (fg.measure == 0 || fh.measure == 0) throw DegenerateInputError("fundamental domain of zero measure");
  CouplingReport report;
  report.mu_fg = fg.measure;
  report.mu_fh = fh.measure;
  report.lambda_gh = fh.measure / fg.measure;
  report.lambda_hg = fg.measure / fh.measure;
  report.orientation_note =
      "lambdaGH = mu(F_H)/mu(F_G); the MvN coupling of the algebra generated by H-unitaries and "
      "G-invariant multiplicators equals lambdaGH";
  return report;
}

QuotientAction induced_quotient_action(const PairedSystem& sys, Side side) {
  const AxiomReport axioms = check_axioms(sys);
  if (!axioms.commuting) throw ContractViolation("induced action requires commuting actions");

  QuotientAction qa;
  qa.acting = other(side);
  qa.partition = orbits(sys, side);
  const FiniteGroup& grp = sys.group(qa.acting);
  qa.table.assign(grp.order(), std::vector<int>(qa.partition.size()));
  for (int a = 0; a < grp.order(); ++a) {
    for (int b = 0; b < qa.partition.size(); ++b) {
      const auto& block = qa.partition.blocks[b];
      int image = qa.partition.point_to_block[sys.act(qa.acting, a, block.front())];
      for (int x : block) {
        if (qa.partition.point_to_block[sys.act(qa.acting, a, x)] != image)
          throw ContractViolation("induced action is not well defined on orbits");
      }
      qa.table[a][b] = image;
    }
  }
  if (sys.shift_origin()) qa.rotation_numbers = rotation_numbers(*sys.shift_origin());
  return qa;
}

std::pair<Rational, Rational> rotation_numbers(const ShiftPairSpec& spec) {
  spec.validate();
  return {frac(spec.lambda2 / spec.lambda1), frac(spec.lambda1 / spec.lambda2)};
}

TranslationPair translation_pair(const FiniteGroup& k, const std::vector<int>& g_elements,
                                 const std::vector<int>& h_elements) {
  Subgroup g = subgroup_of(k, g_elements);
  Subgroup h = subgroup_of(k, h_elements);
  const int n = k.order();
  std::vector<std::vector<int>> left(g.group.order(), std::vector<int>(n));
  std::vector<std::vector<int>> right(h.group.order(), std::vector<int>(n));
  for (int a = 0; a < g.group.order(); ++a)
    for (int x = 0; x < n; ++x) left[a][x] = k.multiply(g.embedding[a], x);
  for (int a = 0; a < h.group.order(); ++a)
    for (int x = 0; x < n; ++x) right[a][x] = k.multiply(x, h.embedding[a]);

  std::vector<int> common;
  std::set_intersection(g.embedding.begin(), g.embedding.end(), h.embedding.begin(), h.embedding.end(),
                        std::back_inserter(common));
  PairedSystem sys(k.names(), std::vector<Rational>(n, Rational(1)), std::move(g.group), std::move(h.group),
                   std::move(left), std::move(right));
  return TranslationPair{std::move(sys), common.size() == 1};
}

PairedSystem product_model(int m, int n) {
  if (m < 1 || n < 1) throw StructuralError("product model factors must be positive");
  const int size = m * n;
  std::vector<std::string> points(size);
  std::vector<std::vector<int>> left(m, std::vector<int>(size));
  std::vector<std::vector<int>> right(n, std::vector<int>(size));
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < n; ++b) {
      const int x = a * n + b;
      points[x] = "(" + std::to_string(a) + "," + std::to_string(b) + ")";
      for (int g = 0; g < m; ++g) left[g][x] = ((a + g) % m) * n + b;
      for (int h = 0; h < n; ++h) right[h][x] = a * n + (b + h) % n;
    }
  }
  return PairedSystem(std::move(points), std::vector<Rational>(size, Rational(1)), FiniteGroup::cyclic(m),
                      FiniteGroup::cyclic(n), std::move(left), std::move(right));
}

PairedSystem shift_pair_model(const ShiftPairSpec& spec) {
  spec.validate();
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  const BigInt den = denominator(spec.lambda1) * denominator(spec.lambda2);
  const BigInt a = numerator(spec.lambda1) * denominator(spec.lambda2);
  const BigInt b = numerator(spec.lambda2) * denominator(spec.lambda1);
  const BigInt common = boost::multiprecision::gcd(a, b);
  const Rational delta(common, den);
  const BigInt p_big = a / common;  // lambda1 / delta
  const BigInt q_big = b / common;  // lambda2 / delta
  if (p_big * q_big > 200000) throw DegenerateInputError("shift pair model too large for a finite table");
  const int p = p_big.convert_to<int>();
  const int q = q_big.convert_to<int>();
  const int size = p * q;

  // Z lambda1 has order q on Z_{pq}, Z lambda2 has order p.
  std::vector<std::string> points(size);
  for (int x = 0; x < size; ++x) points[x] = std::to_string(x);
  std::vector<std::vector<int>> left(q, std::vector<int>(size));
  std::vector<std::vector<int>> right(p, std::vector<int>(size));
  for (int x = 0; x < size; ++x) {
    for (int g = 0; g < q; ++g) left[g][x] = (x + g * p) % size;
    for (int h = 0; h < p; ++h) right[h][x] = (x + h * q) % size;
  }
  PairedSystem sys(std::move(points), std::vector<Rational>(size, delta), FiniteGroup::cyclic(q),
                   FiniteGroup::cyclic(p), std::move(left), std::move(right));
  return sys.with_shift_origin(spec);
}

PairedSystem scale_weights(const PairedSystem& sys, const Rational& factor) {
  if (factor <= 0) throw DegenerateInputError("weight scale must be positive");
  std::vector<Rational> weights = sys.weights();
  for (auto& w : weights) w *= factor;
  PairedSystem scaled(sys.points(), std::move(weights), sys.group(Side::G), sys.group(Side::H),
                      sys.action_table(Side::G), sys.action_table(Side::H));
  return sys.shift_origin() ? scaled.with_shift_origin(*sys.shift_origin()) : scaled;
}

PairedSystem reverse_points(const PairedSystem& sys) {
  const int n = sys.size();
  auto flip = [n](int x) { return n - 1 - x; };
  std::vector<std::string> points(n);
  std::vector<Rational> weights(n);
  for (int x = 0; x < n; ++x) {
    points[flip(x)] = sys.points()[x];
    weights[flip(x)] = sys.weights()[x];
  }
  auto remap = [&](Side side) {
    auto tab = sys.action_table(side);
    for (auto& row : tab) {
      std::vector<int> out(n);
      for (int x = 0; x < n; ++x) out[flip(x)] = flip(row[x]);
      row = std::move(out);
    }
    return tab;
  };
  return PairedSystem(std::move(points), std::move(weights), sys.group(Side::G), sys.group(Side::H),
                      remap(Side::G), remap(Side::H));
}

}  // namespace pairlab
