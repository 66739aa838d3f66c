#include "pairlab/system_io.hpp"

#include "pairlab/errors.hpp"
#include "pairlab/ini.hpp"

#include <fstream>
#include <sstream>

namespace pairlab {

namespace {

const IniSection& require_section(const IniDocument& doc, std::string_view name) {
  const IniSection* s = doc.section(name);
  if (!s) throw ConfigError("missing section [" + std::string(name) + "]");
  return *s;
}

const std::string& require_key(const IniSection& s, std::string_view key) {
  const std::string* v = s.find(key);
  if (!v) throw ConfigError("missing key '" + std::string(key) + "' in [" + s.name + "]");
  return *v;
}

int index_in(const std::vector<std::string>& names, const std::string& token, std::string_view what) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == token) return static_cast<int>(i);
  throw ConfigError("unknown " + std::string(what) + " '" + token + "'");
}

FiniteGroup read_group(const IniSection& s) {
  std::vector<std::string> elements = split_tokens(require_key(s, "elements"));
  if (elements.empty()) throw ConfigError("[" + s.name + "] has no elements");
  std::vector<std::vector<int>> table;
  for (const auto& a : elements) {
    std::vector<std::string> row = split_tokens(require_key(s, a));
    if (row.size() != elements.size()) throw ConfigError("[" + s.name + "] row '" + a + "' has wrong length");
    std::vector<int> ids;
    for (const auto& token : row) ids.push_back(index_in(elements, token, "group element"));
    table.push_back(std::move(ids));
  }
  return FiniteGroup::from_table(std::move(elements), std::move(table));
}

std::vector<std::vector<int>> read_action(const IniSection& s, const FiniteGroup& group,
                                          const std::vector<std::string>& points) {
  std::vector<std::vector<int>> table;
  for (const auto& element : group.names()) {
    std::vector<std::string> row = split_tokens(require_key(s, element));
    if (row.size() != points.size()) throw ConfigError("[" + s.name + "] row '" + element + "' has wrong length");
    std::vector<int> ids;
    for (const auto& token : row) ids.push_back(index_in(points, token, "point"));
    table.push_back(std::move(ids));
  }
  return table;
}

void write_group(std::ostringstream& out, std::string_view section, const FiniteGroup& g) {
  out << "[" << section << "]\nelements =";
  for (const auto& n : g.names()) out << ' ' << n;
  out << '\n';
  for (int a = 0; a < g.order(); ++a) {
    out << g.name(a) << " =";
    for (int b = 0; b < g.order(); ++b) out << ' ' << g.name(g.multiply(a, b));
    out << '\n';
  }
}

void write_action(std::ostringstream& out, std::string_view section, const PairedSystem& sys, Side side) {
  out << "[" << section << "]\n";
  const FiniteGroup& g = sys.group(side);
  for (int a = 0; a < g.order(); ++a) {
    out << g.name(a) << " =";
    for (int x = 0; x < sys.size(); ++x) out << ' ' << sys.points()[sys.act(side, a, x)];
    out << '\n';
  }
}

}  // namespace

PairedSystem parse_system(std::string_view text) {
  const IniDocument doc = parse_ini(text);
  const IniSection& pts = require_section(doc, "points");
  std::vector<std::string> names = split_tokens(require_key(pts, "names"));
  std::vector<std::string> weight_tokens = split_tokens(require_key(pts, "weights"));
  if (names.empty()) throw ConfigError("[points] names is empty");
  if (weight_tokens.size() != names.size()) throw ConfigError("[points] weights and names differ in length");
  std::vector<Rational> weights;
  for (const auto& w : weight_tokens) {
    try {
      weights.push_back(parse_rational(w));
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad weight '" + w + "'");
    }
  }
  FiniteGroup g = read_group(require_section(doc, "group_g"));
  FiniteGroup h = read_group(require_section(doc, "group_h"));
  auto left = read_action(require_section(doc, "left_action"), g, names);
  auto right = read_action(require_section(doc, "right_action"), h, names);
  return PairedSystem(std::move(names), std::move(weights), std::move(g), std::move(h), std::move(left),
                      std::move(right));
}

PairedSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read system file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_system(buffer.str());
}

std::string format_system(const PairedSystem& sys) {
  std::ostringstream out;
  out << "[points]\nnames =";
  for (const auto& p : sys.points()) out << ' ' << p;
  out << "\nweights =";
  for (const auto& w : sys.weights()) out << ' ' << to_string(w);
  out << '\n';
  write_group(out, "group_g", sys.group(Side::G));
  write_group(out, "group_h", sys.group(Side::H));
  write_action(out, "left_action", sys, Side::G);
  write_action(out, "right_action", sys, Side::H);
  return out.str();
}

}  // namespace pairlab
