#include "pairlab/ini.hpp"

#include "pairlab/errors.hpp"

#include <sstream>

namespace pairlab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

const std::string* IniSection::find(std::string_view key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

const IniSection* IniDocument::section(std::string_view name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

IniDocument parse_ini(std::string_view text) {
  IniDocument doc;
  doc.sections.push_back(IniSection{"", {}});
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      std::string name(trim(line.substr(1, line.size() - 2)));
      if (name.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
      if (doc.section(name)) throw ConfigError("line " + std::to_string(line_no) + ": duplicate section " + name);
      doc.sections.push_back(IniSection{std::move(name), {}});
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    auto& section = doc.sections.back();
    if (section.find(key)) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key " + key);
    section.entries.emplace_back(std::move(key), std::string(trim(line.substr(eq + 1))));
  }
  return doc;
}

std::vector<std::string> split_tokens(std::string_view text, char separator) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    bool sep = (c == separator) || (separator == ' ' && (c == '\t'));
    if (sep) {
      if (auto t = trim(current); !t.empty()) out.emplace_back(t);
      current.clear();
    } else {
      current += c;
    }
  }
  if (auto t = trim(current); !t.empty()) out.emplace_back(t);
  return out;
}

}  // namespace pairlab
