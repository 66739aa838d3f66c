#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pairlab {

/// Flat `key = value` text with `[section]` headers; `#` starts a comment.
struct IniSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(std::string_view key) const;
};

struct IniDocument {
  std::vector<IniSection> sections;

  const IniSection* section(std::string_view name) const;
};

/// Throws ConfigError naming the offending line.
IniDocument parse_ini(std::string_view text);

std::vector<std::string> split_tokens(std::string_view text, char separator = ' ');

}  // namespace pairlab
