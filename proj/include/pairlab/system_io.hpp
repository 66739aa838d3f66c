#pragma once

#include "pairlab/measure_systems.hpp"

#include <string>
#include <string_view>

namespace pairlab {

// System description text:
//
//   [points]
//   names = a b c ...          # whitespace separated point ids
//   weights = 1 1 1/2 ...      # rationals, one per point
//   [group_g]
//   elements = e s             # element names; identity need not come first
//   e = e s                    # row of the multiplication table: e*x for x in `elements`
//   s = s e
//   [group_h]
//   ...
//   [left_action]
//   s = b a c ...              # image of each point under s, in `names` order
//   [right_action]
//   ...
//
// Missing action rows are an error; the identity row must be present too.

/// Throws ConfigError on malformed text and StructuralError on invalid tables.
PairedSystem parse_system(std::string_view text);
PairedSystem load_system(const std::string& path);
std::string format_system(const PairedSystem& sys);

}  // namespace pairlab
