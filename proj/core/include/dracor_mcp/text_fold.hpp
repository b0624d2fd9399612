#pragma once

#include <string>
#include <string_view>

namespace dracor_mcp {

// Canonical decomposition, combining marks removed, lowercased. Used for
// case- and diacritic-insensitive matching ("Rösel" matches "rosel").
std::string fold_for_search(std::string_view utf8);

}  // namespace dracor_mcp
