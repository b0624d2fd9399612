// Deterministic JSON text for tool payloads.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace dracor_mcp {

// Compact, sorted keys, floats printed with at most six decimals and no
// trailing zeros. Byte-stable for equal input.
std::string stable_dump(const nlohmann::json& value);

// Number of Unicode code points in a UTF-8 string. Malformed bytes count as
// one character each.
std::size_t char_count(std::string_view utf8);

}  // namespace dracor_mcp
