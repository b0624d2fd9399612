#include "dracor_mcp/json_format.hpp"

#include <cmath>
#include <cstdio>

namespace dracor_mcp {

namespace {

void write_float(double v, std::string& out) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (auto dot = s.find('.'); dot != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  out += s;
}

void write(const nlohmann::json& v, std::string& out) {
  using value_t = nlohmann::json::value_t;
  switch (v.type()) {
    case value_t::object: {
      out.push_back('{');
      bool first = true;
      // nlohmann's default object type is an ordered std::map.
      for (const auto& [key, item] : v.items()) {
        if (!first) out.push_back(',');
        first = false;
        out += nlohmann::json(key).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
        out.push_back(':');
        write(item, out);
      }
      out.push_back('}');
      break;
    }
    case value_t::array: {
      out.push_back('[');
      bool first = true;
      for (const auto& item : v) {
        if (!first) out.push_back(',');
        first = false;
        write(item, out);
      }
      out.push_back(']');
      break;
    }
    case value_t::number_float:
      write_float(v.get<double>(), out);
      break;
    default:
      out += v.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
      break;
  }
}

}  // namespace

std::string stable_dump(const nlohmann::json& value) {
  std::string out;
  write(value, out);
  return out;
}

std::size_t char_count(std::string_view utf8) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < utf8.size();) {
    const auto c = static_cast<unsigned char>(utf8[i]);
    std::size_t len = 1;
    if (c >= 0xF0 && c <= 0xF4) {
      len = 4;
    } else if (c >= 0xE0 && c <= 0xEF) {
      len = 3;
    } else if (c >= 0xC2 && c <= 0xDF) {
      len = 2;
    }
    if (len > 1) {
      bool ok = i + len <= utf8.size();
      for (std::size_t k = 1; ok && k < len; ++k) {
        ok = (static_cast<unsigned char>(utf8[i + k]) & 0xC0) == 0x80;
      }
      if (!ok) len = 1;
    }
    i += len;
    ++n;
  }
  return n;
}

}  // namespace dracor_mcp
