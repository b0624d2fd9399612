#include "dracor_mcp/registry.hpp"

#include <algorithm>
#include <cmath>

namespace dracor_mcp::tools {

namespace {

bool is_identifier(std::string_view name) {
  if (name.empty() || !(name.front() >= 'a' && name.front() <= 'z')) return false;
  return std::all_of(name.begin(), name.end(),
                     [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'; });
}

bool is_ident_char(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_'; }

std::string_view json_kind(const json& v) {
  switch (v.type()) {
    case json::value_t::null:
      return "null";
    case json::value_t::boolean:
      return "boolean";
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
      return "integer";
    case json::value_t::number_float:
      return "number";
    case json::value_t::string:
      return "string";
    case json::value_t::array:
      return "array";
    default:
      return "object";
  }
}

bool matches(ValueType t, const json& v) {
  switch (t) {
    case ValueType::String:
      return v.is_string();
    case ValueType::Integer:
      if (v.is_number_integer()) return true;
      if (v.is_number_float()) {
        const double d = v.get<double>();
        return std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15;
      }
      return false;
    case ValueType::Number:
      return v.is_number();
    case ValueType::Boolean:
      return v.is_boolean();
  }
  return false;
}

json normalize(ValueType t, const json& v) {
  if (t == ValueType::Integer && v.is_number_float()) return static_cast<std::int64_t>(v.get<double>());
  return v;
}

ToolResult error_result(std::string text) { return ToolResult{std::move(text), true}; }

}  // namespace

std::string_view schema_type(ValueType t) {
  switch (t) {
    case ValueType::String:
      return "string";
    case ValueType::Integer:
      return "integer";
    case ValueType::Number:
      return "number";
    case ValueType::Boolean:
      return "boolean";
  }
  return "string";
}

std::string_view doc_type(ValueType t) {
  switch (t) {
    case ValueType::String:
      return "str";
    case ValueType::Integer:
      return "int";
    case ValueType::Number:
      return "float";
    case ValueType::Boolean:
      return "bool";
  }
  return "str";
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Wrapper:
      return "wrapper";
    case Category::Helper:
      return "helper";
    case Category::Search:
      return "search";
    case Category::Docs:
      return "docs";
    case Category::Frontend:
      return "frontend";
  }
  return "wrapper";
}

json to_json(const ToolResult& r) {
  return {{"content", json::array({{{"type", "text"}, {"text", r.text}}})}, {"isError", r.is_error}};
}

std::string render_description(const Docstring& doc) {
  std::string out = doc.summary;
  std::string body;
  if (!doc.provenance.empty()) body += doc.provenance + "\n";
  if (!doc.guidance.empty()) body += doc.guidance + "\n";
  if (!body.empty()) out += "\n\n" + body.substr(0, body.size() - 1);
  if (!doc.args.empty()) {
    out += "\n\nArgs:";
    for (const auto& a : doc.args) {
      out += "\n    " + a.name + " (" + std::string(doc_type(a.type)) + "): " + a.description;
    }
  }
  return out;
}

json build_input_schema(const std::vector<ArgDoc>& args) {
  json properties = json::object();
  json required = json::array();
  for (const auto& a : args) {
    if (properties.contains(a.name)) throw RegistryError("duplicate argument name: " + a.name);
    json prop = {{"type", schema_type(a.type)}, {"description", a.description}};
    if (a.default_value) prop["default"] = *a.default_value;
    properties[a.name] = std::move(prop);
    if (a.required()) required.push_back(a.name);
  }
  return {{"type", "object"}, {"properties", properties}, {"required", required}};
}

Validated validate_arguments(const std::vector<ArgDoc>& args, const json& arguments) {
  Validated v;
  if (!arguments.is_null() && !arguments.is_object()) {
    v.error = "Arguments must be a JSON object";
    return v;
  }
  const json given = arguments.is_object() ? arguments : json::object();
  for (const auto& [key, _] : given.items()) {
    if (std::none_of(args.begin(), args.end(), [&](const ArgDoc& a) { return a.name == key; })) {
      v.error = "Unknown argument '" + key + "'";
      return v;
    }
  }
  v.arguments = json::object();
  for (const auto& a : args) {
    auto it = given.find(a.name);
    const bool absent = it == given.end() || (it->is_null() && !a.required());
    if (absent) {
      if (a.required()) {
        v.error = "Missing required argument '" + a.name + "' (" + std::string(schema_type(a.type)) + ")";
        return v;
      }
      v.arguments[a.name] = *a.default_value;
      continue;
    }
    if (!matches(a.type, *it)) {
      v.error = "Invalid argument '" + a.name + "': expected " + std::string(schema_type(a.type)) + ", got " +
                std::string(json_kind(*it));
      return v;
    }
    v.arguments[a.name] = normalize(a.type, *it);
  }
  return v;
}

// ---------------------------------------------------------------------------

void ToolRegistry::register_tool(ToolDescriptor descriptor) {
  if (!is_identifier(descriptor.name)) throw RegistryError("tool name is not snake_case: " + descriptor.name);
  if (tools_.count(descriptor.name)) throw RegistryError("tool already registered: " + descriptor.name);
  if (!descriptor.handler) throw RegistryError("tool has no handler: " + descriptor.name);
  build_input_schema(descriptor.doc.args);
  for (const auto& a : descriptor.doc.args) {
    if (!is_identifier(a.name)) throw RegistryError("argument name is not snake_case: " + descriptor.name + "." + a.name);
  }
  std::string name = descriptor.name;
  tools_.emplace(std::move(name), std::move(descriptor));
}

const ToolDescriptor* ToolRegistry::find(std::string_view name) const {
  auto it = tools_.find(name);
  return it == tools_.end() ? nullptr : &it->second;
}

std::vector<const ToolDescriptor*> ToolRegistry::tools() const {
  std::vector<const ToolDescriptor*> out;
  out.reserve(tools_.size());
  for (const auto& [_, t] : tools_) out.push_back(&t);
  return out;
}

void ToolRegistry::apply_catalog(const json& catalog) {
  if (!catalog.is_object() || !catalog.contains("tools") || !catalog.at("tools").is_object()) {
    throw RegistryError("catalog must be an object with a \"tools\" object");
  }
  // Validate everything first so a bad catalog leaves the registry untouched.
  auto updated = tools_;
  for (const auto& [name, entry] : catalog.at("tools").items()) {
    auto it = updated.find(name);
    if (it == updated.end()) throw RegistryError("catalog names an unknown tool: " + name);
    if (!entry.is_object()) throw RegistryError("catalog entry for " + name + " is not an object");
    Docstring& doc = it->second.doc;
    for (const auto& [key, value] : entry.items()) {
      if (key == "args") {
        if (!value.is_object()) throw RegistryError("catalog args for " + name + " is not an object");
        for (const auto& [arg, text] : value.items()) {
          auto a = std::find_if(doc.args.begin(), doc.args.end(), [&](const ArgDoc& d) { return d.name == arg; });
          if (a == doc.args.end()) throw RegistryError("catalog names an unknown argument: " + name + "." + arg);
          if (!text.is_string()) throw RegistryError("catalog description for " + name + "." + arg + " is not a string");
          a->description = text.get<std::string>();
        }
        continue;
      }
      if (!value.is_string()) throw RegistryError("catalog field " + name + "." + key + " is not a string");
      if (key == "summary") {
        doc.summary = value.get<std::string>();
      } else if (key == "provenance") {
        doc.provenance = value.get<std::string>();
      } else if (key == "guidance") {
        doc.guidance = value.get<std::string>();
      } else {
        throw RegistryError("catalog field " + name + "." + key + " is not a docstring field");
      }
    }
  }
  tools_ = std::move(updated);
}

ToolResult ToolRegistry::call(std::string_view name, const json& arguments) const {
  const ToolDescriptor* tool = find(name);
  if (!tool) return error_result("Unknown tool: " + std::string(name));
  Validated v = validate_arguments(tool->doc.args, arguments);
  if (!v.error.empty()) return error_result(v.error);
  ToolResult result;
  try {
    result = tool->handler(v.arguments);
  } catch (const std::exception& e) {
    return error_result(e.what());
  }
  if (!result.is_error && filter_) result = filter_(*tool, std::move(result));
  return result;
}

json ToolRegistry::list_tools() const {
  json out = json::array();
  for (const auto& [name, t] : tools_) {
    out.push_back({{"name", name}, {"description", render_description(t.doc)}, {"inputSchema", build_input_schema(t.doc.args)}});
  }
  return out;
}

json ToolRegistry::call_tool(const std::string& name, const json& arguments) const {
  return to_json(call(name, arguments));
}

// ---------------------------------------------------------------------------

bool mentions_tool(std::string_view text, std::string_view tool) {
  if (tool.empty()) return false;
  for (auto pos = text.find(tool); pos != std::string_view::npos; pos = text.find(tool, pos + 1)) {
    const bool left = pos == 0 || !is_ident_char(text[pos - 1]);
    const auto end = pos + tool.size();
    const bool right = end == text.size() || !is_ident_char(text[end]);
    if (left && right) return true;
  }
  return false;
}

std::vector<Violation> lint(const ToolRegistry& registry) {
  std::vector<Violation> out;
  for (const ToolDescriptor* t : registry.tools()) {
    const Docstring& d = t->doc;
    if (d.summary.empty()) {
      out.push_back({"summary-line", t->name, "summary is empty"});
    } else if (d.summary.find('\n') != std::string::npos) {
      out.push_back({"summary-line", t->name, "summary spans more than one line"});
    }
    if (t->category == Category::Wrapper && d.provenance.empty()) {
      out.push_back({"provenance", t->name, "wrapper does not name the endpoint it wraps"});
    }
    bool has_items = false;
    bool has_page = false;
    for (const auto& a : d.args) {
      if (a.description.find_first_not_of(" \t\n") == std::string::npos) {
        out.push_back({"arg-description", t->name, "argument '" + a.name + "' has no description"});
      }
      if (t->category == Category::Helper && !a.required() && a.description.find("Defaults to") == std::string::npos) {
        out.push_back({"helper-defaults", t->name, "optional argument '" + a.name + "' does not document its default"});
      }
      has_items |= a.name == "items_per_page";
      has_page |= a.name == "page";
    }
    if (t->category == Category::Helper && has_items != has_page) {
      out.push_back({"paging-args", t->name, "paged helper must declare both items_per_page and page"});
    }
    if (t->paired_tool) {
      const std::string& p = *t->paired_tool;
      const ToolDescriptor* partner = registry.find(p);
      if (!partner) {
        out.push_back({"pairing-symmetry", t->name, t->name + " is paired with unregistered tool " + p});
        continue;
      }
      if (partner->paired_tool != t->name) {
        out.push_back({"pairing-symmetry", t->name, t->name + " is paired with " + p + " but " + p + " is not paired back"});
      }
      if (!mentions_tool(d.guidance, p)) {
        out.push_back({"pairing-symmetry", t->name, "guidance of " + t->name + " does not reference its paired tool " + p});
      }
    }
  }
  return out;
}

}  // namespace dracor_mcp::tools
