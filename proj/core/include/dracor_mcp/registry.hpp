// Tool catalog: structured docstrings, schema derivation, argument checking
// and the docstring lint.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dracor_mcp/protocol.hpp"

namespace dracor_mcp::tools {

using json = nlohmann::json;

enum class ValueType { String, Integer, Number, Boolean };

// JSON Schema name ("string", "integer", ...).
std::string_view schema_type(ValueType t);
// Python-style annotation used in rendered docstrings ("str", "int", ...).
std::string_view doc_type(ValueType t);

struct ArgDoc {
  std::string name;
  ValueType type = ValueType::String;
  std::string description;
  // Present (possibly JSON null) for optional arguments.
  std::optional<json> default_value;

  bool required() const noexcept { return !default_value.has_value(); }
};

struct Docstring {
  std::string summary;
  std::string provenance;
  std::string guidance;
  std::vector<ArgDoc> args;
};

enum class Category { Wrapper, Helper, Search, Docs, Frontend };

std::string_view to_string(Category c);

struct ToolResult {
  std::string text;
  bool is_error = false;
};

json to_json(const ToolResult& r);

using Handler = std::function<ToolResult(const json& arguments)>;

struct ToolDescriptor {
  std::string name;
  Category category = Category::Wrapper;
  Docstring doc;
  std::optional<std::string> paired_tool;
  Handler handler;
};

class RegistryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string render_description(const Docstring& doc);
// Throws RegistryError on duplicate argument names.
json build_input_schema(const std::vector<ArgDoc>& args);

// Validates `arguments` against `args` and returns them with defaults filled
// in. Returns an error message naming the offending argument instead when
// validation fails.
struct Validated {
  json arguments;
  std::string error;
};
Validated validate_arguments(const std::vector<ArgDoc>& args, const json& arguments);

class ToolRegistry : public rpc::ToolProvider {
 public:
  // Post-processing hook applied to every successful handler result.
  using ResultFilter = std::function<ToolResult(const ToolDescriptor&, ToolResult)>;

  void register_tool(ToolDescriptor descriptor);
  const ToolDescriptor* find(std::string_view name) const;
  std::vector<const ToolDescriptor*> tools() const;
  std::size_t size() const noexcept { return tools_.size(); }

  void set_result_filter(ResultFilter filter) { filter_ = std::move(filter); }

  // Replaces docstring text from a catalog document of the form
  //   {"tools": {"<name>": {"summary": ..., "provenance": ..., "guidance": ...,
  //                         "args": {"<arg>": "<description>"}}}}
  // Unknown tools or arguments are rejected.
  void apply_catalog(const json& catalog);

  ToolResult call(std::string_view name, const json& arguments) const;

  json list_tools() const override;
  json call_tool(const std::string& name, const json& arguments) const override;

 private:
  std::map<std::string, ToolDescriptor, std::less<>> tools_;
  ResultFilter filter_;
};

struct Violation {
  std::string rule;
  std::string tool;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// True when `text` mentions `tool` as a whole identifier, so that
// "get_corpus_metadata" does not match inside "get_corpus_metadata_paged_helper".
bool mentions_tool(std::string_view text, std::string_view tool);

std::vector<Violation> lint(const ToolRegistry& registry);

}  // namespace dracor_mcp::tools
