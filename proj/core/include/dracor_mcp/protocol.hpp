// JSON-RPC 2.0 framing and the MCP server loop.
//
// Transport is newline-delimited JSON over a byte stream (stdio in practice).
// One message per line; responses are written in request order.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace dracor_mcp::rpc {

using json = nlohmann::json;

inline constexpr int kParseError = -32700;
inline constexpr int kInvalidRequest = -32600;
inline constexpr int kMethodNotFound = -32601;
inline constexpr int kInvalidParams = -32602;
inline constexpr int kInternalError = -32603;
// Server-defined range is [-32099, -32000].
inline constexpr int kServerNotInitialized = -32002;

inline constexpr std::string_view kDefaultProtocolVersion = "2024-11-05";

using RequestId = std::variant<std::int64_t, std::string>;

struct RpcError {
  int code = kInternalError;
  std::string message;
  std::optional<json> data;

  friend bool operator==(const RpcError&, const RpcError&) = default;
};

enum class MessageKind { Request, Response, Notification };

struct RpcMessage {
  MessageKind kind = MessageKind::Request;
  // Absent for notifications; absent on a response only when the request id
  // could not be determined (serialized as null).
  std::optional<RequestId> id;
  std::string method;
  std::optional<json> params;
  std::optional<json> result;
  std::optional<RpcError> error;
  // Unknown top-level members, kept verbatim.
  json extra = json::object();

  friend bool operator==(const RpcMessage&, const RpcMessage&) = default;
};

RpcMessage make_request(RequestId id, std::string method, std::optional<json> params = std::nullopt);
RpcMessage make_notification(std::string method, std::optional<json> params = std::nullopt);
RpcMessage make_result(std::optional<RequestId> id, json result);
RpcMessage make_error(std::optional<RequestId> id, RpcError error);

// Thrown by decode_line. Carries the error object and the request id when one
// could be recovered from the frame.
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(RpcError error, std::optional<RequestId> id);
  const RpcError& error() const noexcept { return error_; }
  const std::optional<RequestId>& id() const noexcept { return id_; }

 private:
  RpcError error_;
  std::optional<RequestId> id_;
};

RpcMessage decode_line(std::string_view line);
RpcMessage decode_json(const json& doc);
json to_json(const RpcMessage& msg);
// Single line, terminated by '\n'.
std::string encode_message(const RpcMessage& msg);

std::string to_string(const RequestId& id);

struct ServerInfo {
  std::string name = "dracor-mcp";
  std::string version = "1.0.0";
  std::string protocol_version{kDefaultProtocolVersion};
  bool tools = true;
  bool resources = true;
};

struct Resource {
  std::string uri;
  std::string name;
  std::string description;
  std::string mime_type;
  std::function<std::string()> read;
};

// Minimal interface the dispatcher needs from the tool catalog.
class ToolProvider {
 public:
  virtual ~ToolProvider() = default;
  virtual json list_tools() const = 0;
  // Returns {"content": [...], "isError": bool}.
  virtual json call_tool(const std::string& name, const json& arguments) const = 0;
};

struct ServerOptions {
  std::string name = "dracor-mcp";
  std::string version = "1.0.0";
  std::string protocol_version{kDefaultProtocolVersion};
  std::vector<std::string> supported_versions = {"2024-11-05", "2025-03-26", "2025-06-18"};
};

class Server {
 public:
  Server(const ToolProvider& tools, std::vector<Resource> resources, ServerOptions options = {});

  // Returns nothing for notifications and client responses.
  std::optional<RpcMessage> dispatch(const RpcMessage& msg);
  std::optional<std::string> handle_line(std::string_view line);
  void run(std::istream& in, std::ostream& out);

  bool initialized() const noexcept { return initialized_; }

 private:
  json handle_initialize(const json& params);
  json handle_resources_read(const json& params);

  const ToolProvider& tools_;
  std::vector<Resource> resources_;
  ServerOptions options_;
  bool initialized_ = false;
};

}  // namespace dracor_mcp::rpc
