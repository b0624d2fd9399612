#include "dracor_mcp/protocol.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>

namespace dracor_mcp::rpc {

namespace {

constexpr std::string_view kReservedMembers[] = {"jsonrpc", "id", "method", "params", "result", "error"};

bool is_reserved(const std::string& key) {
  return std::find(std::begin(kReservedMembers), std::end(kReservedMembers), key) != std::end(kReservedMembers);
}

[[noreturn]] void invalid(std::string message, std::optional<RequestId> id = std::nullopt) {
  throw ProtocolError(RpcError{kInvalidRequest, std::move(message), std::nullopt}, std::move(id));
}

std::optional<RequestId> read_id(const json& value, bool& ok) {
  ok = true;
  if (value.is_number_integer() && !value.is_number_unsigned()) return RequestId{value.get<std::int64_t>()};
  if (value.is_number_unsigned()) {
    auto u = value.get<std::uint64_t>();
    if (u <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      return RequestId{static_cast<std::int64_t>(u)};
    }
  }
  if (value.is_string()) return RequestId{value.get<std::string>()};
  ok = false;
  return std::nullopt;
}

json id_to_json(const std::optional<RequestId>& id) {
  if (!id) return nullptr;
  return std::visit([](const auto& v) { return json(v); }, *id);
}

json error_to_json(const RpcError& error) {
  json out = {{"code", error.code}, {"message", error.message}};
  if (error.data) out["data"] = *error.data;
  return out;
}

RpcError error_from_json(const json& value, const std::optional<RequestId>& id) {
  if (!value.is_object()) invalid("error member must be an object", id);
  auto code = value.find("code");
  auto message = value.find("message");
  if (code == value.end() || !code->is_number_integer()) invalid("error.code must be an integer", id);
  if (message == value.end() || !message->is_string()) invalid("error.message must be a string", id);
  RpcError error{code->get<int>(), message->get<std::string>(), std::nullopt};
  if (auto data = value.find("data"); data != value.end()) error.data = *data;
  return error;
}

}  // namespace

ProtocolError::ProtocolError(RpcError error, std::optional<RequestId> id)
    : std::runtime_error(error.message), error_(std::move(error)), id_(std::move(id)) {}

RpcMessage make_request(RequestId id, std::string method, std::optional<json> params) {
  RpcMessage msg;
  msg.kind = MessageKind::Request;
  msg.id = std::move(id);
  msg.method = std::move(method);
  msg.params = std::move(params);
  return msg;
}

RpcMessage make_notification(std::string method, std::optional<json> params) {
  RpcMessage msg;
  msg.kind = MessageKind::Notification;
  msg.method = std::move(method);
  msg.params = std::move(params);
  return msg;
}

RpcMessage make_result(std::optional<RequestId> id, json result) {
  RpcMessage msg;
  msg.kind = MessageKind::Response;
  msg.id = std::move(id);
  msg.result = std::move(result);
  return msg;
}

RpcMessage make_error(std::optional<RequestId> id, RpcError error) {
  RpcMessage msg;
  msg.kind = MessageKind::Response;
  msg.id = std::move(id);
  msg.error = std::move(error);
  return msg;
}

std::string to_string(const RequestId& id) {
  if (const auto* n = std::get_if<std::int64_t>(&id)) return std::to_string(*n);
  return std::get<std::string>(id);
}

RpcMessage decode_json(const json& doc) {
  if (!doc.is_object()) invalid("message must be a JSON object");

  std::optional<RequestId> id;
  bool has_id = false;
  if (auto it = doc.find("id"); it != doc.end()) {
    has_id = true;
    if (!it->is_null()) {
      bool ok = false;
      id = read_id(*it, ok);
      if (!ok) invalid("id must be an integer or a string");
    }
  }

  auto version = doc.find("jsonrpc");
  if (version == doc.end() || !version->is_string() || version->get<std::string>() != "2.0") {
    invalid("jsonrpc member must be \"2.0\"", id);
  }

  RpcMessage msg;
  for (const auto& [key, value] : doc.items()) {
    if (!is_reserved(key)) msg.extra[key] = value;
  }

  const bool has_method = doc.contains("method");
  const bool has_result = doc.contains("result");
  const bool has_error = doc.contains("error");

  if (has_method) {
    const auto& method = doc.at("method");
    if (!method.is_string()) invalid("method must be a string", id);
    if (has_result || has_error) invalid("request must not carry result or error", id);
    if (has_id && !id) invalid("request id must not be null");
    msg.kind = has_id ? MessageKind::Request : MessageKind::Notification;
    msg.id = id;
    msg.method = method.get<std::string>();
    if (auto params = doc.find("params"); params != doc.end()) {
      if (!params->is_object() && !params->is_array()) invalid("params must be an object or an array", id);
      msg.params = *params;
    }
    return msg;
  }

  if (has_result == has_error) invalid("response must carry exactly one of result and error", id);
  if (!has_id) invalid("response must carry an id");
  msg.kind = MessageKind::Response;
  msg.id = id;
  if (has_result) {
    msg.result = doc.at("result");
  } else {
    msg.error = error_from_json(doc.at("error"), id);
  }
  return msg;
}

RpcMessage decode_line(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ProtocolError(RpcError{kParseError, "Parse error", json(e.what())}, std::nullopt);
  }
  return decode_json(doc);
}

json to_json(const RpcMessage& msg) {
  json out = msg.extra.is_object() ? msg.extra : json::object();
  out["jsonrpc"] = "2.0";
  switch (msg.kind) {
    case MessageKind::Request:
      out["id"] = id_to_json(msg.id);
      out["method"] = msg.method;
      if (msg.params) out["params"] = *msg.params;
      break;
    case MessageKind::Notification:
      out["method"] = msg.method;
      if (msg.params) out["params"] = *msg.params;
      break;
    case MessageKind::Response:
      out["id"] = id_to_json(msg.id);
      if (msg.error) {
        out["error"] = error_to_json(*msg.error);
      } else {
        out["result"] = msg.result.value_or(json::object());
      }
      break;
  }
  return out;
}

std::string encode_message(const RpcMessage& msg) {
  // dump() escapes control characters, so the frame never contains a raw newline.
  auto line = to_json(msg).dump(-1, ' ', false, json::error_handler_t::replace);
  line.push_back('\n');
  return line;
}

// ---------------------------------------------------------------------------

Server::Server(const ToolProvider& tools, std::vector<Resource> resources, ServerOptions options)
    : tools_(tools), resources_(std::move(resources)), options_(std::move(options)) {}

json Server::handle_initialize(const json& params) {
  ServerInfo info;
  info.name = options_.name;
  info.version = options_.version;
  info.protocol_version = options_.protocol_version;
  if (params.is_object()) {
    if (auto it = params.find("protocolVersion"); it != params.end() && it->is_string()) {
      const auto requested = it->get<std::string>();
      const auto& supported = options_.supported_versions;
      if (requested == options_.protocol_version ||
          std::find(supported.begin(), supported.end(), requested) != supported.end()) {
        info.protocol_version = requested;
      }
    }
  }
  json capabilities = json::object();
  if (info.tools) capabilities["tools"] = {{"listChanged", false}};
  if (info.resources) capabilities["resources"] = {{"listChanged", false}, {"subscribe", false}};
  return {
      {"protocolVersion", info.protocol_version},
      {"capabilities", capabilities},
      {"serverInfo", {{"name", info.name}, {"version", info.version}}},
  };
}

json Server::handle_resources_read(const json& params) {
  if (!params.is_object() || !params.contains("uri") || !params.at("uri").is_string()) {
    throw ProtocolError(RpcError{kInvalidParams, "resources/read requires a string uri", std::nullopt}, std::nullopt);
  }
  const auto uri = params.at("uri").get<std::string>();
  auto it = std::find_if(resources_.begin(), resources_.end(), [&](const Resource& r) { return r.uri == uri; });
  if (it == resources_.end()) {
    throw ProtocolError(RpcError{kInvalidParams, "Unknown resource: " + uri, std::nullopt}, std::nullopt);
  }
  std::string text;
  try {
    text = it->read();
  } catch (const std::exception& e) {
    throw ProtocolError(RpcError{kInternalError, std::string("Failed to read resource: ") + e.what(), std::nullopt},
                        std::nullopt);
  }
  return {{"contents", json::array({{{"uri", it->uri}, {"mimeType", it->mime_type}, {"text", text}}})}};
}

std::optional<RpcMessage> Server::dispatch(const RpcMessage& msg) {
  if (msg.kind != MessageKind::Request) return std::nullopt;

  const json params = msg.params.value_or(json::object());
  try {
    if (msg.method == "initialize") {
      if (initialized_) return make_error(msg.id, RpcError{kInvalidRequest, "Server already initialized", std::nullopt});
      auto result = handle_initialize(params);
      initialized_ = true;
      return make_result(msg.id, std::move(result));
    }
    if (msg.method == "ping") return make_result(msg.id, json::object());
    if (!initialized_) {
      return make_error(msg.id, RpcError{kServerNotInitialized, "Server not initialized", std::nullopt});
    }
    if (msg.method == "tools/list") {
      return make_result(msg.id, {{"tools", tools_.list_tools()}});
    }
    if (msg.method == "tools/call") {
      if (!params.is_object() || !params.contains("name") || !params.at("name").is_string()) {
        return make_error(msg.id, RpcError{kInvalidParams, "tools/call requires a string name", std::nullopt});
      }
      json arguments = json::object();
      if (auto it = params.find("arguments"); it != params.end() && !it->is_null()) {
        if (!it->is_object()) {
          return make_error(msg.id, RpcError{kInvalidParams, "tools/call arguments must be an object", std::nullopt});
        }
        arguments = *it;
      }
      return make_result(msg.id, tools_.call_tool(params.at("name").get<std::string>(), arguments));
    }
    if (msg.method == "resources/list") {
      json list = json::array();
      for (const auto& r : resources_) {
        list.push_back({{"uri", r.uri}, {"name", r.name}, {"description", r.description}, {"mimeType", r.mime_type}});
      }
      return make_result(msg.id, {{"resources", list}});
    }
    if (msg.method == "resources/read") {
      return make_result(msg.id, handle_resources_read(params));
    }
    return make_error(msg.id, RpcError{kMethodNotFound, "Method not found: " + msg.method, std::nullopt});
  } catch (const ProtocolError& e) {
    return make_error(msg.id, e.error());
  } catch (const std::exception& e) {
    return make_error(msg.id, RpcError{kInternalError, e.what(), std::nullopt});
  }
}

std::optional<std::string> Server::handle_line(std::string_view line) {
  if (line.find_first_not_of(" \t\r\n") == std::string_view::npos) return std::nullopt;
  RpcMessage msg;
  try {
    msg = decode_line(line);
  } catch (const ProtocolError& e) {
    return encode_message(make_error(e.id(), e.error()));
  }
  auto reply = dispatch(msg);
  if (!reply) return std::nullopt;
  return encode_message(*reply);
}

void Server::run(std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (auto reply = handle_line(line)) {
      out << *reply << std::flush;
    }
  }
}

}  // namespace dracor_mcp::rpc
