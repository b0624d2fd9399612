#include "dracor_mcp/http_backend.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

namespace dracor_mcp::api {

UrlParts split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("not an absolute URL: " + url);
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw std::invalid_argument("unsupported URL scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == scheme_end + 3) throw std::invalid_argument("URL has no host: " + url);
  UrlParts parts;
  parts.origin = url.substr(0, path_start);
  parts.path = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!parts.path.empty() && parts.path.back() == '/') parts.path.pop_back();
  return parts;
}

HttpBackend::HttpBackend(std::string base_url, HttpOptions options)
    : base_url_(std::move(base_url)), options_(std::move(options)) {
  split_url(base_url_);
}

Response HttpBackend::get(const Request& request) const {
  UrlParts parts;
  std::string path;
  try {
    if (request.target.rfind("http://", 0) == 0 || request.target.rfind("https://", 0) == 0) {
      parts = split_url(request.target);
      path = request.target.substr(parts.origin.size());
      if (path.empty()) path = "/";
    } else {
      parts = split_url(base_url_);
      path = parts.path + (request.target.empty() || request.target.front() != '/' ? "/" : "") + request.target;
    }
  } catch (const std::invalid_argument& e) {
    throw ClientError(ErrorKind::Transport, request.target, e.what());
  }

  httplib::Client client(parts.origin);
  client.set_connection_timeout(options_.connect_timeout);
  client.set_read_timeout(options_.read_timeout);
  client.set_follow_location(true);
  const httplib::Headers headers = {{"Accept", request.accept}, {"User-Agent", options_.user_agent}};

  auto result = client.Get(path, headers);
  if (!result) {
    throw ClientError(ErrorKind::Transport, request.target, "HTTP request failed: " + httplib::to_string(result.error()));
  }
  Response r;
  r.status = result->status;
  r.body = std::move(result->body);
  r.content_type = result->get_header_value("Content-Type");
  return r;
}

}  // namespace dracor_mcp::api
