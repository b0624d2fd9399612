// Live backend over HTTPS (cpp-httplib + OpenSSL).

#pragma once

#include <chrono>
#include <string>

#include "dracor_mcp/dracor_client.hpp"

namespace dracor_mcp::api {

struct HttpOptions {
  std::chrono::seconds connect_timeout{10};
  std::chrono::seconds read_timeout{60};
  std::string user_agent = "dracor-mcp/1.0";
};

class HttpBackend : public Backend {
 public:
  // Relative targets are resolved against `base_url`; absolute targets are
  // fetched as given.
  explicit HttpBackend(std::string base_url, HttpOptions options = {});

  Response get(const Request& request) const override;
  std::string describe() const override { return "http:" + base_url_; }

 private:
  std::string base_url_;
  HttpOptions options_;
};

// Splits "https://host:port/prefix" into origin and path; throws
// std::invalid_argument on anything else.
struct UrlParts {
  std::string origin;
  std::string path;
};
UrlParts split_url(const std::string& url);

}  // namespace dracor_mcp::api
