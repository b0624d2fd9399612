// Command-line entry point: configuration, backend selection and subcommands.

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dracor_mcp/dracor_client.hpp"
#include "dracor_mcp/registry.hpp"

namespace dracor_mcp::app {

enum class LogLevel { Trace, Debug, Info, Warn, Error, Off };

struct AppConfig {
  std::string base_url{api::kDefaultBaseUrl};
  std::optional<std::filesystem::path> fixtures_dir;
  std::size_t max_response_chars = 1'048'576;
  LogLevel log_level = LogLevel::Warn;
  std::optional<std::filesystem::path> registry_catalog;
};

// Returns the value of an environment variable, or nullopt.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_env();

// Fills base_url and fixtures_dir from DRACOR_API_BASE_URL and
// DRACOR_FIXTURES_DIR where the flags left them unset.
void apply_env(AppConfig& config, bool base_url_from_flag, bool fixtures_from_flag, const EnvLookup& env);

std::shared_ptr<const api::Backend> make_backend(const AppConfig& config);

// Full catalog for `config`, with the docstring catalog file applied.
std::unique_ptr<tools::ToolRegistry> make_registry(const AppConfig& config,
                                                    std::shared_ptr<const api::DracorClient> client);

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

// argv[0] is the program name. Exit codes: 0 ok, 1 failure, 2 usage error.
int run_main(const std::vector<std::string>& argv, const EnvLookup& env, Streams io);

}  // namespace dracor_mcp::app
