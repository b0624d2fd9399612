// The DraCor tool catalog: endpoint wrappers, paged and minimal helpers,
// search tools, documentation and frontend-link tools, and the size guard.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dracor_mcp/dracor_client.hpp"
#include "dracor_mcp/registry.hpp"

namespace dracor_mcp::tools {

inline constexpr std::size_t kDefaultMaxChars = 1'048'576;
inline constexpr std::size_t kCatalogSize = 20;
inline constexpr std::string_view kDefaultFrontendUrl = "https://dracor.org";

// "1048576" -> "1,048,576"
std::string group_thousands(std::uint64_t n);

// Passes `text` through unchanged when it has at most `max_chars` code
// points; otherwise returns an error result. Never truncates.
ToolResult guard_response(std::string text, std::size_t max_chars,
                          const std::optional<std::string>& paired_helper = std::nullopt);

struct PageEnvelope {
  std::int64_t page = 1;
  std::int64_t items_per_page = 50;
  std::int64_t total_items = 0;
  std::int64_t total_pages = 0;
  json items = json::array();
};

json to_json(const PageEnvelope& p);

// Throws std::invalid_argument when items_per_page < 1 or page < 1.
PageEnvelope paginate(const json& items, std::int64_t items_per_page, std::int64_t page);

// {name, title, first_author, year_normalized, network_size}; absent fields are null.
json minimal_projection(const api::MetadataRow& row);
// {name, title, authors, year_normalized, network_size}
json search_entry(const api::PlayListing& play);

std::vector<api::PlayListing> plays_by_title(const std::vector<api::PlayListing>& plays, std::string_view query);
std::vector<api::PlayListing> plays_by_author(const std::vector<api::PlayListing>& plays, std::string_view query);
std::vector<api::PlayListing> plays_by_year(const std::vector<api::PlayListing>& plays,
                                            std::optional<std::int64_t> year_from,
                                            std::optional<std::int64_t> year_to);

json play_links(std::string_view api_base_url, std::string_view frontend_url, std::string_view corpus,
                std::string_view play);

struct ToolsetOptions {
  std::string api_base_url{api::kDefaultBaseUrl};
  std::string frontend_url{kDefaultFrontendUrl};
  std::size_t max_chars = kDefaultMaxChars;
};

// Registers the full catalog and installs the size guard as result filter.
void register_dracor_tools(ToolRegistry& registry, std::shared_ptr<const api::DracorClient> client,
                           ToolsetOptions options = {});

}  // namespace dracor_mcp::tools
