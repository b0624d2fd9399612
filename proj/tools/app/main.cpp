#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  const std::vector<std::string> args(argv, argv + argc);
  return dracor_mcp::app::run_main(args, dracor_mcp::app::process_env(), {std::cin, std::cout, std::cerr});
}
