#include <string>
#include <vector>

#include "nlwave/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nlwave::cli::run_cli(args);
}
