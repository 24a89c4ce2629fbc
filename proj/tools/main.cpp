#include "cli.hpp"

int main(int argc, char** argv) {
  return edgerecon_cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
