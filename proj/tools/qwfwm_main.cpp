#include <string>
#include <vector>

#include "qwfwm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qwfwm::cli::run(std::move(args));
}
