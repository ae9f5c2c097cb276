#include <string>
#include <vector>

#include "shapemix/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return shapemix::cli::run(args);
}
