#include <string>
#include <vector>

#include "ccd/io/cli.hpp"

int main(int argc, char** argv) {
  return ccd::io::run_command(std::vector<std::string>(argv, argv + argc));
}
