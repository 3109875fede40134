#include <iostream>
#include <string>
#include <vector>

#include "mixedconv_tools/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return mixedconv::tools::run(args, std::cout, std::cerr);
}
