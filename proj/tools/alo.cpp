#include <iostream>

#include "alo/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return alo::app::run(args, std::cout, std::cerr);
}
