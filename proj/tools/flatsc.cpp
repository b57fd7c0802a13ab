#include <iostream>

#include "flatsc/cli.hpp"

int main(int argc, char** argv) {
  return flatsc::dispatch({argv + 1, argv + argc}, std::cout, std::cerr);
}
