#include <exception>
#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  try {
    return framelab::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "framelab: internal error: " << e.what() << '\n';
    return framelab::cli::kCheckFailed;
  }
}
