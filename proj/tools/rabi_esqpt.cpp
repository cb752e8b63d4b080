#include <iostream>

#include "rabi/run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const auto config = rabi::io::parse_args(args);
    return rabi::io::run(config, std::cerr);
  } catch (const rabi::io::UsageError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
