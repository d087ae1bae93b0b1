#include <cstdlib>
#include <cstring>
#include <iostream>

#include "specrad/acceptance.hpp"

int main(int argc, char** argv) {
  int threads = 0;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
      threads = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--threads N] [--criterion K]\n";
      return 1;
    }
  }
  const auto results = specrad::run_acceptance(std::cout, threads, only);
  int passed = 0;
  for (const auto& r : results) passed += r.pass ? 1 : 0;
  std::cout << "RESULT: " << passed << "/" << results.size() << " criteria passed" << std::endl;
  return specrad::all_passed(results) ? 0 : 3;
}
