#pragma once

// Fast invariant suite behind `kolmo selftest`.

#include <string>
#include <vector>

namespace kolmo {

struct PropertyResult {
  std::string property;
  bool pass;
  std::string detail;
};

std::vector<PropertyResult> run_selftest(unsigned threads = 1);

}  // namespace kolmo
