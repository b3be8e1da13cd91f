#pragma once

#include <string>
#include <vector>

#include "qtmlab/rational.hpp"

namespace qtmlab {

struct prefix_code {
  std::vector<int> lengths;
  std::vector<std::string> words;
  std::string to_json() const;
};

// l_i = n + 1 - ceil(log2 dim_i); Kraft-feasible whenever the dims sum to at
// most 2^n.
std::vector<int> code_lengths_from_dims(int n, const std::vector<size_t>& dims);

struct kraft_report {
  bool holds = false;
  rational slack;  // 1 - sum of 2^{-l}, exact
};

kraft_report kraft_holds(const std::vector<int>& lengths);

// Sequential coder: word i is the lexicographically first string of length
// l_i that is neither a prefix nor an extension of any earlier word. Word i
// depends only on l_1..l_i, so extending the length list never changes
// earlier words. Every prefix of the length list must satisfy Kraft.
prefix_code blind_prefix_code(const std::vector<int>& lengths);

}  // namespace qtmlab
