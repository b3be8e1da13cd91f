#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "qtmlab/machine.hpp"

namespace qtmlab {

// One classical configuration: control state, both track contents over the
// window, absolute head position. Track strings use '0','1','_' and cover
// cells [window_lo - 1, window_hi + 1]; the pad cell on each side exists so
// a head standing one cell outside the window (possible at the last level
// when n = 0, and for frontier configurations) still has a scannable and
// writable cell.
struct config {
  int control = 0;
  int head = 0;
  std::string in_track;
  std::string out_track;
  friend bool operator==(const config&, const config&) = default;
};

struct config_hash {
  size_t operator()(const config& c) const {
    size_t h = std::hash<std::string>()(c.in_track);
    h ^= std::hash<std::string>()(c.out_track) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<int>()(c.control * 131 + c.head) + (h << 6) + (h >> 2);
    return h;
  }
};

// Deterministically enumerated reachable basis: seeds are all initial
// configurations for inputs of length <= n (padded with blanks, head at 0),
// expanded breadth-first for t_max steps. Rows of the step operator may land
// in the one-step extension of the final level; those live in
// frontier_configs and never carry amplitude while evolution respects t_max.
class config_space {
 public:
  const machine* m = nullptr;
  int n = 0;
  int t_max = 0;
  int window_lo = 0;
  int window_hi = 0;

  std::vector<config> basis;
  std::vector<config> frontier;
  std::unordered_map<config, int, config_hash> index;  // basis + frontier (offset by basis size)

  size_t dim() const { return basis.size(); }
  size_t extended_dim() const { return basis.size() + frontier.size(); }

  int find(const config& c) const {
    auto it = index.find(c);
    return it == index.end() ? -1 : it->second;
  }
  const config& at(int i) const {
    return (size_t)i < basis.size() ? basis[i] : frontier[i - basis.size()];
  }

  int cell_offset(int cell) const { return cell - window_lo + 1; }
  symbol scanned(const config& c) const;

  // basis indices of the fixed-length-n computational inputs, value order
  std::vector<int> input_basis() const;
  // basis index for an input string of length <= n written from cell 0
  int input_index(const std::string& bits) const;
};

inline constexpr size_t kDefaultDimCap = 5000000;
size_t dim_cap_from_env();

// Enumerates the reachable basis; throws std::length_error when the basis
// plus frontier would exceed the cap (QTMLAB_DIM_CAP overrides the default).
config_space build_space(const machine& m, int n, int t_max, size_t cap = dim_cap_from_env());

}  // namespace qtmlab
