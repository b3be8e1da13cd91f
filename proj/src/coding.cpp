#include "qtmlab/coding.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

namespace qtmlab {

using nlohmann::ordered_json;

std::string prefix_code::to_json() const {
  ordered_json j;
  j["lengths"] = lengths;
  j["words"] = words;
  return j.dump(2);
}

std::vector<int> code_lengths_from_dims(int n, const std::vector<size_t>& dims) {
  if (n < 0 || n > 60) throw std::invalid_argument("length out of range");
  size_t total = 0;
  for (size_t d : dims) {
    if (d == 0) throw std::invalid_argument("halting-space dimension must be positive");
    total += d;
  }
  if (total > (size_t(1) << n)) {
    throw std::invalid_argument("dimensions exceed the space; Kraft may fail");
  }
  std::vector<int> lengths;
  lengths.reserve(dims.size());
  for (size_t d : dims) {
    int cl = 0;
    while ((size_t(1) << cl) < d) ++cl;
    lengths.push_back(n + 1 - cl);
  }
  return lengths;
}

kraft_report kraft_holds(const std::vector<int>& lengths) {
  rational sum(0);
  for (int l : lengths) {
    if (l < 0 || l > 62) throw std::invalid_argument("code length out of range [0, 62]");
    sum = sum + rational::pow2(-l);
  }
  kraft_report rep;
  rep.slack = rational(1) - sum;
  rep.holds = !(rep.slack < rational(0));
  return rep;
}

prefix_code blind_prefix_code(const std::vector<int>& lengths) {
  // words as dyadic intervals in units of 2^{-62}: value v of length l
  // occupies [v << (62-l), (v+1) << (62-l))
  constexpr int kScale = 62;
  prefix_code code;
  code.lengths = lengths;

  std::vector<std::pair<uint64_t, uint64_t>> occupied;  // disjoint, sorted [start, end)
  rational sum(0);
  for (size_t i = 0; i < lengths.size(); ++i) {
    int l = lengths[i];
    if (l < 0 || l > kScale) throw std::invalid_argument("code length out of range [0, 62]");
    sum = sum + rational::pow2(-l);
    if (rational(1) < sum) {
      throw std::invalid_argument("length prefix violates the Kraft inequality at index " +
                                  std::to_string(i));
    }
    const uint64_t size = uint64_t(1) << (kScale - l);
    const uint64_t limit = uint64_t(1) << kScale;
    uint64_t pos = 0;
    bool placed = false;
    uint64_t start = 0;
    for (size_t j = 0; j <= occupied.size(); ++j) {
      uint64_t gap_end = (j < occupied.size()) ? occupied[j].first : limit;
      uint64_t aligned = ((pos + size - 1) / size) * size;
      if (aligned + size <= gap_end) {
        start = aligned;
        placed = true;
        break;
      }
      if (j < occupied.size()) pos = occupied[j].second;
    }
    if (!placed) throw std::runtime_error("no assignable code word despite Kraft feasibility");

    std::string word(l, '0');
    uint64_t value = start / size;
    for (int b = l - 1; b >= 0; --b) {
      if (value & 1) word[b] = '1';
      value >>= 1;
    }
    code.words.push_back(word);

    std::pair<uint64_t, uint64_t> iv{start, start + size};
    auto it = occupied.begin();
    while (it != occupied.end() && it->first < iv.first) ++it;
    it = occupied.insert(it, iv);
    if (it != occupied.begin() && std::prev(it)->second == it->first) {
      std::prev(it)->second = it->second;
      it = occupied.erase(it);
      it = std::prev(it);
    }
    if (std::next(it) != occupied.end() && it->second == std::next(it)->first) {
      it->second = std::next(it)->second;
      occupied.erase(std::next(it));
    }
  }
  return code;
}

}  // namespace qtmlab
