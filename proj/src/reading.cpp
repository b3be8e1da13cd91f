#include "qtmlab/reading.hpp"

#include <stdexcept>
#include <unordered_map>

#include "qtmlab/sim.hpp"

namespace qtmlab {

namespace {

struct read_split {
  std::string prefix;   // bits at cells 0.. up to the first blank
  std::string leftover; // environment key for everything else
};

read_split split_config(const config_space& sp, const config& c) {
  read_split out;
  const int off0 = sp.cell_offset(0);
  const int width = (int)c.out_track.size();
  int l = off0;
  while (l < width && (c.out_track[l] == '0' || c.out_track[l] == '1')) {
    out.prefix.push_back(c.out_track[l]);
    ++l;
  }
  std::string left = c.out_track.substr(0, off0);   // cells below 0, ascending
  std::string right = c.out_track.substr(l);        // delimiter onward
  while (!left.empty() && left.front() == '_') left.erase(left.begin());
  while (!right.empty() && right.back() == '_') right.pop_back();
  out.leftover = std::to_string(c.control) + '|' + std::to_string(c.head) + '|' +
                 c.in_track + '|' + left + '|' + right;
  return out;
}

}  // namespace

qubit_string read_output(const global_state& st, int max_len) {
  const config_space& sp = *st.space;
  int longest = 0;
  for (const auto& [w, v] : st.parts) {
    for (size_t i = 0; i < v.size(); ++i) {
      if (std::norm(v[i]) < 1e-30) continue;
      int len = (int)split_config(sp, sp.at((int)i)).prefix.size();
      longest = std::max(longest, len);
    }
  }
  int k = max_len < 0 ? longest : max_len;
  if (longest > k) {
    throw std::invalid_argument("output prefix longer than requested max_len");
  }
  if (k > kMaxQubitStringLen) {
    throw std::length_error("output prefix too long for dense readout");
  }

  qubit_string q(k);
  for (const auto& [w, v] : st.parts) {
    std::unordered_map<std::string, std::unordered_map<size_t, cplx>> groups;
    for (size_t i = 0; i < v.size(); ++i) {
      if (std::norm(v[i]) < 1e-30) continue;
      read_split rs = split_config(sp, sp.at((int)i));
      groups[rs.leftover][shortlex_index(rs.prefix)] += v[i];
    }
    for (const auto& [key, amps] : groups) {
      for (const auto& [s1, a1] : amps) {
        for (const auto& [s2, a2] : amps) {
          q.rho(s1, s2) += w * a1 * std::conj(a2);
        }
      }
    }
  }
  return q;
}

qubit_string machine_output(const machine& m, const Vec& psi, int n, int t, bool parallel) {
  config_space space = build_space(m, n, t);
  step_operator op = build_step_operator(space);
  global_state st = initial_state(space, psi, n);
  evolve(st, op, t, parallel);
  return read_output(st);
}

}  // namespace qtmlab
