#include "qtmlab/config_space.hpp"

#include <cstdlib>
#include <stdexcept>

namespace qtmlab {

symbol config_space::scanned(const config& c) const {
  if (c.head < window_lo - 1 || c.head > window_hi + 1) {
    throw std::out_of_range("head outside the padded window");
  }
  int off = cell_offset(c.head);
  auto tr = [](char ch) {
    switch (ch) {
      case '0': return track_sym::zero;
      case '1': return track_sym::one;
      default: return track_sym::blank;
    }
  };
  return {tr(c.in_track[off]), tr(c.out_track[off])};
}

std::vector<int> config_space::input_basis() const {
  std::vector<int> out;
  out.reserve(size_t(1) << n);
  for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
    std::string bits(n, '0');
    for (int i = 0; i < n; ++i) {
      if ((v >> (n - 1 - i)) & 1) bits[i] = '1';
    }
    out.push_back(input_index(bits));
  }
  return out;
}

int config_space::input_index(const std::string& bits) const {
  if ((int)bits.size() > n) {
    throw std::invalid_argument("input longer than the space's n");
  }
  config c;
  c.control = m->start;
  c.head = 0;
  c.in_track.assign(window_hi - window_lo + 3, '_');
  c.out_track.assign(window_hi - window_lo + 3, '_');
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw std::invalid_argument("input string must be over 0/1");
    }
    c.in_track[cell_offset((int)i)] = bits[i];
  }
  int idx = find(c);
  if (idx < 0 || (size_t)idx >= basis.size()) {
    throw std::logic_error("initial configuration missing from basis");
  }
  return idx;
}

size_t dim_cap_from_env() {
  if (const char* s = std::getenv("QTMLAB_DIM_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && v > 0) return (size_t)v;
  }
  return kDefaultDimCap;
}

namespace {

char write_char(track_sym t) {
  switch (t) {
    case track_sym::zero: return '0';
    case track_sym::one: return '1';
    default: return '_';
  }
}

}  // namespace

config_space build_space(const machine& m, int n, int t_max, size_t cap) {
  if (n < 0 || t_max < 0) throw std::invalid_argument("n and t_max must be nonnegative");
  config_space sp;
  sp.m = &m;
  sp.n = n;
  sp.t_max = t_max;
  sp.window_lo = -t_max;
  sp.window_hi = n - 1 + t_max;
  if (sp.window_hi < sp.window_lo) sp.window_hi = sp.window_lo;
  const int width = sp.window_hi - sp.window_lo + 3;

  std::vector<config> level;
  for (int len = 0; len <= n; ++len) {
    for (uint64_t v = 0; v < (uint64_t(1) << len); ++v) {
      config c;
      c.control = m.start;
      c.head = 0;
      c.in_track.assign(width, '_');
      c.out_track.assign(width, '_');
      for (int i = 0; i < len; ++i) {
        c.in_track[sp.cell_offset(i)] = ((v >> (len - 1 - i)) & 1) ? '1' : '0';
      }
      if (sp.index.emplace(c, (int)sp.basis.size()).second) {
        sp.basis.push_back(c);
        level.push_back(c);
      }
    }
  }

  auto expand = [&](const config& c, std::vector<config>& out) {
    symbol scan = sp.scanned(c);
    const std::vector<branch> branches = m.effective_row(c.control, scan);
    for (const auto& br : branches) {
      config next = c;
      int off = sp.cell_offset(c.head);
      next.in_track[off] = write_char(br.write.in);
      next.out_track[off] = write_char(br.write.out);
      next.control = br.state;
      next.head = c.head + (br.move == head_move::right ? 1 : -1);
      out.push_back(std::move(next));
    }
  };

  for (int t = 1; t <= t_max; ++t) {
    std::vector<config> next_level;
    for (const auto& c : level) {
      std::vector<config> targets;
      expand(c, targets);
      for (auto& nc : targets) {
        if (sp.index.emplace(nc, (int)sp.basis.size()).second) {
          sp.basis.push_back(nc);
          next_level.push_back(std::move(nc));
        }
      }
      if (sp.basis.size() > cap) {
        throw std::length_error("configuration basis exceeds cap (set QTMLAB_DIM_CAP to raise)");
      }
    }
    level = std::move(next_level);
  }

  // one-step frontier so every step-operator row has an index
  for (const auto& c : sp.basis) {
    std::vector<config> targets;
    expand(c, targets);
    for (auto& nc : targets) {
      if (sp.index.count(nc)) continue;
      sp.index.emplace(nc, (int)(sp.basis.size() + sp.frontier.size()));
      sp.frontier.push_back(std::move(nc));
      if (sp.basis.size() + sp.frontier.size() > cap) {
        throw std::length_error("configuration basis exceeds cap (set QTMLAB_DIM_CAP to raise)");
      }
    }
  }
  return sp;
}

}  // namespace qtmlab
