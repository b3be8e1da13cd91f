#pragma once

#include <map>
#include <string>
#include <vector>

#include "qtmlab/amplitude.hpp"

namespace qtmlab {

// Tape symbols are pairs (input track, output track) over {0, 1, blank}.
enum class track_sym : unsigned char { zero = 0, one = 1, blank = 2 };

struct symbol {
  track_sym in = track_sym::blank;
  track_sym out = track_sym::blank;
  friend auto operator<=>(const symbol&, const symbol&) = default;
};

inline constexpr int kNumTrackSyms = 3;
inline constexpr int kNumSymbols = 9;
inline int symbol_index(symbol s) { return (int)s.in * kNumTrackSyms + (int)s.out; }
inline symbol symbol_from_index(int i) {
  return {(track_sym)(i / kNumTrackSyms), (track_sym)(i % kNumTrackSyms)};
}
char track_sym_char(track_sym t);
std::string symbol_str(symbol s);

enum class head_move : unsigned char { left, right };

struct branch {
  amplitude amp;
  symbol write;
  int state = 0;  // index into machine::states
  head_move move = head_move::right;
};

// Two-track machine in the standard normal form: rows are listed for every
// non-final state; the final state implicitly rewrites the scanned symbol,
// returns to the start state and moves right.
struct machine {
  std::string name;
  std::vector<std::string> states;
  int start = 0;
  int final = 0;
  // delta[q * kNumSymbols + symbol_index], q ranging over non-final states;
  // the final state's slots stay empty.
  std::vector<std::vector<branch>> delta;

  int state_index(const std::string& id) const;
  const std::vector<branch>& row(int state, symbol s) const {
    return delta[state * kNumSymbols + symbol_index(s)];
  }
  // Materializes the row including the implicit final-state rows.
  std::vector<branch> effective_row(int state, symbol s) const;
  size_t transition_key_count() const;

  friend bool operator==(const machine&, const machine&);
};

struct parse_error : std::runtime_error {
  int line;
  std::string detail;
  parse_error(int ln, const std::string& msg)
      : std::runtime_error("line " + std::to_string(ln) + ": " + msg), line(ln), detail(msg) {}
};

machine parse_machine(const std::string& text);
machine load_machine(const std::string& path);
std::string serialize_machine(const machine& m);

// One well-formedness violation; which is "row-norm", "row-orthogonality"
// or "separability".
struct violation {
  std::string which;
  std::string detail;
  double magnitude = 0.0;
};

struct validation_report {
  bool ok = true;
  std::vector<violation> violations;
};

// Checks the three local conditions that make the induced step operator an
// isometry: (a) every row has squared-amplitude sum 1, (b) distinct rows are
// orthogonal, (c) right-moving and left-moving parts are separable (for all
// row pairs and write symbols, the per-target-state products vanish).
// exact=true evaluates in Q(2^{-1/2}) and ignores tol; float mode compares
// against tol. All violations are reported, not just the first.
validation_report validate_machine(const machine& m, double tol = 1e-10, bool exact = false);

}  // namespace qtmlab
