#include "qtmlab/machine.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>

namespace qtmlab {

char track_sym_char(track_sym t) {
  switch (t) {
    case track_sym::zero: return '0';
    case track_sym::one: return '1';
    default: return '_';
  }
}

std::string symbol_str(symbol s) {
  std::string r = "(";
  r += track_sym_char(s.in);
  r += ',';
  r += track_sym_char(s.out);
  r += ')';
  return r;
}

std::string amplitude::str() const {
  auto part = [](const sqrt_half_ext& x) -> std::string {
    // canonical: pure rational "a", pure radical "br", otherwise sum is not
    // representable in one RAT literal so emit the radical part scaled; the
    // grammar allows a single RAT per real/imag part, and all amplitudes we
    // construct keep one of a, b zero.
    if (x.b.is_zero()) return x.a.str();
    if (x.a.is_zero()) return x.b.str() + "r";
    throw std::invalid_argument("amplitude: mixed rational+radical literal not serializable");
  };
  if (im.is_zero()) return part(re);
  return part(re) + "+" + part(im) + "i";
}

static sqrt_half_ext parse_rat_part(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty amplitude part");
  if (s.back() == 'r') {
    return sqrt_half_ext(rational(0), rational::parse(s.substr(0, s.size() - 1)));
  }
  return sqrt_half_ext(rational::parse(s));
}

amplitude amplitude::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty amplitude literal");
  // split at a '+' that is not the leading character of a part
  size_t plus = std::string::npos;
  for (size_t i = 1; i < s.size(); ++i) {
    if (s[i] == '+') { plus = i; break; }
  }
  if (plus == std::string::npos) {
    if (s.back() == 'i')
      throw std::invalid_argument("imaginary amplitude needs explicit real part: '" + s + "'");
    return amplitude(parse_rat_part(s));
  }
  std::string res = s.substr(0, plus);
  std::string ims = s.substr(plus + 1);
  if (ims.empty() || ims.back() != 'i')
    throw std::invalid_argument("bad amplitude literal '" + s + "'");
  ims.pop_back();
  return amplitude(parse_rat_part(res), parse_rat_part(ims));
}

int machine::state_index(const std::string& id) const {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i] == id) return (int)i;
  return -1;
}

std::vector<branch> machine::effective_row(int state, symbol s) const {
  if (state == final) {
    branch b;
    b.amp = amplitude::one();
    b.write = s;
    b.state = start;
    b.move = head_move::right;
    return {b};
  }
  return row(state, s);
}

size_t machine::transition_key_count() const {
  size_t n = 0;
  for (const auto& r : delta)
    if (!r.empty()) ++n;
  return n;
}

bool operator==(const machine& a, const machine& b) {
  if (a.name != b.name || a.states != b.states || a.start != b.start || a.final != b.final)
    return false;
  if (a.delta.size() != b.delta.size()) return false;
  for (size_t i = 0; i < a.delta.size(); ++i) {
    if (a.delta[i].size() != b.delta[i].size()) return false;
    for (size_t j = 0; j < a.delta[i].size(); ++j) {
      const branch &x = a.delta[i][j], &y = b.delta[i][j];
      if (x.amp != y.amp || x.write != y.write || x.state != y.state || x.move != y.move)
        return false;
    }
  }
  return true;
}

namespace {

track_sym parse_track_sym(char c, int line) {
  switch (c) {
    case '0': return track_sym::zero;
    case '1': return track_sym::one;
    case '_': return track_sym::blank;
    default: throw parse_error(line, std::string("bad track symbol '") + c + "'");
  }
}

symbol parse_symbol_token(const std::string& tok, int line) {
  if (tok.size() != 5 || tok[0] != '(' || tok[2] != ',' || tok[4] != ')')
    throw parse_error(line, "bad symbol token '" + tok + "', expected (i,o)");
  return {parse_track_sym(tok[1], line), parse_track_sym(tok[3], line)};
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

bool valid_ident(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!isalnum((unsigned char)c) && c != '_' && c != '-') return false;
  return isalpha((unsigned char)s[0]) || s[0] == '_';
}

}  // namespace

machine parse_machine(const std::string& text) {
  machine m;
  bool saw_machine = false, saw_states = false, saw_start = false, saw_final = false;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  struct pending_trans {
    int line;
    std::string state;
    symbol sym;
    std::vector<std::tuple<std::string, std::string, std::string, std::string>> branches;
  };
  std::vector<pending_trans> pending;

  while (std::getline(is, raw)) {
    ++line;
    std::string body = raw;
    size_t hash = body.find('#');
    if (hash != std::string::npos) body.erase(hash);
    auto toks = split_ws(body);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];

    if (kw == "machine") {
      if (toks.size() != 2 || !valid_ident(toks[1]))
        throw parse_error(line, "expected: machine <identifier>");
      if (saw_machine) throw parse_error(line, "duplicate machine line");
      m.name = toks[1];
      saw_machine = true;
    } else if (kw == "states") {
      if (saw_states) throw parse_error(line, "duplicate states line");
      if (toks.size() < 2) throw parse_error(line, "states line needs at least one id");
      for (size_t i = 1; i < toks.size(); ++i) {
        if (!valid_ident(toks[i])) throw parse_error(line, "bad state id '" + toks[i] + "'");
        if (std::find(m.states.begin(), m.states.end(), toks[i]) != m.states.end())
          throw parse_error(line, "duplicate state id '" + toks[i] + "'");
        m.states.push_back(toks[i]);
      }
      saw_states = true;
    } else if (kw == "start" || kw == "final") {
      if (toks.size() != 2) throw parse_error(line, "expected: " + kw + " <state>");
      if (!saw_states) throw parse_error(line, kw + " before states line");
      int idx = m.state_index(toks[1]);
      if (idx < 0) throw parse_error(line, "unknown state '" + toks[1] + "'");
      if (kw == "start") {
        if (saw_start) throw parse_error(line, "duplicate start line");
        m.start = idx;
        saw_start = true;
      } else {
        if (saw_final) throw parse_error(line, "duplicate final line");
        m.final = idx;
        saw_final = true;
      }
    } else if (kw == "trans") {
      // trans <state> (i,o) -> <amp> <state'> (i',o') <L|R> [; ...]
      std::string rest;
      {
        size_t p = body.find("trans");
        rest = body.substr(p + 5);
      }
      size_t arrow = rest.find("->");
      if (arrow == std::string::npos) throw parse_error(line, "trans line missing ->");
      auto lhs = split_ws(rest.substr(0, arrow));
      if (lhs.size() != 2) throw parse_error(line, "expected: trans <state> (i,o) -> ...");
      pending_trans pt;
      pt.line = line;
      pt.state = lhs[0];
      pt.sym = parse_symbol_token(lhs[1], line);
      std::string rhs = rest.substr(arrow + 2);
      std::stringstream bs(rhs);
      std::string piece;
      while (std::getline(bs, piece, ';')) {
        auto bt = split_ws(piece);
        if (bt.size() != 4)
          throw parse_error(line, "branch needs: <amp> <state> (i,o) <L|R>");
        pt.branches.emplace_back(bt[0], bt[1], bt[2], bt[3]);
      }
      if (pt.branches.empty()) throw parse_error(line, "trans line with no branches");
      pending.push_back(std::move(pt));
    } else {
      throw parse_error(line, "unknown directive '" + kw + "'");
    }
  }

  if (!saw_machine) throw parse_error(line, "missing machine line");
  if (!saw_states) throw parse_error(line, "missing states line");
  if (!saw_start) throw parse_error(line, "missing start line");
  if (!saw_final) throw parse_error(line, "missing final line");
  if (m.start == m.final) throw parse_error(line, "start and final state must differ");

  m.delta.assign(m.states.size() * kNumSymbols, {});
  for (const auto& pt : pending) {
    int q = m.state_index(pt.state);
    if (q < 0) throw parse_error(pt.line, "unknown state '" + pt.state + "'");
    if (q == m.final)
      throw parse_error(pt.line,
                        "transitions from the final state are fixed by the normal form");
    auto& row = m.delta[q * kNumSymbols + symbol_index(pt.sym)];
    if (!row.empty())
      throw parse_error(pt.line, "duplicate trans row for " + pt.state + " " + symbol_str(pt.sym));
    for (const auto& [amp_s, st_s, sym_s, mv_s] : pt.branches) {
      branch b;
      try {
        b.amp = amplitude::parse(amp_s);
      } catch (const std::exception& e) {
        throw parse_error(pt.line, e.what());
      }
      b.state = m.state_index(st_s);
      if (b.state < 0) throw parse_error(pt.line, "unknown state '" + st_s + "'");
      b.write = parse_symbol_token(sym_s, pt.line);
      if (mv_s == "L") b.move = head_move::left;
      else if (mv_s == "R") b.move = head_move::right;
      else throw parse_error(pt.line, "head move must be L or R, got '" + mv_s + "'");
      row.push_back(b);
    }
  }
  return m;
}

machine load_machine(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open machine file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse_machine(ss.str());
  } catch (parse_error& e) {
    throw parse_error(e.line, path + ": " + e.detail);
  }
}

std::string serialize_machine(const machine& m) {
  std::ostringstream os;
  os << "machine " << m.name << "\n";
  os << "states";
  for (const auto& s : m.states) os << " " << s;
  os << "\n";
  os << "start " << m.states[m.start] << "\n";
  os << "final " << m.states[m.final] << "\n";
  for (size_t q = 0; q < m.states.size(); ++q) {
    if ((int)q == m.final) continue;
    for (int si = 0; si < kNumSymbols; ++si) {
      const auto& row = m.delta[q * kNumSymbols + si];
      if (row.empty()) continue;
      os << "trans " << m.states[q] << " " << symbol_str(symbol_from_index(si)) << " ->";
      bool first = true;
      for (const auto& b : row) {
        if (!first) os << " ;";
        first = false;
        os << " " << b.amp.str() << " " << m.states[b.state] << " " << symbol_str(b.write)
           << " " << (b.move == head_move::left ? "L" : "R");
      }
      os << "\n";
    }
  }
  return os.str();
}

namespace {

struct row_ref {
  int state;
  int sym;
  const std::vector<branch>* branches;
};

std::vector<row_ref> all_rows(const machine& m, std::vector<std::vector<branch>>& storage) {
  std::vector<row_ref> rows;
  storage.clear();
  storage.reserve(kNumSymbols);
  for (size_t q = 0; q < m.states.size(); ++q) {
    for (int si = 0; si < kNumSymbols; ++si) {
      if ((int)q == m.final) {
        storage.push_back(m.effective_row((int)q, symbol_from_index(si)));
        rows.push_back({(int)q, si, &storage.back()});
      } else {
        rows.push_back({(int)q, si, &m.delta[q * kNumSymbols + si]});
      }
    }
  }
  return rows;
}

std::string row_name(const machine& m, const row_ref& r) {
  return m.states[r.state] + " " + symbol_str(symbol_from_index(r.sym));
}

}  // namespace

validation_report validate_machine(const machine& m, double tol, bool exact) {
  validation_report rep;
  auto add = [&](const std::string& which, const std::string& detail, double mag) {
    rep.ok = false;
    rep.violations.push_back({which, detail, mag});
  };

  // missing rows are well-formedness failures, not parse errors
  std::vector<std::vector<branch>> storage;
  // reserve so row_ref pointers into storage stay valid
  storage.reserve(kNumSymbols + 1);
  auto rows = all_rows(m, storage);
  for (const auto& r : rows) {
    if (r.state != m.final && r.branches->empty())
      add("row-norm", "missing transition row " + row_name(m, r), 1.0);
  }

  // (a) row normalization
  for (const auto& r : rows) {
    if (r.branches->empty()) continue;
    if (exact) {
      sqrt_half_ext n2;
      for (const auto& b : *r.branches) n2 = n2 + b.amp.norm_sq();
      if (n2 != sqrt_half_ext(rational(1)))
        add("row-norm", "row " + row_name(m, r) + " has squared norm " +
                            std::to_string(n2.to_double()),
            std::abs(n2.to_double() - 1.0));
    } else {
      double n2 = 0;
      for (const auto& b : *r.branches) n2 += std::norm(b.amp.to_complex());
      if (std::abs(n2 - 1.0) > tol)
        add("row-norm", "row " + row_name(m, r) + " has squared norm " + std::to_string(n2),
            std::abs(n2 - 1.0));
    }
  }

  // (b) pairwise orthogonality of distinct rows, inner product over full
  // (write, state, move) target triples
  auto key = [](const branch& b) {
    return (symbol_index(b.write) * 64 + b.state) * 2 + (b.move == head_move::right ? 1 : 0);
  };
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].branches->empty()) continue;
    for (size_t j = i + 1; j < rows.size(); ++j) {
      if (rows[j].branches->empty()) continue;
      if (exact) {
        amplitude ip;
        for (const auto& bi : *rows[i].branches)
          for (const auto& bj : *rows[j].branches)
            if (key(bi) == key(bj)) ip = ip + bi.amp.conj() * bj.amp;
        if (!ip.is_zero())
          add("row-orthogonality",
              "rows " + row_name(m, rows[i]) + " and " + row_name(m, rows[j]) +
                  " are not orthogonal",
              std::abs(ip.to_complex()));
      } else {
        std::complex<double> ip = 0;
        for (const auto& bi : *rows[i].branches)
          for (const auto& bj : *rows[j].branches)
            if (key(bi) == key(bj)) ip += std::conj(bi.amp.to_complex()) * bj.amp.to_complex();
        if (std::abs(ip) > tol)
          add("row-orthogonality",
              "rows " + row_name(m, rows[i]) + " and " + row_name(m, rows[j]) +
                  " are not orthogonal",
              std::abs(ip));
      }
    }
  }

  // (c) separability: for every pair of rows and every pair of write symbols,
  // sum over target states of conj(R-part) * L-part vanishes. Collisions of
  // heads two cells apart reduce to exactly these sums.
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].branches->empty()) continue;
    for (size_t j = 0; j < rows.size(); ++j) {
      if (rows[j].branches->empty()) continue;
      for (int sr = 0; sr < kNumSymbols; ++sr) {
        for (int sl = 0; sl < kNumSymbols; ++sl) {
          if (exact) {
            amplitude sum;
            for (const auto& bi : *rows[i].branches) {
              if (bi.move != head_move::right || symbol_index(bi.write) != sr) continue;
              for (const auto& bj : *rows[j].branches) {
                if (bj.move != head_move::left || symbol_index(bj.write) != sl) continue;
                if (bi.state == bj.state) sum = sum + bi.amp.conj() * bj.amp;
              }
            }
            if (!sum.is_zero())
              add("separability",
                  "rows " + row_name(m, rows[i]) + " (R) and " + row_name(m, rows[j]) +
                      " (L) collide on writes " + symbol_str(symbol_from_index(sr)) + "," +
                      symbol_str(symbol_from_index(sl)),
                  std::abs(sum.to_complex()));
          } else {
            std::complex<double> sum = 0;
            for (const auto& bi : *rows[i].branches) {
              if (bi.move != head_move::right || symbol_index(bi.write) != sr) continue;
              for (const auto& bj : *rows[j].branches) {
                if (bj.move != head_move::left || symbol_index(bj.write) != sl) continue;
                if (bi.state == bj.state) sum += std::conj(bi.amp.to_complex()) * bj.amp.to_complex();
              }
            }
            if (std::abs(sum) > tol)
              add("separability",
                  "rows " + row_name(m, rows[i]) + " (R) and " + row_name(m, rows[j]) +
                      " (L) collide on writes " + symbol_str(symbol_from_index(sr)) + "," +
                      symbol_str(symbol_from_index(sl)),
                  std::abs(sum));
          }
        }
      }
    }
  }

  return rep;
}

}  // namespace qtmlab
