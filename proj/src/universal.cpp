#include "qtmlab/universal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "qtmlab/sim.hpp"

namespace qtmlab {

namespace {

struct bit_writer {
  std::string bytes;
  int fill = 0;  // bits used in the last byte

  void push(bool b) {
    if (fill == 0) bytes.push_back('\0');
    if (b) bytes.back() = char((unsigned char)bytes.back() | (1u << (7 - fill)));
    fill = (fill + 1) % 8;
  }
  void align() { fill = 0; }
  void push_u32(uint32_t v) {
    align();
    for (int i = 3; i >= 0; --i) bytes.push_back(char((v >> (8 * i)) & 0xff));
  }
  void push_raw(const std::string& s) {
    align();
    bytes += s;
  }
};

struct bit_reader {
  const std::string& bytes;
  size_t pos = 0;
  int bit = 0;

  explicit bit_reader(const std::string& b) : bytes(b) {}

  bool next() {
    if (pos >= bytes.size()) throw std::runtime_error("truncated program container");
    bool b = ((unsigned char)bytes[pos] >> (7 - bit)) & 1u;
    if (++bit == 8) {
      bit = 0;
      ++pos;
    }
    return b;
  }
  void align() {
    if (bit != 0) {
      bit = 0;
      ++pos;
    }
  }
  uint32_t read_u32() {
    align();
    if (pos + 4 > bytes.size()) throw std::runtime_error("truncated program container");
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | (unsigned char)bytes[pos++];
    return v;
  }
  std::string read_raw(size_t len) {
    align();
    if (pos + len > bytes.size()) throw std::runtime_error("truncated program container");
    std::string s = bytes.substr(pos, len);
    pos += len;
    return s;
  }
};

int bit_width(uint64_t v) { return 64 - __builtin_clzll(v); }

void gamma_encode(bit_writer& w, uint64_t v) {
  int k = bit_width(v);
  for (int i = 0; i < k - 1; ++i) w.push(false);
  for (int i = k - 1; i >= 0; --i) w.push((v >> i) & 1u);
}

uint64_t gamma_decode(bit_reader& r) {
  int zeros = 0;
  while (!r.next()) {
    if (++zeros > 63) throw std::runtime_error("corrupt gamma length in program container");
  }
  uint64_t v = 1;
  for (int i = 0; i < zeros; ++i) v = (v << 1) | (r.next() ? 1u : 0u);
  return v;
}

int ceil_log2(size_t d) {
  int k = 0;
  while ((size_t(1) << k) < d) ++k;
  return k;
}

// Squared weight of a component vector outside the fixed-length sector.
double off_sector_mass(const Vec& component, int len) {
  size_t off = (size_t(1) << len) - 1;
  size_t sz = size_t(1) << len;
  double total = component.squaredNorm();
  double sector = component.segment(off, sz).squaredNorm();
  return total - sector;
}

Vec sector_of(const Vec& component, int len) {
  size_t off = (size_t(1) << len) - 1;
  return component.segment(off, size_t(1) << len);
}

qubit_string fixed_density(int len, const Mat& rho) {
  qubit_string q(len);
  size_t off = (size_t(1) << len) - 1;
  q.rho.block(off, off, rho.rows(), rho.cols()) = rho;
  return q;
}

std::vector<double> ensemble_trajectory(const machine& m, const qubit_string& input, int n,
                                        int horizon) {
  config_space space = build_space(m, n, horizon);
  step_operator op = build_step_operator(space);
  global_state st = initial_state(space, input);
  std::vector<double> traj(horizon + 1);
  traj[0] = st.final_overlap();
  for (int t = 1; t <= horizon; ++t) {
    evolve(st, op, 1);
    traj[t] = st.final_overlap();
  }
  return traj;
}

qubit_string run_and_read(const machine& m, const qubit_string& input, int n, int t) {
  config_space space = build_space(m, n, t);
  step_operator op = build_step_operator(space);
  global_state st = initial_state(space, input);
  evolve(st, op, t);
  return read_output(st);
}

rational base_epsilon(int n) { return rational(1, 81LL << (2 * n)); }

halting_spectrum spectrum_for(const machine& m, int n, int horizon, code_mode mode) {
  if (mode == code_mode::approximate) return approx_spectrum(m, n, horizon, base_epsilon(n));
  return exact_spectrum(m, n, horizon);
}

// Extends orthonormal columns to a full unitary with Gram-Schmidt over the
// identity columns, deterministically.
Mat complete_columns(const Mat& basis) {
  Eigen::Index amb = basis.rows();
  Mat out(amb, amb);
  out.leftCols(basis.cols()) = basis;
  Eigen::Index have = basis.cols();
  for (Eigen::Index j = 0; j < amb && have < amb; ++j) {
    Vec v = Vec::Unit(amb, j);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index c = 0; c < have; ++c) v -= out.col(c).dot(v) * out.col(c);
    }
    double nrm = v.norm();
    if (nrm > 1e-6) out.col(have++) = v / nrm;
  }
  if (have != amb) throw std::logic_error("orthonormal completion fell short");
  return out;
}

}  // namespace

size_t encoded_program::machine_tag_bits() const {
  return size_t(2 * bit_width(machine_doc.size()) - 1) + 8 * machine_doc.size();
}

std::string encoded_program::to_bytes() const {
  if (machine_doc.empty()) throw std::invalid_argument("program has an empty machine document");
  if ((int)code_word.size() + payload.max_len != n + 1) {
    throw std::invalid_argument("code word and payload do not add up to n+1 qubits");
  }
  bit_writer w;
  gamma_encode(w, machine_doc.size());
  w.push_raw(machine_doc);
  w.push_u32((uint32_t)code_word.size());
  for (char c : code_word) w.push(c == '1');
  std::string json = payload.to_json();
  w.push_u32((uint32_t)json.size());
  w.push_raw(json);
  return w.bytes;
}

encoded_program encoded_program::from_bytes(const std::string& bytes) {
  bit_reader r(bytes);
  uint64_t doc_len = gamma_decode(r);
  encoded_program prog;
  prog.machine_doc = r.read_raw(doc_len);
  uint32_t word_bits = r.read_u32();
  prog.code_word.reserve(word_bits);
  for (uint32_t i = 0; i < word_bits; ++i) prog.code_word.push_back(r.next() ? '1' : '0');
  uint32_t json_len = r.read_u32();
  prog.payload = qubit_string::from_json(r.read_raw(json_len));
  prog.n = (int)word_bits + prog.payload.max_len - 1;
  if (prog.n < 0) throw std::runtime_error("corrupt program container");
  return prog;
}

encoded_program encode(const machine& m, const qubit_string& input, int horizon,
                       code_mode mode) {
  int n = input.max_len;
  auto comps = input.components();
  for (const auto& [w, v] : comps) {
    (void)w;
    if (off_sector_mass(v, n) > 1e-12) {
      throw std::invalid_argument("encoder requires a fixed-length input");
    }
  }

  std::vector<double> traj = ensemble_trajectory(m, input, n, horizon);
  auto tau = halting_time(traj, 1e-8);
  if (!tau) {
    throw std::runtime_error("input does not halt at a single time within the horizon");
  }

  halting_spectrum spec = spectrum_for(m, n, horizon, mode);
  size_t i = 0;
  while (i < spec.entries.size() && spec.entries[i].t != *tau) ++i;
  if (i == spec.entries.size()) {
    throw std::runtime_error("halting time missing from the spectrum");
  }

  std::vector<size_t> dims;
  for (const auto& e : spec.entries) dims.push_back(e.space.dim());
  prefix_code code = blind_prefix_code(code_lengths_from_dims(n, dims));

  compression_map cm = make_compression(spec.entries[i].space);
  if ((int)code.words[i].size() + cm.target_len != n + 1) {
    throw std::logic_error("code word and compression length disagree");
  }

  Mat untune;
  if (mode == code_mode::approximate) {
    untune = build_fine_tuner(m, n, *tau, 0).composed.adjoint();
  }

  size_t payload_dim = size_t(1) << cm.target_len;
  Mat acc = Mat::Zero(payload_dim, payload_dim);
  for (const auto& [w, v] : comps) {
    Vec x = sector_of(v, n);
    if (mode == code_mode::approximate) x = untune * x;
    Vec y = cm.compress(x);
    acc += w * (y * y.adjoint());
  }

  encoded_program prog;
  prog.machine_doc = serialize_machine(m);
  prog.code_word = code.words[i];
  prog.payload = fixed_density(cm.target_len, acc);
  prog.n = n;
  return prog;
}

qubit_string decode(const encoded_program& prog, const rational& delta, int horizon,
                    code_mode mode) {
  if (delta.sign() <= 0) throw std::invalid_argument("accuracy must be positive");
  machine m = parse_machine(prog.machine_doc);
  if (!validate_machine(m, 0.0, true).ok) {
    throw std::invalid_argument("program carries a malformed machine");
  }
  int n = prog.n;
  if ((int)prog.code_word.size() + prog.payload.max_len != n + 1) {
    throw std::invalid_argument("code word and payload do not add up to n+1 qubits");
  }

  halting_spectrum spec = spectrum_for(m, n, horizon, mode);

  int tau = -1;
  const subspace* space = nullptr;
  std::vector<size_t> dims;
  for (const auto& e : spec.entries) {
    dims.push_back(e.space.dim());
    prefix_code code = blind_prefix_code(code_lengths_from_dims(n, dims));
    if (code.words.back() == prog.code_word) {
      tau = e.t;
      space = &e.space;
      break;
    }
  }
  if (tau < 0) {
    throw std::runtime_error("no halting branch within the horizon matches the code word");
  }

  compression_map cm = make_compression(*space);
  if (cm.target_len != prog.payload.max_len) {
    throw std::runtime_error("decompression dimension mismatch");
  }

  Mat tune;
  if (mode == code_mode::approximate) {
    tune = build_fine_tuner(m, n, tau, 0).composed;
  }

  size_t amb = size_t(1) << n;
  Mat rho_in = Mat::Zero(amb, amb);
  for (const auto& [w, v] : prog.payload.components()) {
    if (off_sector_mass(v, prog.payload.max_len) > 1e-12) {
      throw std::invalid_argument("payload is not a fixed-length state");
    }
    Vec x = cm.decompress(sector_of(v, prog.payload.max_len));
    if (mode == code_mode::approximate) x = tune * x;
    rho_in += w * (x * x.adjoint());
  }

  return run_and_read(m, fixed_density(n, rho_in), n, tau);
}

qubit_string embed_variable_length(const qubit_string& psi, int n) {
  if (psi.base_length() > n) {
    throw std::length_error("input is longer than the embedding allows");
  }
  size_t sd = shortlex_dim(n);
  qubit_string out(n + 1);
  size_t off = (size_t(1) << (n + 1)) - 1;
  size_t have = std::min(sd, psi.dim());
  out.rho.block(off, off, have, have) = psi.rho.topLeftCorner(have, have);
  return out;
}

qubit_string unembed_variable_length(const qubit_string& fixed, double tol) {
  if (fixed.max_len < 1) throw std::invalid_argument("embedded states hold at least one qubit");
  int n = fixed.max_len - 1;
  size_t off = (size_t(1) << (n + 1)) - 1;
  size_t sd = shortlex_dim(n);
  double outside = fixed.trace() - fixed.rho.block(off, off, sd, sd).trace().real();
  if (outside > tol) {
    throw std::invalid_argument("state lies outside the embedded range");
  }
  qubit_string out(n);
  out.rho = fixed.rho.block(off, off, sd, sd);
  return out;
}

fine_tuner build_fine_tuner(const machine& m, int n, int t, int K) {
  if ((size_t(1) << n) > 2) {
    throw std::invalid_argument("fine tuner is gated to toy mode (2^n <= 2)");
  }
  if (K < 0 || K > kMaxTunerLevels) {
    throw std::invalid_argument("tuner truncation outside the configured cap");
  }

  fine_tuner ft;
  ft.truncation_K = K;
  size_t amb = size_t(1) << n;
  ft.composed = Mat::Identity(amb, amb);
  ft.epsilon_schedule.push_back(base_epsilon(n));

  const double q = 18.0 / 80.0;
  double const_n = (8.0 / 3.0) * std::pow(2.5, double(amb)) *
                   std::sqrt(5.5 * ft.epsilon_schedule[0].to_double() / q);
  ft.tail_bound = const_n * std::pow(q, (K + 1) / 2.0) / (1.0 - std::sqrt(q));
  if (K == 0) return ft;

  auto [prev_space, prev_meta] = approx_halting_space(m, n, t, ft.epsilon_schedule[0]);
  std::vector<Mat> ops;
  for (int k = 1; k <= K; ++k) {
    rational eps_k = prev_meta.epsilon / 80;
    rational ratio = ft.epsilon_schedule[0];
    for (int j = 0; j < k; ++j) ratio *= rational(18, 80);
    if (eps_k > ratio) throw std::logic_error("epsilon schedule exceeds its geometric bound");
    ft.epsilon_schedule.push_back(eps_k);

    if (prev_space.dim() == 0) {
      ft.degenerate = true;
      return ft;
    }
    auto [space_k, meta_k] = approx_halting_space(m, n, t, eps_k);
    if (space_k.dim() == 0) {
      ft.degenerate = true;
      return ft;
    }
    if (prev_space.dim() != space_k.dim()) {
      throw std::runtime_error("fine-tuner levels disagree in dimension");
    }

    double cap = (1.0 / 36.0) * std::pow(2.5, 2.0 - 2.0 * double(space_k.dim()));
    double eps_call =
        std::min(5.5 * ft.epsilon_schedule[k - 1].to_double(), cap * (1.0 - 1e-9));
    isometry_report rep = similar_subspace_isometry(space_k, prev_space, eps_call);

    Mat matched = rep.map * space_k.basis;
    Mat level = complete_columns(matched) * complete_columns(space_k.basis).adjoint();
    ops.push_back(level.adjoint());
    ft.level_norms.push_back(operator_norm(ops.back() - Mat::Identity(amb, amb)));

    prev_space = std::move(space_k);
    prev_meta = meta_k;
  }

  composed_isometry ci = compose_isometries(ops, amb);
  ft.composed = ci.product;
  ft.telescoping_bound = ci.telescoping_bound;
  return ft;
}

complexity_bound complexity_upper_bound(const machine& m, const qubit_string& input,
                                        const rational& delta, int horizon) {
  encoded_program prog = encode(m, input, horizon);
  qubit_string decoded = decode(prog, delta, horizon);

  int n = input.max_len;
  auto tau = halting_time(ensemble_trajectory(m, input, n, horizon), 1e-8);
  qubit_string direct = run_and_read(m, input, n, *tau);

  int common = std::max(decoded.max_len, direct.max_len);
  complexity_bound out;
  out.machine_tag_bits = prog.machine_tag_bits();
  out.qubit_length = n + 1;
  out.total_bits = out.machine_tag_bits + size_t(out.qubit_length);
  out.witness_distance = trace_distance(decoded.widened(common), direct.widened(common));
  out.certified = out.witness_distance < delta.to_double();
  return out;
}

}  // namespace qtmlab
