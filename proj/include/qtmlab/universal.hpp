#pragma once

#include "qtmlab/approx.hpp"
#include "qtmlab/coding.hpp"
#include "qtmlab/reading.hpp"

namespace qtmlab {

// exact: halting spaces and compression from the exact spectrum (default).
// approximate: the toy-scale pipeline through the approximate spaces at
// eps_0 = (1/81)*2^(-2n) with fine-tuning; gated to 2^n <= 2.
enum class code_mode { exact, approximate };

// Two-part program for the universal decoder: a self-delimiting machine
// description, the classical prefix-code word of the halting number, and the
// compressed quantum payload. code_word and payload together always hold
// n + 1 qubits.
struct encoded_program {
  std::string machine_doc;
  std::string code_word;  // '0'/'1' characters
  qubit_string payload;   // fixed-length state of (n+1) - |code_word| qubits
  int n = 0;

  // Bits of the self-delimiting machine tag: gamma-coded byte length plus
  // the document itself.
  size_t machine_tag_bits() const;

  // Binary container: [gamma byte-length][machine document][u32 bit count +
  // code word bits][u32 byte length + payload JSON]. n is implied by
  // |code_word| + payload length - 1.
  std::string to_bytes() const;
  static encoded_program from_bytes(const std::string& bytes);
};

// Compresses a fixed-length input that halts within the horizon into its
// halting-number code word plus the standard compression of the state inside
// the halting space. Mixed inputs must halt at one common time.
encoded_program encode(const machine& m, const qubit_string& input, int horizon,
                       code_mode mode = code_mode::exact);

// Runs the universal pipeline: enumerate halting times online, match the
// code word, decompress, fine-tune (identity in exact mode), simulate the
// matched halting time and read the output. delta is the accuracy the
// pipeline promises end to end.
qubit_string decode(const encoded_program& prog, const rational& delta, int horizon,
                    code_mode mode = code_mode::exact);

// Isometric embedding of strings of length <= n into n+1 fixed qubits: the
// i-th shortlex basis vector goes to the i-th value basis vector. The
// inverse rejects states outside the embedded range.
qubit_string embed_variable_length(const qubit_string& psi, int n);
qubit_string unembed_variable_length(const qubit_string& fixed, double tol = 1e-9);

inline constexpr int kMaxTunerLevels = 3;

// Truncated product of level isometries between approximate halting spaces
// at the shrinking schedule eps_k = (1/80) * eps_settled(eps_{k-1}), with a
// certified bound on the omitted tail.
struct fine_tuner {
  std::vector<rational> epsilon_schedule;  // eps_0 .. eps_K
  int truncation_K = 0;
  bool degenerate = false;  // some level space was zero (set when K >= 1)
  Mat composed;             // 2^n x 2^n unitary, identity when degenerate
  std::vector<double> level_norms;  // ||U_k - 1|| per computed level
  double telescoping_bound = 0.0;   // sum of level norms
  double tail_bound = 0.0;          // geometric bound on the omitted levels
};

// Toy mode only (2^n <= 2), K <= kMaxTunerLevels.
fine_tuner build_fine_tuner(const machine& m, int n, int t, int K);

struct complexity_bound {
  size_t machine_tag_bits = 0;
  int qubit_length = 0;     // n + 1
  size_t total_bits = 0;    // machine_tag_bits + qubit_length
  double witness_distance;  // trace distance decode(encode(psi)) vs direct run
  bool certified = false;   // witness_distance < delta
};

// Length of the two-part program for psi on m, with the decode-verified
// certificate that the bound is witnessed within delta.
complexity_bound complexity_upper_bound(const machine& m, const qubit_string& input,
                                        const rational& delta, int horizon);

}  // namespace qtmlab
