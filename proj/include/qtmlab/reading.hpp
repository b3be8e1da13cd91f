#pragma once

#include "qtmlab/state.hpp"

namespace qtmlab {

// Reads the output track of a global state: the bit string from cell 0 up to
// the first blank goes into a fresh string register, everything else (control
// state, head, input track, output cells left of 0 and beyond the first
// blank) is traced out. Coherence between two branches survives exactly when
// their leftovers agree, with the cells beyond the read prefix compared after
// shifting down to the delimiter. max_len < 0 means use the longest prefix
// actually present.
qubit_string read_output(const global_state& st, int max_len = -1);

// Runs the machine on a fixed-length input for t steps and reads the output.
qubit_string machine_output(const machine& m, const Vec& psi, int n, int t,
                            bool parallel = true);

}  // namespace qtmlab
