#pragma once

#include <optional>

#include "qtmlab/rational.hpp"
#include "qtmlab/sim.hpp"
#include "qtmlab/subspace.hpp"

namespace qtmlab {

struct spectrum_entry {
  int t = 0;
  subspace space;
  std::optional<rational> epsilon;  // present in approximate mode
};

// All halting times in 1..t_max with a nonzero halting space, ordered by t.
struct halting_spectrum {
  std::string machine_name;
  int n = 0;
  int t_max = 0;
  bool approximate = false;
  rational delta;  // meaningful when approximate
  std::vector<spectrum_entry> entries;

  size_t total_dim() const;
};

// Space of inputs psi in H_n with final overlap exactly 1 at time t and 0 at
// every earlier time: the intersection over t' < t of ker(P_f S^{t'} E) with
// ker((I - P_f) S^t E). Rank decisions use a relative singular-value cutoff.
subspace exact_halting_space(const machine& m, int n, int t, double rel_tol = 1e-9);

halting_spectrum exact_spectrum(const machine& m, int n, int t_max, double rel_tol = 1e-9);

// Overlap <= eps at every t' < t and >= 1 - eps at t.
bool is_eps_t_halting(const machine& m, const Vec& psi, int n, double eps, int t);
bool is_eps_t_halting(const machine& m, const qubit_string& rho, int n, double eps, int t);

// Sum of entry dimensions never exceeds dim H_n.
bool check_spectrum_bound(const halting_spectrum& spec);

std::string spectrum_to_json(const halting_spectrum& spec, bool include_basis = false);

// Final-control rows of S^{t'} E for t' = 0..t_max, as dense blocks against
// the 2^n value basis; the squared norm of block[t']*psi is the halting
// overlap of psi at time t'. Shared by the ball tester, which evaluates
// trajectories for many vectors over one machine.
std::vector<Mat> halting_overlap_blocks(const machine& m, int n, int t_max);
double overlap_at(const std::vector<Mat>& blocks, int t, const Vec& psi);

}  // namespace qtmlab
