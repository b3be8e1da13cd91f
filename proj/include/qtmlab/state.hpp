#pragma once

#include <utility>
#include <vector>

#include "qtmlab/config_space.hpp"
#include "qtmlab/qubitstring.hpp"
#include "qtmlab/step_operator.hpp"

namespace qtmlab {

// State of the whole machine over a reachable configuration space. Mixed
// inputs become an ensemble of weighted pure components; each component
// vector spans the extended basis so a step can be applied in place.
struct global_state {
  const config_space* space = nullptr;
  std::vector<std::pair<double, std::vector<cplx>>> parts;

  double trace() const;
  // total squared amplitude on configurations in the final control state
  double final_overlap() const;
  // squared amplitude outside the t_max-reachable basis (should stay ~0)
  double frontier_mass() const;
};

// Embeds a (possibly mixed, variable-length) input: each basis string of
// length <= n starts at cell 0 with blank output track and head at 0.
global_state initial_state(const config_space& space, const qubit_string& input);
// Fixed-length pure input over the 2^n value basis.
global_state initial_state(const config_space& space, const Vec& psi, int n);

}  // namespace qtmlab
