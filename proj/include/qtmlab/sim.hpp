#pragma once

#include <optional>
#include <vector>

#include "qtmlab/state.hpp"

namespace qtmlab {

// Applies the step operator to every ensemble component. Throws if the
// requested horizon exceeds what the space was built for or if norm is not
// preserved to norm_tol (a sign the machine is not well formed).
void evolve(global_state& st, const step_operator& op, int steps, bool parallel = true,
            double norm_tol = 1e-9);

// Total final-state weight after each of 0..t_max steps, starting from the
// given fixed-length input.
std::vector<double> overlap_trajectory(const machine& m, const Vec& psi, int n, int t_max,
                                       bool parallel = true);

// First t in 1..t_max with final overlap 1 and overlap 0 for all earlier
// times (tolerance tol); nullopt when no such time exists in the horizon.
std::optional<int> halting_time(const std::vector<double>& trajectory, double tol = 1e-9);

}  // namespace qtmlab
