#include "qtmlab/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace qtmlab {

void evolve(global_state& st, const step_operator& op, int steps, bool parallel,
            double norm_tol) {
  if (st.space != op.space) throw std::invalid_argument("state and operator space mismatch");
  if (steps < 0) throw std::invalid_argument("steps must be nonnegative");
  std::vector<cplx> out(op.rows());
  for (auto& [w, v] : st.parts) {
    double before = 0.0;
    for (const cplx& z : v) before += std::norm(z);
    for (int s = 0; s < steps; ++s) {
      if (parallel) {
        op.apply_parallel(v.data(), out.data());
      } else {
        op.apply_serial(v.data(), out.data());
      }
      v.swap(out);
    }
    double after = 0.0;
    for (const cplx& z : v) after += std::norm(z);
    if (std::abs(after - before) > norm_tol) {
      throw std::runtime_error("evolution broke norm conservation");
    }
  }
  if (st.frontier_mass() > norm_tol) {
    throw std::runtime_error("evolution leaked past the configuration window");
  }
}

std::vector<double> overlap_trajectory(const machine& m, const Vec& psi, int n, int t_max,
                                       bool parallel) {
  config_space space = build_space(m, n, t_max);
  step_operator op = build_step_operator(space);
  global_state st = initial_state(space, psi, n);
  std::vector<double> traj;
  traj.reserve(t_max + 1);
  traj.push_back(st.final_overlap());
  for (int t = 1; t <= t_max; ++t) {
    evolve(st, op, 1, parallel);
    traj.push_back(st.final_overlap());
  }
  return traj;
}

std::optional<int> halting_time(const std::vector<double>& trajectory, double tol) {
  for (size_t t = 1; t < trajectory.size(); ++t) {
    if (std::abs(trajectory[t] - 1.0) <= tol) {
      bool clean = true;
      for (size_t u = 0; u < t; ++u) {
        if (trajectory[u] > tol) {
          clean = false;
          break;
        }
      }
      if (clean) return (int)t;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace qtmlab
