#include "qtmlab/halting.hpp"

#include <nlohmann/json.hpp>

namespace qtmlab {

using nlohmann::ordered_json;

size_t halting_spectrum::total_dim() const {
  size_t s = 0;
  for (const auto& e : entries) s += e.space.dim();
  return s;
}

namespace {

// Dense evolution of the input embedding: W starts as E (one-hot columns at
// the initial configurations) and advances one step per call.
struct embedded_evolution {
  config_space space;
  step_operator op;
  std::vector<char> is_final;
  Mat w;

  embedded_evolution(const machine& m, int n, int t_max)
      : space(build_space(m, n, t_max)), op(build_step_operator(space)) {
    const size_t rows = space.extended_dim();
    is_final.assign(rows, 0);
    for (size_t i = 0; i < rows; ++i) {
      if (space.at((int)i).control == m.final) is_final[i] = 1;
    }
    std::vector<int> inputs = space.input_basis();
    w = Mat::Zero(rows, inputs.size());
    for (size_t c = 0; c < inputs.size(); ++c) w(inputs[c], c) = 1.0;
  }

  void step() {
    Mat next(w.rows(), w.cols());
    std::vector<cplx> in(w.rows()), out(w.rows());
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      Eigen::VectorXcd::Map(in.data(), w.rows()) = w.col(c);
      op.apply_parallel(in.data(), out.data());
      next.col(c) = Eigen::VectorXcd::Map(out.data(), w.rows());
    }
    w = std::move(next);
  }

  Mat rows_where(bool fin) const {
    Eigen::Index count = 0;
    for (char f : is_final) count += (f == (fin ? 1 : 0));
    Mat out(count, w.cols());
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      if ((is_final[i] == 1) == fin) out.row(r++) = w.row(i);
    }
    return out;
  }
};

}  // namespace

halting_spectrum exact_spectrum(const machine& m, int n, int t_max, double rel_tol) {
  halting_spectrum spec;
  spec.machine_name = m.name;
  spec.n = n;
  spec.t_max = t_max;

  embedded_evolution ev(m, n, t_max);
  const size_t dim_h = size_t(1) << n;
  subspace running = subspace::full(dim_h);  // no final overlap before current t

  {
    // t' = 0 constraint: initial states with final-control amplitude
    Mat f0 = ev.rows_where(true) * running.basis;
    running = subspace(running.basis * kernel_of(f0, rel_tol).basis);
  }
  for (int t = 1; t <= t_max && running.dim() > 0; ++t) {
    ev.step();
    Mat nonfinal = ev.rows_where(false) * running.basis;
    subspace halt_coords = kernel_of(nonfinal, rel_tol);
    if (halt_coords.dim() > 0) {
      spectrum_entry e;
      e.t = t;
      e.space = subspace(running.basis * halt_coords.basis);
      spec.entries.push_back(std::move(e));
    }
    Mat fin = ev.rows_where(true) * running.basis;
    running = subspace(running.basis * kernel_of(fin, rel_tol).basis);
  }
  return spec;
}

subspace exact_halting_space(const machine& m, int n, int t, double rel_tol) {
  halting_spectrum spec = exact_spectrum(m, n, t, rel_tol);
  for (const auto& e : spec.entries) {
    if (e.t == t) return e.space;
  }
  return subspace::zero(size_t(1) << n);
}

bool is_eps_t_halting(const machine& m, const Vec& psi, int n, double eps, int t) {
  if (std::abs(psi.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("state must be normalized");
  }
  std::vector<double> traj = overlap_trajectory(m, psi, n, t);
  for (int u = 0; u < t; ++u) {
    if (traj[u] > eps) return false;
  }
  return traj[t] >= 1.0 - eps;
}

bool is_eps_t_halting(const machine& m, const qubit_string& rho, int n, double eps, int t) {
  if (std::abs(rho.trace() - 1.0) > 1e-9) {
    throw std::invalid_argument("state must have unit trace");
  }
  config_space space = build_space(m, n, t);
  step_operator op = build_step_operator(space);
  global_state st = initial_state(space, rho);
  if (st.final_overlap() > eps) return false;
  for (int u = 1; u < t; ++u) {
    evolve(st, op, 1);
    if (st.final_overlap() > eps) return false;
  }
  evolve(st, op, 1);
  return st.final_overlap() >= 1.0 - eps;
}

bool check_spectrum_bound(const halting_spectrum& spec) {
  return spec.total_dim() <= (size_t(1) << spec.n);
}

std::string spectrum_to_json(const halting_spectrum& spec, bool include_basis) {
  ordered_json j;
  j["machine"] = spec.machine_name;
  j["n"] = spec.n;
  if (spec.approximate) {
    j["mode"] = ordered_json{{"approx", spec.delta.str()}};
  } else {
    j["mode"] = "exact";
  }
  j["t_max"] = spec.t_max;
  ordered_json entries = ordered_json::array();
  for (const auto& e : spec.entries) {
    ordered_json je;
    je["t"] = e.t;
    je["dim"] = e.space.dim();
    if (e.epsilon) {
      je["epsilon"] = e.epsilon->str();
    } else {
      je["epsilon"] = nullptr;
    }
    if (include_basis) {
      ordered_json basis = ordered_json::array();
      for (Eigen::Index c = 0; c < e.space.basis.cols(); ++c) {
        ordered_json vec = ordered_json::array();
        for (Eigen::Index r = 0; r < e.space.basis.rows(); ++r) {
          vec.push_back(ordered_json::array(
              {e.space.basis(r, c).real(), e.space.basis(r, c).imag()}));
        }
        basis.push_back(vec);
      }
      je["basis"] = basis;
    }
    entries.push_back(je);
  }
  j["entries"] = entries;
  return j.dump(2);
}

namespace {

// rows that are identically zero contribute nothing to the overlap norm
Mat drop_zero_rows(const Mat& a) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    if (a.row(r).squaredNorm() > 0.0) keep.push_back(r);
  }
  Mat out((Eigen::Index)keep.size(), a.cols());
  for (size_t i = 0; i < keep.size(); ++i) out.row(i) = a.row(keep[i]);
  return out;
}

}  // namespace

std::vector<Mat> halting_overlap_blocks(const machine& m, int n, int t_max) {
  embedded_evolution ev(m, n, t_max);
  std::vector<Mat> blocks;
  blocks.reserve(t_max + 1);
  blocks.push_back(drop_zero_rows(ev.rows_where(true)));
  for (int t = 1; t <= t_max; ++t) {
    ev.step();
    blocks.push_back(drop_zero_rows(ev.rows_where(true)));
  }
  return blocks;
}

double overlap_at(const std::vector<Mat>& blocks, int t, const Vec& psi) {
  double n2 = psi.squaredNorm();
  if (n2 == 0.0) return 0.0;
  return (blocks.at(t) * psi).squaredNorm() / n2;
}

}  // namespace qtmlab
