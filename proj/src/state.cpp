#include "qtmlab/state.hpp"

#include <stdexcept>

namespace qtmlab {

double global_state::trace() const {
  double t = 0.0;
  for (const auto& [w, v] : parts) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    t += w * s;
  }
  return t;
}

double global_state::final_overlap() const {
  double t = 0.0;
  const int fin = space->m->final;
  for (const auto& [w, v] : parts) {
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
      if (space->at((int)i).control == fin) s += std::norm(v[i]);
    }
    t += w * s;
  }
  return t;
}

double global_state::frontier_mass() const {
  double t = 0.0;
  const size_t dim = space->dim();
  for (const auto& [w, v] : parts) {
    double s = 0.0;
    for (size_t i = dim; i < v.size(); ++i) s += std::norm(v[i]);
    t += w * s;
  }
  return t;
}

global_state initial_state(const config_space& space, const qubit_string& input) {
  if (input.max_len > space.n) {
    throw std::invalid_argument("input strings longer than the space supports");
  }
  global_state st;
  st.space = &space;
  for (const auto& [w, comp] : input.components()) {
    std::vector<cplx> v(space.extended_dim(), cplx{});
    for (Eigen::Index i = 0; i < comp.size(); ++i) {
      if (std::abs(comp(i)) == 0.0) continue;
      int idx = space.input_index(shortlex_string((size_t)i));
      v[idx] += comp(i);
    }
    st.parts.emplace_back(w, std::move(v));
  }
  return st;
}

global_state initial_state(const config_space& space, const Vec& psi, int n) {
  if (n > space.n) throw std::invalid_argument("input strings longer than the space supports");
  if ((size_t)psi.size() != (size_t(1) << n)) {
    throw std::invalid_argument("fixed-length vector must have 2^n entries");
  }
  global_state st;
  st.space = &space;
  std::vector<cplx> v(space.extended_dim(), cplx{});
  for (size_t x = 0; x < (size_t(1) << n); ++x) {
    if (std::abs(psi(x)) == 0.0) continue;
    std::string bits(n, '0');
    for (int i = 0; i < n; ++i) {
      if ((x >> (n - 1 - i)) & 1) bits[i] = '1';
    }
    v[space.input_index(bits)] += psi(x);
  }
  st.parts.emplace_back(1.0, std::move(v));
  return st;
}

}  // namespace qtmlab
