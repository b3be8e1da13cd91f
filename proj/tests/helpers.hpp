#pragma once

#include <random>
#include <string>
#include <vector>

#include "qtmlab/machine.hpp"
#include "qtmlab/qubitstring.hpp"

namespace qtmlab::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(QTMLAB_FIXTURE_DIR) + "/" + name + ".qtm";
}

inline machine load_fixture(const std::string& name) { return load_machine(fixture_path(name)); }

inline const std::vector<std::string>& good_fixtures() {
  static const std::vector<std::string> names = {
      "move-halt",      "hadamard-halt",      "copy-halt", "delay-by-first-bit",
      "move-to-output", "hadamard-to-output", "never-halt"};
  return names;
}

inline Vec random_unit(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> g;
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = cplx(g(rng), g(rng));
  return v / v.norm();
}

inline Vec basis_vec(Eigen::Index dim, Eigen::Index i) {
  Vec v = Vec::Zero(dim);
  v(i) = 1.0;
  return v;
}

}  // namespace qtmlab::testing
