#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace qtmlab {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Shortlex enumeration of bit strings up to a maximum length: the empty
// string, then 0, 1, 00, 01, ... Index of s is 2^|s| - 1 + value(s).
size_t shortlex_index(const std::string& bits);
std::string shortlex_string(size_t index);
inline size_t shortlex_dim(int max_len) { return (size_t(1) << (max_len + 1)) - 1; }

inline constexpr int kMaxQubitStringLen = 12;

// Mixed state over bit strings of length <= max_len, stored as a dense
// density matrix in the shortlex basis. Fixed-length states embed as the
// final length sector.
class qubit_string {
 public:
  int max_len = 0;
  Mat rho;

  qubit_string() : rho(Mat::Zero(1, 1)) {}
  explicit qubit_string(int k);

  size_t dim() const { return shortlex_dim(max_len); }
  double trace() const { return rho.trace().real(); }

  static qubit_string pure(int max_len, const Vec& psi);
  static qubit_string basis_state(const std::string& bits);
  // Interprets psi as a fixed-length-n state on the 2^n value basis.
  static qubit_string fixed_length(int n, const Vec& psi);

  // Largest length with any diagonal weight above tol.
  int base_length(double tol = 1e-12) const;
  // Re-embeds into a larger max_len (identity on existing sectors).
  qubit_string widened(int new_max_len) const;

  bool is_pure(double tol = 1e-9) const;
  // Principal eigenvector; meaningful for (nearly) pure states.
  Vec principal_vector() const;
  // Weighted spectral components with eigenvalue above tol.
  std::vector<std::pair<double, Vec>> components(double tol = 1e-12) const;

  double fidelity_with_pure(const Vec& psi) const;

  std::string to_json() const;
  static qubit_string from_json(const std::string& text);
};

// Trace distance (1/2)||rho - sigma||_1 between states of equal max_len.
double trace_distance(const qubit_string& a, const qubit_string& b);

}  // namespace qtmlab
