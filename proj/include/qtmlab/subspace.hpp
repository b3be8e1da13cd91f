#pragma once

#include <vector>

#include "qtmlab/qubitstring.hpp"

namespace qtmlab {

// Subspace of a finite-dimensional space, held as orthonormal basis columns.
struct subspace {
  Mat basis;  // ambient_dim x dim, orthonormal columns

  subspace() : basis(Mat::Zero(1, 0)) {}
  explicit subspace(Mat b) : basis(std::move(b)) {}
  static subspace zero(size_t ambient) { return subspace(Mat::Zero(ambient, 0)); }
  static subspace full(size_t ambient) {
    return subspace(Mat::Identity(ambient, ambient));
  }

  size_t ambient() const { return basis.rows(); }
  size_t dim() const { return basis.cols(); }
  Mat projector() const { return basis * basis.adjoint(); }
  // distance of a vector to the subspace, ||psi - P psi||
  double distance(const Vec& psi) const;
  // max orthonormality defect, for invariant checks
  double orthonormality_defect() const;
};

// Modified Gram-Schmidt over the given columns, dropping residuals below
// drop_tol in norm.
subspace span_of(const Mat& vectors, double drop_tol = 1e-9);
// Column basis of the kernel of A, singular values below rel_tol * largest
// treated as zero.
subspace kernel_of(const Mat& A, double rel_tol = 1e-9);
// Intersection of two subspaces of the same ambient space.
subspace intersect(const subspace& a, const subspace& b, double rel_tol = 1e-9);

// Gram-Schmidt of the projections {P_U e_1, P_U e_2, ...} in computational
// basis order with null vectors dropped; spans u and is canonical for it.
Mat standard_basis(const subspace& u, double drop_tol = 1e-9);

// Isometric embedding of a subspace into the qubit space of target_len =
// ceil(log2 dim) qubits, via its standard basis.
struct compression_map {
  subspace source;
  int target_len = 0;
  Mat std_basis;  // ambient x dim

  // coordinates of psi in the standard basis, zero-padded to 2^target_len
  Vec compress(const Vec& psi, double tol = 1e-8) const;
  // prepend-zeros embedding followed by the completed standard-basis unitary
  Vec decompress(const Vec& phi) const;
  // the full ambient unitary completing the standard basis
  Mat completion_unitary() const;
};

compression_map make_compression(const subspace& u);

// Half trace norm of rho - sigma for matrices of equal dimension.
double trace_distance(const Mat& rho, const Mat& sigma);
// Operator norm (largest absolute eigenvalue for Hermitian input).
double operator_norm(const Mat& a);

// Largest N such that the first N vectors pairwise satisfy
// |<psi_i|psi_j>| < 1/(N-1), certifying that they span at least N dims.
size_t overlap_dimension_bound(const std::vector<Vec>& vectors);

struct isometry_report {
  Mat map;             // ambient x ambient, acts as the isometry on v, 0 on v-perp
  double norm_actual;  // ||U - 1|| restricted to v
  double norm_bound;   // (8/3) sqrt(eps) (5/2)^{dim v}
};

// Isometry v -> w built by matching every v basis vector to the nearest unit
// vector of w (must lie within eps) and re-orthonormalizing, with the norm
// bound (8/3)·sqrt(eps)·(5/2)^dim certified. Requires
// eps <= (1/36)·(5/2)^(2-2·dim v).
isometry_report similar_subspace_isometry(const subspace& v, const subspace& w, double eps);

struct composed_isometry {
  Mat product;
  double telescoping_bound;  // sum of ||U_k - 1||
};

// Product of the operators in order with the telescoping distance bound
// ||prod - 1|| <= sum ||U_k - 1||. Empty list gives the identity.
composed_isometry compose_isometries(const std::vector<Mat>& ops, size_t dim_if_empty = 1);

}  // namespace qtmlab
