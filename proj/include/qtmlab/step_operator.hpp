#pragma once

#include <complex>
#include <vector>

#include "qtmlab/config_space.hpp"

namespace qtmlab {

using cplx = std::complex<double>;

// Sparse time-step operator on a reachable configuration space. Columns are
// basis configurations; rows cover the one-step extension (basis + frontier)
// so no amplitude is ever dropped by an application. Stored both
// column-major (build order, exact amplitudes) and row-major (apply order).
class step_operator {
 public:
  const config_space* space = nullptr;

  std::vector<int> col_ptr;
  std::vector<int> col_row;
  std::vector<amplitude> col_amp;
  std::vector<cplx> col_val;

  std::vector<int> row_ptr;
  std::vector<int> row_col;
  std::vector<cplx> row_val;

  size_t cols() const { return space->dim(); }
  size_t rows() const { return space->extended_dim(); }
  size_t nnz() const { return col_row.size(); }

  // out must have extended_dim entries; in is read over the first dim entries.
  void apply_serial(const cplx* in, cplx* out) const;
  void apply_parallel(const cplx* in, cplx* out) const;
  void apply(const std::vector<cplx>& in, std::vector<cplx>& out, bool parallel = true) const;

  // Exact check that the columns are orthonormal in Q(2^{-1/2}); returns the
  // number of violated column pairs (0 means isometry).
  size_t isometry_violations_exact() const;
  // Max-row-sum norm of S^dagger S - I over the basis columns.
  double isometry_defect() const;
};

step_operator build_step_operator(const config_space& space);

}  // namespace qtmlab
