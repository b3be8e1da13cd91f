#include "qtmlab/step_operator.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qtmlab {

namespace {

char write_char(track_sym t) {
  switch (t) {
    case track_sym::zero: return '0';
    case track_sym::one: return '1';
    default: return '_';
  }
}

}  // namespace

step_operator build_step_operator(const config_space& space) {
  step_operator op;
  op.space = &space;
  const machine& m = *space.m;
  const size_t dim = space.dim();

  op.col_ptr.assign(dim + 1, 0);
  for (size_t c = 0; c < dim; ++c) {
    const config& src = space.basis[c];
    const std::vector<branch> branches = m.effective_row(src.control, space.scanned(src));
    op.col_ptr[c + 1] = op.col_ptr[c] + (int)branches.size();
    for (const auto& br : branches) {
      config next = src;
      int off = space.cell_offset(src.head);
      next.in_track[off] = write_char(br.write.in);
      next.out_track[off] = write_char(br.write.out);
      next.control = br.state;
      next.head = src.head + (br.move == head_move::right ? 1 : -1);
      int r = space.find(next);
      if (r < 0) throw std::logic_error("step target missing from extended basis");
      op.col_row.push_back(r);
      op.col_amp.push_back(br.amp);
      op.col_val.push_back(br.amp.to_complex());
    }
  }

  const size_t rows = space.extended_dim();
  const size_t nnz = op.col_row.size();
  op.row_ptr.assign(rows + 1, 0);
  for (size_t k = 0; k < nnz; ++k) op.row_ptr[op.col_row[k] + 1]++;
  for (size_t r = 0; r < rows; ++r) op.row_ptr[r + 1] += op.row_ptr[r];
  op.row_col.assign(nnz, 0);
  op.row_val.assign(nnz, cplx{});
  std::vector<int> cursor(op.row_ptr.begin(), op.row_ptr.end() - 1);
  for (size_t c = 0; c < dim; ++c) {
    for (int k = op.col_ptr[c]; k < op.col_ptr[c + 1]; ++k) {
      int pos = cursor[op.col_row[k]]++;
      op.row_col[pos] = (int)c;
      op.row_val[pos] = op.col_val[k];
    }
  }
  return op;
}

void step_operator::apply_serial(const cplx* in, cplx* out) const {
  const size_t nrows = rows();
  for (size_t r = 0; r < nrows; ++r) {
    cplx acc{};
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += row_val[k] * in[row_col[k]];
    out[r] = acc;
  }
}

void step_operator::apply_parallel(const cplx* in, cplx* out) const {
#ifdef _OPENMP
  const long nrows = (long)rows();
#pragma omp parallel for schedule(static)
  for (long r = 0; r < nrows; ++r) {
    cplx acc{};
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += row_val[k] * in[row_col[k]];
    out[r] = acc;
  }
#else
  apply_serial(in, out);
#endif
}

void step_operator::apply(const std::vector<cplx>& in, std::vector<cplx>& out,
                          bool parallel) const {
  if (in.size() < cols()) throw std::invalid_argument("input vector smaller than basis");
  out.assign(rows(), cplx{});
  if (parallel) {
    apply_parallel(in.data(), out.data());
  } else {
    apply_serial(in.data(), out.data());
  }
}

size_t step_operator::isometry_violations_exact() const {
  // Gram matrix column by column through the row-major layout; exact values
  // are reconstructed from col_amp via the row permutation.
  const size_t dim = cols();
  std::vector<amplitude> row_amp(col_amp.size());
  {
    std::vector<int> cursor(row_ptr.begin(), row_ptr.end() - 1);
    for (size_t c = 0; c < dim; ++c) {
      for (int k = col_ptr[c]; k < col_ptr[c + 1]; ++k) {
        row_amp[cursor[col_row[k]]++] = col_amp[k];
      }
    }
  }
  size_t bad = 0;
  std::vector<amplitude> acc(dim);
  std::vector<int> touched;
  std::vector<char> is_touched(dim, 0);
  for (size_t c = 0; c < dim; ++c) {
    for (int k = col_ptr[c]; k < col_ptr[c + 1]; ++k) {
      int r = col_row[k];
      amplitude a = col_amp[k].conj();
      for (int j = row_ptr[r]; j < row_ptr[r + 1]; ++j) {
        int c2 = row_col[j];
        if (!is_touched[c2]) {
          is_touched[c2] = 1;
          touched.push_back(c2);
          acc[c2] = amplitude{};
        }
        acc[c2] = acc[c2] + a * row_amp[j];
      }
    }
    bool saw_diag = false;
    for (int c2 : touched) {
      amplitude expect = ((size_t)c2 == c) ? amplitude::one() : amplitude{};
      if (!(acc[c2] - expect).is_zero()) ++bad;
      if ((size_t)c2 == c) saw_diag = true;
      is_touched[c2] = 0;
    }
    if (!saw_diag) ++bad;
    touched.clear();
  }
  return bad;
}

double step_operator::isometry_defect() const {
  const size_t dim = cols();
  double worst = 0.0;
  std::vector<cplx> acc(dim);
  std::vector<int> touched;
  std::vector<char> is_touched(dim, 0);
  for (size_t c = 0; c < dim; ++c) {
    for (int k = col_ptr[c]; k < col_ptr[c + 1]; ++k) {
      int r = col_row[k];
      cplx a = std::conj(col_val[k]);
      for (int j = row_ptr[r]; j < row_ptr[r + 1]; ++j) {
        int c2 = row_col[j];
        if (!is_touched[c2]) {
          is_touched[c2] = 1;
          touched.push_back(c2);
          acc[c2] = cplx{};
        }
        acc[c2] += a * row_val[j];
      }
    }
    double row_sum = 0.0;
    bool saw_diag = false;
    for (int c2 : touched) {
      cplx expect = ((size_t)c2 == c) ? cplx{1.0, 0.0} : cplx{};
      row_sum += std::abs(acc[c2] - expect);
      if ((size_t)c2 == c) saw_diag = true;
      is_touched[c2] = 0;
    }
    if (!saw_diag) row_sum += 1.0;
    touched.clear();
    worst = std::max(worst, row_sum);
  }
  return worst;
}

}  // namespace qtmlab
