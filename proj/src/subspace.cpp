#include "qtmlab/subspace.hpp"

#include <Eigen/SVD>
#include <stdexcept>

namespace qtmlab {

double subspace::distance(const Vec& psi) const {
  if ((size_t)psi.size() != ambient()) throw std::invalid_argument("ambient dimension mismatch");
  Vec proj = basis * (basis.adjoint() * psi);
  return (psi - proj).norm();
}

double subspace::orthonormality_defect() const {
  if (dim() == 0) return 0.0;
  Mat g = basis.adjoint() * basis;
  return (g - Mat::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

subspace span_of(const Mat& vectors, double drop_tol) {
  const Eigen::Index amb = vectors.rows();
  Mat out(amb, vectors.cols());
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Vec v = vectors.col(c);
    // two orthogonalization passes keep the basis orthonormal to roundoff
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < k; ++j) {
        v -= out.col(j) * (out.col(j).adjoint() * v)(0);
      }
    }
    double nrm = v.norm();
    if (nrm > drop_tol) {
      out.col(k++) = v / nrm;
    }
  }
  return subspace(out.leftCols(k));
}

subspace kernel_of(const Mat& A, double rel_tol) {
  if (A.rows() == 0) return subspace::full(A.cols());
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double cut = sv.size() > 0 ? sv(0) * rel_tol : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++rank;
  }
  return subspace(svd.matrixV().rightCols(A.cols() - rank));
}

subspace intersect(const subspace& a, const subspace& b, double rel_tol) {
  if (a.ambient() != b.ambient()) throw std::invalid_argument("ambient dimension mismatch");
  if (a.dim() == 0 || b.dim() == 0) return subspace::zero(a.ambient());
  // x in a and in b  <=>  x = B_a y with (I - P_b) B_a y = 0
  Mat constraint = a.basis - b.basis * (b.basis.adjoint() * a.basis);
  subspace y = kernel_of(constraint, rel_tol);
  if (y.dim() == 0) return subspace::zero(a.ambient());
  return span_of(a.basis * y.basis);
}

Mat standard_basis(const subspace& u, double drop_tol) {
  Mat proj = u.projector();  // columns of P_U are P_U e_i in basis order
  subspace s = span_of(proj, drop_tol);
  if (s.dim() != u.dim()) {
    throw std::logic_error("standard basis lost rank; drop threshold unsuitable");
  }
  return s.basis;
}

Vec compression_map::compress(const Vec& psi, double tol) const {
  if (source.dim() > 0 && source.distance(psi) > tol * std::max(1.0, psi.norm())) {
    throw std::invalid_argument("vector lies outside the source subspace");
  }
  Vec coords = std_basis.adjoint() * psi;
  Vec out = Vec::Zero(size_t(1) << target_len);
  out.head(coords.size()) = coords;
  return out;
}

Vec compression_map::decompress(const Vec& phi) const {
  if ((size_t)phi.size() != (size_t(1) << target_len)) {
    throw std::invalid_argument("input must live in the target qubit space");
  }
  Mat v = completion_unitary();
  Vec embedded = Vec::Zero(source.ambient());
  Eigen::Index take = std::min<Eigen::Index>(phi.size(), embedded.size());
  embedded.head(take) = phi.head(take);
  return v * embedded;
}

Mat compression_map::completion_unitary() const {
  const size_t amb = source.ambient();
  Mat cand(amb, std_basis.cols() + amb);
  cand.leftCols(std_basis.cols()) = std_basis;
  cand.rightCols(amb) = Mat::Identity(amb, amb);
  subspace full = span_of(cand, 1e-9);
  if (full.dim() != amb) throw std::logic_error("unitary completion failed");
  return full.basis;
}

compression_map make_compression(const subspace& u) {
  if (u.dim() == 0) throw std::invalid_argument("cannot compress the zero subspace");
  compression_map cm;
  cm.source = u;
  cm.std_basis = standard_basis(u);
  size_t n = u.dim();
  int len = 0;
  while ((size_t(1) << len) < n) ++len;
  cm.target_len = len;
  return cm;
}

double trace_distance(const Mat& rho, const Mat& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw std::invalid_argument("dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(rho - sigma);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double operator_norm(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

size_t overlap_dimension_bound(const std::vector<Vec>& vectors) {
  auto holds = [&](size_t n) {
    if (n < 2) return true;
    double bound = 1.0 / double(n - 1);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        if (std::abs((vectors[i].adjoint() * vectors[j])(0)) >= bound) return false;
      }
    }
    return true;
  };
  for (size_t n = vectors.size(); n > 1; --n) {
    if (holds(n)) return n;
  }
  return vectors.empty() ? 0 : 1;
}

isometry_report similar_subspace_isometry(const subspace& v, const subspace& w, double eps) {
  if (v.ambient() != w.ambient()) throw std::invalid_argument("ambient dimension mismatch");
  if (v.dim() == 0) {
    return {Mat::Zero(v.ambient(), v.ambient()), 0.0, 0.0};
  }
  double cap = (1.0 / 36.0) * std::pow(2.5, 2.0 - 2.0 * double(v.dim()));
  if (eps > cap + 1e-15) {
    throw std::invalid_argument("eps exceeds the similarity precondition cap");
  }
  const size_t k = v.dim();
  Mat matched(v.ambient(), k);
  for (size_t i = 0; i < k; ++i) {
    Vec vi = v.basis.col(i);
    Vec proj = w.basis * (w.basis.adjoint() * vi);
    double nrm = proj.norm();
    if (nrm < 1e-300) throw std::runtime_error("no unit vector of w within eps");
    Vec wi = proj / nrm;
    if ((vi - wi).norm() > eps + 1e-12) {
      throw std::runtime_error("no unit vector of w within eps");
    }
    matched.col(i) = wi;
  }
  subspace wspan = span_of(matched);
  if (wspan.dim() != k) throw std::runtime_error("matched vectors lost rank");
  Mat map = wspan.basis * v.basis.adjoint();
  Mat diff = wspan.basis - v.basis;
  isometry_report rep;
  rep.map = map;
  rep.norm_actual = operator_norm(diff);
  rep.norm_bound = (8.0 / 3.0) * std::sqrt(eps) * std::pow(2.5, double(k));
  return rep;
}

composed_isometry compose_isometries(const std::vector<Mat>& ops, size_t dim_if_empty) {
  if (ops.empty()) {
    return {Mat::Identity(dim_if_empty, dim_if_empty), 0.0};
  }
  Mat prod = ops.front();
  double bound = operator_norm(ops.front() - Mat::Identity(ops.front().rows(), ops.front().cols()));
  for (size_t i = 1; i < ops.size(); ++i) {
    if (ops[i].cols() != prod.rows()) throw std::invalid_argument("isometry chain mismatch");
    prod = ops[i] * prod;
    bound += operator_norm(ops[i] - Mat::Identity(ops[i].rows(), ops[i].cols()));
  }
  return {prod, bound};
}

}  // namespace qtmlab
