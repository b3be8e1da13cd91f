#include "qtmlab/qubitstring.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

namespace qtmlab {

using nlohmann::ordered_json;

size_t shortlex_index(const std::string& bits) {
  size_t value = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit string must be over 0/1");
    value = value * 2 + (c - '0');
  }
  return (size_t(1) << bits.size()) - 1 + value;
}

std::string shortlex_string(size_t index) {
  int len = 0;
  size_t sector_start = 0;
  while (index - sector_start >= (size_t(1) << len)) {
    sector_start += size_t(1) << len;
    ++len;
  }
  size_t value = index - sector_start;
  std::string s(len, '0');
  for (int i = len - 1; i >= 0; --i) {
    if (value & 1) s[i] = '1';
    value >>= 1;
  }
  return s;
}

qubit_string::qubit_string(int k) : max_len(k) {
  if (k < 0 || k > kMaxQubitStringLen) {
    throw std::invalid_argument("qubit string length out of supported range");
  }
  rho = Mat::Zero(dim(), dim());
}

qubit_string qubit_string::pure(int max_len, const Vec& psi) {
  qubit_string q(max_len);
  if ((size_t)psi.size() != q.dim()) throw std::invalid_argument("vector dimension mismatch");
  q.rho = psi * psi.adjoint();
  return q;
}

qubit_string qubit_string::basis_state(const std::string& bits) {
  qubit_string q((int)bits.size());
  size_t i = shortlex_index(bits);
  q.rho(i, i) = 1.0;
  return q;
}

qubit_string qubit_string::fixed_length(int n, const Vec& psi) {
  if ((size_t)psi.size() != (size_t(1) << n)) {
    throw std::invalid_argument("fixed-length vector must have 2^n entries");
  }
  qubit_string q(n);
  Vec full = Vec::Zero(q.dim());
  size_t sector = (size_t(1) << n) - 1;
  full.segment(sector, size_t(1) << n) = psi;
  q.rho = full * full.adjoint();
  return q;
}

int qubit_string::base_length(double tol) const {
  for (int len = max_len; len >= 0; --len) {
    size_t start = (size_t(1) << len) - 1;
    for (size_t v = 0; v < (size_t(1) << len); ++v) {
      if (rho(start + v, start + v).real() > tol) return len;
    }
  }
  return 0;
}

qubit_string qubit_string::widened(int new_max_len) const {
  if (new_max_len < max_len) throw std::invalid_argument("cannot shrink a qubit string");
  qubit_string q(new_max_len);
  q.rho.topLeftCorner(dim(), dim()) = rho;
  return q;
}

bool qubit_string::is_pure(double tol) const {
  cplx tr2 = (rho * rho).trace();
  return std::abs(tr2.real() - 1.0) < tol && trace() > 1.0 - tol;
}

Vec qubit_string::principal_vector() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  Eigen::Index best;
  es.eigenvalues().maxCoeff(&best);
  Vec v = es.eigenvectors().col(best);
  // fix the global phase: first nonzero entry made real positive
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      break;
    }
  }
  return v;
}

std::vector<std::pair<double, Vec>> qubit_string::components(double tol) const {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  std::vector<std::pair<double, Vec>> out;
  for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
    double w = es.eigenvalues()(i);
    if (w > tol) out.emplace_back(w, es.eigenvectors().col(i));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.first > y.first; });
  return out;
}

double qubit_string::fidelity_with_pure(const Vec& psi) const {
  if ((size_t)psi.size() != dim()) throw std::invalid_argument("vector dimension mismatch");
  return (psi.adjoint() * rho * psi)(0).real();
}

namespace {

ordered_json cplx_json(cplx z) { return ordered_json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const ordered_json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

std::string qubit_string::to_json() const {
  ordered_json j;
  j["max_len"] = max_len;
  ordered_json basis = ordered_json::array();
  for (size_t i = 0; i < dim(); ++i) basis.push_back(shortlex_string(i));
  j["basis"] = basis;
  if (is_pure()) {
    Vec v = principal_vector();
    ordered_json amps = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) amps.push_back(cplx_json(v(i)));
    j["pure"] = true;
    j["amplitudes"] = amps;
  } else {
    ordered_json rows = ordered_json::array();
    for (size_t r = 0; r < dim(); ++r) {
      ordered_json row = ordered_json::array();
      for (size_t c = 0; c < dim(); ++c) row.push_back(cplx_json(rho(r, c)));
      rows.push_back(row);
    }
    j["pure"] = false;
    j["matrix"] = rows;
  }
  return j.dump(2);
}

qubit_string qubit_string::from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  qubit_string q(j.at("max_len").get<int>());
  if (j.value("pure", false)) {
    const auto& amps = j.at("amplitudes");
    if (amps.size() != q.dim()) throw std::invalid_argument("amplitude count mismatch");
    Vec v(q.dim());
    for (size_t i = 0; i < q.dim(); ++i) v(i) = cplx_from_json(amps.at(i));
    q.rho = v * v.adjoint();
  } else {
    const auto& rows = j.at("matrix");
    if (rows.size() != q.dim()) throw std::invalid_argument("matrix dimension mismatch");
    for (size_t r = 0; r < q.dim(); ++r) {
      for (size_t c = 0; c < q.dim(); ++c) q.rho(r, c) = cplx_from_json(rows.at(r).at(c));
    }
  }
  return q;
}

double trace_distance(const qubit_string& a, const qubit_string& b) {
  if (a.max_len != b.max_len) throw std::invalid_argument("trace distance needs equal max_len");
  Mat diff = a.rho - b.rho;
  Eigen::SelfAdjointEigenSolver<Mat> es(diff);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace qtmlab
