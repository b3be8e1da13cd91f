#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "qtmlab/subspace.hpp"

using namespace qtmlab;
using namespace qtmlab::testing;

namespace {

Mat rot(double theta) {
  Mat r(2, 2);
  r(0, 0) = std::cos(theta);
  r(0, 1) = -std::sin(theta);
  r(1, 0) = std::sin(theta);
  r(1, 1) = std::cos(theta);
  return r;
}

}  // namespace

TEST_CASE("span, kernel, and intersection behave on hand-sized inputs") {
  Mat a(1, 2);
  a.setZero();
  a(0, 0) = 1.0;
  subspace ker = kernel_of(a);
  REQUIRE(ker.dim() == 1);
  CHECK(std::abs(std::abs(ker.basis(1, 0)) - 1.0) <= 1e-12);

  Mat left(3, 2), right(3, 2);
  left.setZero();
  right.setZero();
  left(0, 0) = 1.0;
  left(1, 1) = 1.0;
  right(1, 0) = 1.0;
  right(2, 1) = 1.0;
  subspace mid = intersect(subspace(left), subspace(right));
  REQUIRE(mid.dim() == 1);
  CHECK(std::abs(std::abs(mid.basis(1, 0)) - 1.0) <= 1e-10);
  CHECK(mid.orthonormality_defect() <= 1e-12);
}

TEST_CASE("standard bases are canonical for their subspace") {
  Mat low(4, 2);
  low.setZero();
  low(0, 0) = 1.0;
  low(1, 1) = 1.0;
  CHECK((standard_basis(subspace(low)) - low).norm() <= 1e-12);

  Vec diag(2);
  diag << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Mat sb1 = standard_basis(span_of(Mat(diag)));
  REQUIRE(sb1.cols() == 1);
  CHECK((sb1.col(0) - diag).norm() <= 1e-10);

  Mat high(4, 2);
  high.setZero();
  high(2, 0) = 1.0;
  high(3, 1) = 1.0;
  CHECK((standard_basis(subspace(high)) - high).norm() <= 1e-12);
}

TEST_CASE("compression relabels a subspace into whole qubits") {
  Mat high(4, 2);
  high.setZero();
  high(2, 0) = 1.0;
  high(3, 1) = 1.0;
  compression_map cm = make_compression(subspace(high));
  CHECK(cm.target_len == 1);
  Vec c = cm.compress(basis_vec(4, 2));
  REQUIRE(c.size() == 2);
  CHECK(std::abs(c(0) - 1.0) <= 1e-12);
  CHECK((cm.decompress(basis_vec(2, 1)) - basis_vec(4, 3)).norm() <= 1e-10);
  for (int i = 0; i < 2; ++i) {
    CHECK((cm.decompress(basis_vec(2, i)) - Vec(cm.std_basis.col(i))).norm() <= 1e-10);
  }
}

TEST_CASE("one-dimensional spaces compress to zero qubits") {
  compression_map cm = make_compression(span_of(Mat(basis_vec(4, 2))));
  CHECK(cm.target_len == 0);
  Vec c = cm.compress(basis_vec(4, 2));
  REQUIRE(c.size() == 1);
  CHECK(std::abs(std::abs(c(0)) - 1.0) <= 1e-12);
  CHECK_THROWS_AS(make_compression(subspace::zero(4)), std::invalid_argument);
}

TEST_CASE("compressing the full space is a relabeling") {
  compression_map cm = make_compression(subspace::full(4));
  CHECK(cm.target_len == 2);
  for (int i = 0; i < 4; ++i) {
    CHECK((cm.compress(basis_vec(4, i)) - basis_vec(4, i)).norm() <= 1e-12);
  }
}

TEST_CASE("decompress undoes compress on the source subspace") {
  std::mt19937_64 rng(17);
  Mat cols(8, 3);
  for (int c = 0; c < 3; ++c) cols.col(c) = random_unit(rng, 8);
  subspace u = span_of(cols);
  REQUIRE(u.dim() == 3);
  compression_map cm = make_compression(u);
  CHECK(cm.target_len == 2);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    Vec psi = u.basis * random_unit(rng, 3);
    worst = std::max(worst, (cm.decompress(cm.compress(psi)) - psi).norm());
  }
  CHECK(worst <= 1e-9);

  Vec outside = basis_vec(8, 0) - Vec(u.basis * (u.basis.adjoint() * basis_vec(8, 0)));
  outside /= outside.norm();
  CHECK_THROWS_AS(cm.compress(outside), std::invalid_argument);
}

TEST_CASE("compress preserves inner products") {
  std::mt19937_64 rng(23);
  Mat cols(8, 3);
  for (int c = 0; c < 3; ++c) cols.col(c) = random_unit(rng, 8);
  subspace u = span_of(cols);
  compression_map cm = make_compression(u);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    Vec a = u.basis * random_unit(rng, 3);
    Vec b = u.basis * random_unit(rng, 3);
    worst = std::max(worst, std::abs(a.dot(b) - cm.compress(a).dot(cm.compress(b))));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("trace distance matches closed forms") {
  Mat r0 = basis_vec(2, 0) * basis_vec(2, 0).adjoint();
  Mat r1 = basis_vec(2, 1) * basis_vec(2, 1).adjoint();
  CHECK(trace_distance(r0, r0) == doctest::Approx(0.0));
  CHECK(trace_distance(r0, r1) == doctest::Approx(1.0));
  Vec plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Mat rp = plus * plus.adjoint();
  CHECK(trace_distance(r0, rp) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("norm inequalities hold with slack at most 1e-10") {
  std::mt19937_64 rng(29);
  double slack_td = 0.0, slack_id = 0.0, slack_op = 0.0, slack_chain = 0.0;
  for (int s = 0; s < 1000; ++s) {
    Vec a = random_unit(rng, 6);
    Vec b = random_unit(rng, 6);
    Mat ra = a * a.adjoint();
    Mat rb = b * b.adjoint();
    double td = trace_distance(ra, rb);
    slack_td = std::max(slack_td, td - (a - b).norm());
    double ov = std::abs(a.dot(b));
    slack_id = std::max(slack_id, std::abs(td * td + ov * ov - 1.0));
    // operator norm below the half trace norm: for a traceless Hermitian
    // difference the top eigenvalue is at most the positive eigenvalue mass
    Mat diff = ra - rb;
    slack_op = std::max(slack_op, operator_norm(diff) - td);
    Eigen::SelfAdjointEigenSolver<Mat> es(diff);
    double lam_max = es.eigenvalues().maxCoeff();
    double pos_sum = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      pos_sum += std::max(0.0, es.eigenvalues()(i));
    }
    slack_chain = std::max(slack_chain, std::abs(pos_sum - td));
    slack_chain = std::max(slack_chain, lam_max - pos_sum);
  }
  CHECK(slack_td <= 1e-10);
  CHECK(slack_id <= 1e-10);
  CHECK(slack_op <= 1e-10);
  CHECK(slack_chain <= 1e-10);
}

TEST_CASE("pairwise small overlaps certify a dimension lower bound") {
  CHECK(overlap_dimension_bound({}) == 0);
  CHECK(overlap_dimension_bound({basis_vec(4, 0)}) == 1);
  CHECK(overlap_dimension_bound({basis_vec(4, 0), basis_vec(4, 1)}) == 2);
  CHECK(overlap_dimension_bound({basis_vec(4, 0), basis_vec(4, 0)}) == 1);

  std::vector<Vec> three = {basis_vec(3, 0), basis_vec(3, 1), basis_vec(3, 2)};
  CHECK(overlap_dimension_bound(three) == 3);

  // a qubit cannot hold three directions with all overlaps under one half
  Vec q0(2), qp(2), qm(2);
  q0 << 1.0, 0.0;
  qp << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  qm << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  CHECK(overlap_dimension_bound({q0, qp, qm}) == 2);
}

TEST_CASE("similar subspaces admit near-identity isometries") {
  subspace v{Mat(basis_vec(4, 0))};
  isometry_report same = similar_subspace_isometry(v, v, 0.01);
  CHECK(same.norm_actual <= 1e-10);
  CHECK(same.norm_actual <= same.norm_bound);

  double gamma = 0.01;
  Vec tilted(4);
  tilted << 1.0, gamma, 0.0, 0.0;
  tilted /= tilted.norm();
  subspace w = span_of(Mat(tilted));
  isometry_report rep = similar_subspace_isometry(v, w, 0.02);
  CHECK(rep.norm_bound == doctest::Approx((8.0 / 3.0) * std::sqrt(0.02) * 2.5));
  CHECK(rep.norm_actual <= rep.norm_bound);
  Mat on_v = rep.map * v.basis;
  CHECK((Mat(on_v.adjoint() * on_v) - Mat::Identity(1, 1)).norm() <= 1e-10);
  CHECK(w.distance(Vec(on_v.col(0))) <= 1e-8);

  CHECK_THROWS_AS(similar_subspace_isometry(v, w, 0.03), std::invalid_argument);
}

TEST_CASE("composed isometries obey the telescoping bound") {
  composed_isometry none = compose_isometries({}, 3);
  CHECK((none.product - Mat::Identity(3, 3)).norm() <= 1e-15);
  CHECK(none.telescoping_bound == doctest::Approx(0.0));

  Mat a = rot(0.05);
  Mat b = rot(0.03);
  composed_isometry two = compose_isometries({a, b});
  CHECK((two.product - rot(0.08)).norm() <= 1e-12);
  double parts = operator_norm(a - Mat::Identity(2, 2)) + operator_norm(b - Mat::Identity(2, 2));
  CHECK(two.telescoping_bound == doctest::Approx(parts));
  CHECK(operator_norm(two.product - Mat::Identity(2, 2)) <= two.telescoping_bound + 1e-12);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> angle(-0.1, 0.1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Mat> chain;
    for (int i = 0; i < 5; ++i) chain.push_back(rot(angle(rng)));
    composed_isometry c = compose_isometries(chain);
    CHECK(operator_norm(c.product - Mat::Identity(2, 2)) <= c.telescoping_bound + 1e-12);
  }
}
