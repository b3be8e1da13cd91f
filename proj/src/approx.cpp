#include "qtmlab/approx.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qtmlab {

namespace {

void check_toy_mode(int n) {
  if (n < 0 || (size_t(1) << n) > 2) {
    throw std::invalid_argument("covering-based algorithms support 2^n <= 2 only");
  }
}

double round_to_grid(double x, double grid) { return std::round(x / grid) * grid; }

// largest power of two not above x
double dyadic_below(double x) {
  if (x <= 0) throw std::invalid_argument("grid bound must be positive");
  return std::pow(2.0, std::floor(std::log2(x)));
}

double phase_distance(const Vec& x, const Vec& c) {
  double inner = std::abs((x.adjoint() * c)(0));
  double d2 = x.squaredNorm() + c.squaredNorm() - 2.0 * inner;
  return std::sqrt(std::max(0.0, d2));
}

}  // namespace

sphere_covering build_covering(int n, const rational& delta) {
  check_toy_mode(n);
  sphere_covering cov;
  cov.n = n;
  cov.delta = delta;
  const double d = delta.to_double();
  const double coord_grid = dyadic_below(d / 64.0);

  if (n == 0) {
    Vec c(1);
    c(0) = 1.0;
    cov.centers.push_back(c);
    return cov;
  }

  // Golden-spiral points on the Bloch sphere, lifted to C^2 and snapped to
  // the dyadic grid. The per-coordinate snap moves a center by at most
  // sqrt(4)*grid/2 <= delta/64, so points built for radius 0.9*delta still
  // cover at radius delta.
  size_t count = (size_t)std::ceil(2.0 / (d * d)) + 8;
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  for (size_t i = 0; i < count; ++i) {
    double z = 1.0 - (2.0 * i + 1.0) / double(count);
    double theta = std::acos(std::clamp(z, -1.0, 1.0));
    double phi = 2.0 * M_PI * double(i) / golden;
    Vec c(2);
    c(0) = cplx{std::cos(theta / 2.0), 0.0};
    c(1) = std::polar(std::sin(theta / 2.0), phi);
    for (int k = 0; k < 2; ++k) {
      c(k) = cplx{round_to_grid(c(k).real(), coord_grid), round_to_grid(c(k).imag(), coord_grid)};
    }
    cov.centers.push_back(c);
  }
  return cov;
}

double covering_defect(const sphere_covering& cov, int samples, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const size_t dim = size_t(1) << cov.n;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec x(dim);
    for (size_t i = 0; i < dim; ++i) x(i) = cplx{gauss(rng), gauss(rng)};
    x /= x.norm();
    double best = 1e300;
    for (const Vec& c : cov.centers) {
      best = std::min(best, phase_distance(x, c));
      if (best * best < 1e-12) break;
    }
    worst = std::max(worst, best);
  }
  return worst;
}

int ball_tester_B(const machine& m, const Vec& center, const rational& delta,
                  const rational& eps, int t, size_t net_cap) {
  int n = 0;
  while ((size_t(1) << n) < (size_t)center.size()) ++n;
  if ((size_t(1) << n) != (size_t)center.size()) {
    throw std::invalid_argument("center must live in a 2^n-dimensional space");
  }
  return ball_tester_B(halting_overlap_blocks(m, n, t), center, delta, eps, t, net_cap);
}

int ball_tester_B(const std::vector<Mat>& blocks, const Vec& center, const rational& delta,
                  const rational& eps, int t, size_t net_cap) {
  if ((size_t)t >= blocks.size()) throw std::invalid_argument("blocks too short for t");
  const double ep = eps.to_double();
  const double de = delta.to_double();
  const double accept = 0.625 * ep;
  if (accept >= 1.0) return 1;  // overlaps live in [0,1]; every point passes

  const int cdim = (int)center.size();
  const int real_dim = 2 * cdim;
  if (real_dim > 4) throw std::invalid_argument("ball tester supports 2^n <= 2 only");
  const double r = 3.0 * ep / 64.0;
  const double h = dyadic_below(2.0 * r / std::sqrt(double(real_dim)));
  const long k_max = (long)std::ceil((de + 2.0 * r) / h);
  const long span = 2 * k_max + 1;

  double raw = std::pow(double(span), double(real_dim));
  if (raw > double(net_cap)) {
    throw std::length_error("ball-tester net exceeds the configured cap");
  }

  const double ball2 = (de + r + 1e-12) * (de + r + 1e-12);
  const double shell_limit = r + 1e-12;

  std::vector<double> off(span), off2(span);
  for (long i = 0; i < span; ++i) {
    off[i] = h * double(i - k_max);
    off2[i] = off[i] * off[i];
  }
  double creal[4] = {0, 0, 0, 0};
  for (int i = 0; i < cdim; ++i) {
    creal[2 * i] = center(i).real();
    creal[2 * i + 1] = center(i).imag();
  }
  const double cnorm2 = center.squaredNorm();

  std::vector<long> k(real_dim, 0);
  std::vector<double> p(real_dim);
  while (true) {
    double dist2 = 0.0, cross = 0.0;
    for (int i = 0; i < real_dim; ++i) {
      dist2 += off2[k[i]];
      cross += creal[i] * off[k[i]];
    }
    if (dist2 <= ball2) {
      double pnorm2 = cnorm2 + 2.0 * cross + dist2;
      double pnorm = std::sqrt(pnorm2);
      if (std::abs(pnorm - 1.0) <= shell_limit) {
        for (int i = 0; i < real_dim; ++i) p[i] = creal[i] + off[k[i]];
        for (int tp = 0; tp <= t; ++tp) {
          const Mat& a = blocks[tp];
          double acc = 0.0;
          for (Eigen::Index row = 0; row < a.rows(); ++row) {
            cplx s{};
            for (int c = 0; c < cdim; ++c) {
              s += a(row, c) * cplx{p[2 * c], p[2 * c + 1]};
            }
            acc += std::norm(s);
          }
          acc /= pnorm2;
          double target = (tp == t) ? 1.0 : 0.0;
          if (std::abs(acc - target) > accept) return 0;
        }
      }
    }
    int i = 0;
    while (i < real_dim && k[i] == span - 1) k[i++] = 0;
    if (i == real_dim) break;
    ++k[i];
  }
  return 1;
}

namespace {

double subspace_distance(const subspace& u, const Vec& p) {
  if (u.dim() == 0) return p.norm();
  return (p - u.basis * (u.basis.adjoint() * p)).norm();
}

bool verify_candidate(const subspace& u, const std::vector<Vec>& positives,
                      const std::vector<Vec>& negatives, double Delta, double delta_tilde) {
  for (const Vec& p : positives) {
    if (!(subspace_distance(u, p) < Delta)) return false;
  }
  for (const Vec& q : negatives) {
    if (!(subspace_distance(u, q) > delta_tilde)) return false;
  }
  return true;
}

}  // namespace

std::pair<int, subspace> interpolate_I(const std::vector<Vec>& positives,
                                       const std::vector<Vec>& negatives, size_t ambient,
                                       int d, double Delta, double delta, double Delta_tilde,
                                       double delta_tilde) {
  if (!(Delta > delta) || !(Delta_tilde > delta_tilde)) {
    throw std::invalid_argument("interpolation needs Delta > delta and Delta_tilde > delta_tilde");
  }
  if (d < 1 || (size_t)d > ambient) {
    throw std::invalid_argument("interpolation dimension out of range");
  }

  Mat gram = Mat::Zero(ambient, ambient);
  for (const Vec& p : positives) gram += p * p.adjoint();
  subspace candidate;
  if (!positives.empty()) {
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    candidate = subspace(es.eigenvectors().rightCols(d));
  } else if (!negatives.empty()) {
    Mat neg = Mat::Zero(ambient, ambient);
    for (const Vec& q : negatives) neg += q * q.adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> es(neg);
    candidate = subspace(es.eigenvectors().leftCols(d));  // least-aligned directions
  } else {
    candidate = subspace(Mat::Identity(ambient, ambient).leftCols(d));
  }
  if (verify_candidate(candidate, positives, negatives, Delta, delta_tilde)) {
    return {1, candidate};
  }

  // grid fallback over 1-dim subspaces of C^2
  if (ambient == 2 && d == 1) {
    const size_t theta_steps = 256, phi_steps = 1024;
    if ((positives.size() + negatives.size()) * theta_steps * phi_steps <= 20000000) {
      for (size_t a = 0; a <= theta_steps; ++a) {
        double theta = (M_PI / 2.0) * double(a) / double(theta_steps);
        for (size_t b = 0; b < phi_steps; ++b) {
          double phi = 2.0 * M_PI * double(b) / double(phi_steps);
          Mat u(2, 1);
          u(0, 0) = std::cos(theta);
          u(1, 0) = std::polar(std::sin(theta), phi);
          subspace s(u);
          if (verify_candidate(s, positives, negatives, Delta, delta_tilde)) {
            return {1, s};
          }
        }
      }
    }
  }
  return {0, subspace::zero(ambient)};
}

namespace {

struct approx_context {
  sphere_covering covering;
  std::vector<Mat> blocks;
};

std::pair<subspace, approx_meta> approx_at(const approx_context& ctx, int n, int t,
                                           const rational& delta) {
  const size_t ambient = size_t(1) << n;
  approx_meta meta;
  meta.delta = delta;
  rational eps = rational(18) * delta;
  const rational eps_fixed = eps;

  std::vector<char> pass18(ctx.covering.centers.size(), 0);
  bool any18 = false;
  for (size_t k = 0; k < ctx.covering.centers.size(); ++k) {
    pass18[k] = (char)ball_tester_B(ctx.blocks, ctx.covering.centers[k], delta, eps_fixed, t);
    any18 |= (pass18[k] != 0);
  }
  if (!any18) {
    meta.epsilon = eps;
    return {subspace::zero(ambient), meta};
  }

  std::vector<Vec> negatives;
  for (size_t k = 0; k < ctx.covering.centers.size(); ++k) {
    if (!pass18[k]) negatives.push_back(ctx.covering.centers[k]);
  }

  const double dd = delta.to_double();
  for (int halvings = 0; halvings <= 60; ++halvings) {
    std::vector<Vec> positives;
    for (size_t k = 0; k < ctx.covering.centers.size(); ++k) {
      if (!pass18[k]) continue;  // a ball failing the loose test fails the tight one
      if (eps == eps_fixed ||
          ball_tester_B(ctx.blocks, ctx.covering.centers[k], delta, eps, t)) {
        positives.push_back(ctx.covering.centers[k]);
      }
    }
    if (positives.empty()) {
      meta.epsilon = eps;
      return {subspace::zero(ambient), meta};
    }
    for (int d = (int)ambient; d >= 1; --d) {
      auto [flag, space] = interpolate_I(positives, negatives, ambient, d, 2.0 * dd, dd,
                                         1.75 * dd, 1.5 * dd);
      if (flag) {
        meta.epsilon = eps;
        return {space, meta};
      }
    }
    eps = eps / rational(2);
  }
  throw std::runtime_error("approximate halting search failed to settle");
}

}  // namespace

std::pair<subspace, approx_meta> approx_halting_space(const machine& m, int n, int t,
                                                      const rational& delta) {
  check_toy_mode(n);
  approx_context ctx{build_covering(n, delta), halting_overlap_blocks(m, n, t)};
  return approx_at(ctx, n, t, delta);
}

halting_spectrum approx_spectrum(const machine& m, int n, int t_max, const rational& delta) {
  check_toy_mode(n);
  approx_context ctx{build_covering(n, delta), halting_overlap_blocks(m, n, t_max)};
  halting_spectrum spec;
  spec.machine_name = m.name;
  spec.n = n;
  spec.t_max = t_max;
  spec.approximate = true;
  spec.delta = delta;
  for (int t = 1; t <= t_max; ++t) {
    auto [space, meta] = approx_at(ctx, n, t, delta);
    if (space.dim() > 0) {
      spectrum_entry e;
      e.t = t;
      e.space = std::move(space);
      e.epsilon = meta.epsilon;
      spec.entries.push_back(std::move(e));
    }
  }
  return spec;
}

}  // namespace qtmlab
