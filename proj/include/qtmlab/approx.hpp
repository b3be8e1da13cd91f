#pragma once

#include "qtmlab/halting.hpp"

namespace qtmlab {

// Covering of the unit sphere of H_n up to global phase, with rational
// (dyadic) coordinates and norms within delta/64 of 1. Phase suffices
// because every predicate evaluated on a ball (halting overlaps, distances
// to subspaces) is invariant under a global phase of the center.
struct sphere_covering {
  int n = 0;
  rational delta;
  std::vector<Vec> centers;
};

// Toy-mode guard: coverings are built only for 2^n <= 2.
sphere_covering build_covering(int n, const rational& delta);

// Worst distance (optimal phase) from sampled unit vectors to the covering;
// a sound delta-covering keeps this below delta.
double covering_defect(const sphere_covering& cov, int samples, uint64_t seed);

// Ball tester: 1 when every point of a (3/64)eps-resolution net of
// U_delta(center) intersected with the unit shell has halting overlap within
// (5/8)eps of delta_{t',t} for all t' <= t; 0 on the first violation.
// Returns 1 for balls containing no unit vectors.
int ball_tester_B(const machine& m, const Vec& center, const rational& delta,
                  const rational& eps, int t, size_t net_cap = 30000000);
// Same test against precomputed overlap blocks.
int ball_tester_B(const std::vector<Mat>& blocks, const Vec& center, const rational& delta,
                  const rational& eps, int t, size_t net_cap = 30000000);

// Interpolating-subspace search: flag 1 with a dim-d space closer than Delta
// to every positive and farther than delta_tilde from every negative, when
// one is found. Principal-subspace fit plus verification; a coarse
// grid fallback covers 1-dim subspaces of C^2 when the fit fails.
std::pair<int, subspace> interpolate_I(const std::vector<Vec>& positives,
                                       const std::vector<Vec>& negatives, size_t ambient,
                                       int d, double Delta, double delta, double Delta_tilde,
                                       double delta_tilde);

struct approx_meta {
  rational delta;
  rational epsilon;  // starts at 18*delta, halved until the search settles
};

// Approximate halting space at time t: covering centers are ball-tested at
// the fixed 18*delta threshold (never-passing centers are the negatives) and
// at the shrinking eps threshold (the positives); an interpolating subspace
// over these, searched at descending dimension, is the result. No positives
// means the zero space.
std::pair<subspace, approx_meta> approx_halting_space(const machine& m, int n, int t,
                                                      const rational& delta);

halting_spectrum approx_spectrum(const machine& m, int n, int t_max, const rational& delta);

}  // namespace qtmlab
