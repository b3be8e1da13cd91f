#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "qtmlab/approx.hpp"
#include "qtmlab/coding.hpp"
#include "qtmlab/selftest.hpp"
#include "qtmlab/universal.hpp"

using namespace qtmlab;
using namespace qtmlab::testing;

namespace {

constexpr double kIsometryTol = 1e-10;
constexpr double kOrthoTol = 1e-8;
constexpr double kClosureTol = 1e-8;
constexpr double kRecoveryTol = 1e-9;
constexpr double kSlackTol = 1e-10;
constexpr double kPipelineDelta = 0.01;

struct named_spectrum {
  std::string name;
  int n = 0;
  halting_spectrum spec;
};

std::vector<named_spectrum> g_spectra;

const std::vector<named_spectrum>& all_exact_spectra() {
  if (g_spectra.empty()) {
    for (const auto& name : good_fixtures()) {
      machine m = load_fixture(name);
      for (int n = 0; n <= 3; ++n)
        g_spectra.push_back({name, n, exact_spectrum(m, n, 20)});
    }
  }
  return g_spectra;
}

bool is_prefix(const std::string& a, const std::string& b) {
  return a.size() <= b.size() && b.compare(0, a.size(), a) == 0;
}

struct criterion_runner {
  int failures = 0;

  void run(int k, const std::string& what, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    auto start = std::chrono::steady_clock::now();
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << (ok ? "PASS" : "FAIL") << " criterion " << k << ": " << what;
    line << " (" << detail << (detail.empty() ? "" : ", ") << std::fixed
         << std::setprecision(1) << secs << " s)";
    std::cout << line.str() << "\n" << std::flush;
    if (!ok) ++failures;
  }
};

bool criterion_isometry(std::string& detail) {
  auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  size_t checked = 0;
  for (const auto& name : good_fixtures()) {
    machine m = load_fixture(name);
    config_space space = build_space(m, 2, 2);
    step_operator op = build_step_operator(space);
    worst = std::max(worst, op.isometry_defect());
    if (op.isometry_violations_exact() != 0) return false;
    ++checked;
  }
  if (checked < 4 || worst > kIsometryTol) return false;

  machine bad = load_fixture("invalid/bad-row-norm");
  step_operator bop = build_step_operator(build_space(bad, 1, 1));
  bool mutant_fails = bop.isometry_defect() > kIsometryTol && bop.isometry_violations_exact() > 0;
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ostringstream os;
  os << checked << " machines, max defect " << std::scientific << std::setprecision(1) << worst;
  detail = os.str();
  return mutant_fails && secs < 10.0;
}

bool criterion_orthogonality(std::string& detail) {
  auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& ns : all_exact_spectra()) {
    const auto& es = ns.spec.entries;
    for (size_t i = 0; i < es.size(); ++i)
      for (size_t j = i + 1; j < es.size(); ++j) {
        Mat overlaps = es[i].space.basis.adjoint() * es[j].space.basis;
        worst = std::max(worst, overlaps.cwiseAbs().maxCoeff());
      }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream os;
  os << "max overlap " << std::scientific << std::setprecision(1) << worst;
  detail = os.str();
  return worst <= kOrthoTol && secs < 60.0;
}

bool criterion_closure(std::string& detail) {
  std::mt19937_64 rng(301);
  size_t checked = 0;
  for (const auto& ns : all_exact_spectra()) {
    machine m = load_fixture(ns.name);
    for (const auto& e : ns.spec.entries) {
      for (int trial = 0; trial < 8; ++trial) {
        Vec v = e.space.basis * random_unit(rng, (Eigen::Index)e.space.dim());
        v /= v.norm();
        if (!is_eps_t_halting(m, v, ns.n, kClosureTol, e.t)) return false;
        ++checked;
      }
    }
  }
  std::ostringstream os;
  os << checked << " superpositions";
  detail = os.str();
  return checked >= 200;
}

bool criterion_dimension_bound(std::string& detail) {
  for (const auto& ns : all_exact_spectra()) {
    if (!check_spectrum_bound(ns.spec)) return false;
    if (ns.spec.total_dim() > (size_t(1) << ns.n)) return false;
  }

  rational delta(1, 324);
  halting_spectrum halts = approx_spectrum(load_fixture("move-halt"), 1, 2, delta);
  halting_spectrum never = approx_spectrum(load_fixture("never-halt"), 1, 1, delta);
  if (!halts.approximate || !check_spectrum_bound(halts) || halts.total_dim() != 2) return false;
  if (!check_spectrum_bound(never) || never.total_dim() != 0) return false;

  std::ostringstream os;
  os << all_exact_spectra().size() << " exact spectra, approx at delta=" << delta.str();
  detail = os.str();
  return true;
}

bool criterion_kraft(std::string& detail) {
  size_t checked = 0;
  for (const auto& ns : all_exact_spectra()) {
    std::vector<size_t> dims;
    for (const auto& e : ns.spec.entries) dims.push_back(e.space.dim());
    if (dims.empty()) continue;
    kraft_report rep = kraft_holds(code_lengths_from_dims(ns.n, dims));
    if (!rep.holds) return false;
    ++checked;
  }
  std::ostringstream os;
  os << checked << " spectra, exact rational slack";
  detail = os.str();
  return checked > 0;
}

bool criterion_blind_coding(std::string& detail) {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> pick(1, 12);
  for (int seq = 0; seq < 1000; ++seq) {
    std::vector<int> lengths;
    int budget = 4096;
    while (lengths.size() < 64) {
      int l = pick(rng);
      int cost = 4096 >> l;
      if (cost > budget) break;
      lengths.push_back(l);
      budget -= cost;
    }
    if (lengths.empty()) lengths.push_back(1);

    prefix_code code = blind_prefix_code(lengths);
    if (code.words.size() != lengths.size()) return false;
    for (size_t i = 0; i < lengths.size(); ++i)
      if (code.words[i].size() != (size_t)lengths[i]) return false;
    for (size_t i = 0; i < code.words.size(); ++i)
      for (size_t j = i + 1; j < code.words.size(); ++j)
        if (is_prefix(code.words[i], code.words[j]) || is_prefix(code.words[j], code.words[i]))
          return false;

    size_t half = lengths.size() / 2;
    if (half > 0) {
      prefix_code early = blind_prefix_code({lengths.begin(), lengths.begin() + half});
      for (size_t i = 0; i < half; ++i)
        if (early.words[i] != code.words[i]) return false;
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  detail = "1000 Kraft-feasible sequences";
  return secs < 10.0;
}

bool criterion_compression_identity(std::string& detail) {
  std::mt19937_64 rng(707);
  double worst = 0.0;
  size_t spaces = 0;
  for (const auto& ns : all_exact_spectra()) {
    for (const auto& e : ns.spec.entries) {
      compression_map cm = make_compression(e.space);
      for (int trial = 0; trial < 100; ++trial) {
        Vec v = e.space.basis * random_unit(rng, (Eigen::Index)e.space.dim());
        Vec w = cm.decompress(cm.compress(v));
        worst = std::max(worst, (w - v).norm());
      }
      ++spaces;
    }
  }
  std::ostringstream os;
  os << spaces << " spaces, max error " << std::scientific << std::setprecision(1) << worst;
  detail = os.str();
  return worst <= kRecoveryTol;
}

bool criterion_inequalities(std::string& detail) {
  std::mt19937_64 rng(808);
  double worst_slack = 0.0;

  for (int trial = 0; trial < 1000; ++trial) {
    Vec a = random_unit(rng, 6);
    Vec b = random_unit(rng, 6);
    double td = trace_distance(Mat(a * a.adjoint()), Mat(b * b.adjoint()));
    worst_slack = std::max(worst_slack, td - (a - b).norm());
    double relation = td * td + std::norm(a.dot(b)) - 1.0;
    worst_slack = std::max(worst_slack, std::abs(relation));
  }
  if (worst_slack > kSlackTol) return false;

  for (const auto& name : good_fixtures()) {
    machine m = load_fixture(name);
    for (int pair = 0; pair < 3; ++pair) {
      Vec u = random_unit(rng, 4);
      Vec v = random_unit(rng, 4);
      double td = trace_distance(Mat(u * u.adjoint()), Mat(v * v.adjoint()));
      std::vector<double> tu = overlap_trajectory(m, u, 2, 10);
      std::vector<double> tv = overlap_trajectory(m, v, 2, 10);
      for (size_t t = 0; t < tu.size(); ++t)
        worst_slack = std::max(worst_slack, std::abs(tu[t] - tv[t]) - td);

      double s = 0.8 + 0.1 * pair;
      std::vector<double> ts = overlap_trajectory(m, Vec(s * u), 2, 10);
      for (size_t t = 0; t < tu.size(); ++t)
        worst_slack = std::max(worst_slack, std::abs(ts[t] - tu[t]) - std::abs(1.0 - s * s));
    }
  }
  if (worst_slack > kSlackTol) return false;

  std::uniform_real_distribution<double> angle(-0.1, 0.1);
  for (int chain = 0; chain < 50; ++chain) {
    std::vector<Mat> ops;
    double manual = 0.0;
    for (int k = 0; k < 5; ++k) {
      double th = angle(rng);
      Mat u(2, 2);
      u << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
      ops.push_back(u);
      manual += operator_norm(Mat(u - Mat::Identity(2, 2)));
    }
    composed_isometry comp = compose_isometries(ops);
    worst_slack = std::max(worst_slack, std::abs(comp.telescoping_bound - manual));
    worst_slack = std::max(
        worst_slack,
        operator_norm(Mat(comp.product - Mat::Identity(2, 2))) - comp.telescoping_bound);
  }
  if (worst_slack > kSlackTol) return false;

  std::uniform_real_distribution<double> gamma(0.001, 0.015);
  for (int trial = 0; trial < 20; ++trial) {
    double g = gamma(rng);
    Vec u = random_unit(rng, 3);
    Vec p = random_unit(rng, 3);
    p = (p - u.dot(p) * u).normalized();
    Vec w = std::cos(g) * u + std::sin(g) * p;
    double eps = (u - w).norm() * 1.5;
    isometry_report rep =
        similar_subspace_isometry(subspace(Mat(u)), subspace(Mat(w)), eps);
    worst_slack = std::max(worst_slack, rep.norm_actual - rep.norm_bound);
    worst_slack = std::max(
        worst_slack, std::abs(rep.norm_bound - (8.0 / 3.0) * std::sqrt(eps) * 2.5));
  }
  {
    double g = 0.003;
    Mat vb = Mat::Zero(4, 2), wb = Mat::Zero(4, 2);
    vb(0, 0) = 1.0;
    vb(1, 1) = 1.0;
    wb(0, 0) = std::cos(g);
    wb(2, 0) = std::sin(g);
    wb(1, 1) = std::cos(g);
    wb(3, 1) = std::sin(g);
    isometry_report rep = similar_subspace_isometry(subspace(vb), subspace(wb), 0.004);
    worst_slack = std::max(worst_slack, rep.norm_actual - rep.norm_bound);
    worst_slack = std::max(
        worst_slack, std::abs(rep.norm_bound - (8.0 / 3.0) * std::sqrt(0.004) * 6.25));
  }

  std::ostringstream os;
  os << "worst slack " << std::scientific << std::setprecision(1) << worst_slack;
  detail = os.str();
  return worst_slack <= kSlackTol;
}

bool criterion_universality(std::string& detail) {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(909);
  double worst = 0.0;
  size_t runs = 0;
  const std::vector<std::string> halting = {"move-halt",      "hadamard-halt",
                                            "copy-halt",      "delay-by-first-bit",
                                            "move-to-output", "hadamard-to-output"};
  for (const auto& name : halting) {
    machine m = load_fixture(name);
    size_t header_bits = 0;
    bool header_seen = false;
    for (int n = 1; n <= 3; ++n) {
      int horizon = n + 2;
      for (int trial = 0; trial < 50; ++trial) {
        Eigen::Index dim = Eigen::Index(1) << n;
        Vec psi;
        if (name == "delay-by-first-bit") {
          Eigen::Index half = dim / 2;
          psi = Vec::Zero(dim);
          psi.segment(trial % 2 == 0 ? 0 : half, half) = random_unit(rng, half);
        } else {
          psi = random_unit(rng, dim);
        }

        qubit_string input = qubit_string::fixed_length(n, psi);
        encoded_program prog = encode(m, input, horizon);
        if (prog.code_word.size() + (size_t)prog.payload.max_len != (size_t)n + 1) return false;
        if (!header_seen) {
          header_bits = prog.machine_tag_bits();
          header_seen = true;
        } else if (prog.machine_tag_bits() != header_bits) {
          return false;
        }

        auto tau = halting_time(overlap_trajectory(m, psi, n, horizon));
        if (!tau) return false;
        qubit_string out = decode(prog, rational(1, 100), horizon);
        qubit_string direct = machine_output(m, psi, n, *tau);
        int k = std::max(out.max_len, direct.max_len);
        double d = trace_distance(out.widened(k), direct.widened(k));
        worst = std::max(worst, d);
        if (d >= kPipelineDelta) return false;
        ++runs;
      }
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream os;
  os << runs << " roundtrips, worst distance " << std::scientific << std::setprecision(1)
     << worst;
  detail = os.str();
  return runs == 900 && secs < 300.0;
}

bool criterion_approx_properties(std::string& detail) {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1010);
  struct job {
    const char* name;
    rational delta;
  };
  const std::vector<job> jobs = {{"move-halt", rational(1, 5)},
                                 {"delay-by-first-bit", rational(1, 5)},
                                 {"never-halt", rational(1, 5)},
                                 {"move-halt", rational(1, 20)},
                                 {"never-halt", rational(1, 20)}};
  for (const auto& j : jobs) {
    machine m = load_fixture(j.name);
    double d = j.delta.to_double();
    halting_spectrum spec = approx_spectrum(m, 1, 2, j.delta);
    if (!spec.approximate) return false;

    for (const auto& e : spec.entries) {
      for (int trial = 0; trial < 5; ++trial) {
        Vec v = e.space.basis * random_unit(rng, (Eigen::Index)e.space.dim());
        v /= v.norm();
        if (!is_eps_t_halting(m, v, 1, 20.0 * d + 1e-8, e.t)) return false;
      }
      subspace exact = exact_halting_space(m, 1, e.t);
      if (exact.dim() > 0) {
        Mat residual =
            (Mat::Identity(2, 2) - e.space.projector()) * exact.basis;
        if (operator_norm(residual) > 5.5 * d + 1e-8) return false;
      }
    }
    for (size_t i = 0; i < spec.entries.size(); ++i)
      for (size_t j2 = i + 1; j2 < spec.entries.size(); ++j2) {
        Mat overlaps =
            spec.entries[i].space.basis.adjoint() * spec.entries[j2].space.basis;
        if (overlaps.size() > 0 &&
            overlaps.cwiseAbs().maxCoeff() > 4.0 * std::sqrt(5.0 * d) + 1e-8)
          return false;
      }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  detail = "5 machine/delta pairs incl. never-halt termination";
  return secs < 120.0;
}

bool criterion_determinism(std::string& detail) {
  selftest_result a = run_selftest(7);
  selftest_result b = run_selftest(7);
  std::ostringstream os;
  os << a.report.size() << "-byte reports";
  detail = os.str();
  return a.ok && b.ok && a.report == b.report;
}

}  // namespace

int main() {
  criterion_runner r;
  r.run(1, "step operators of the bundled machines are exact isometries and the broken mutant is rejected",
        criterion_isometry);
  r.run(2, "halting subspaces at different times are orthogonal", criterion_orthogonality);
  r.run(3, "superpositions inside a halting space halt on schedule", criterion_closure);
  r.run(4, "spectrum dimensions never exceed the input dimension", criterion_dimension_bound);
  r.run(5, "halting-space dimensions induce Kraft-feasible code lengths", criterion_kraft);
  r.run(6, "blind prefix coding is exact, prefix-free, and online-stable",
        criterion_blind_coding);
  r.run(7, "decompression inverts compression on every halting space",
        criterion_compression_identity);
  r.run(8, "trace-distance, stability, telescoping, and similarity bounds hold",
        criterion_inequalities);
  r.run(9, "decoding an encoded input reproduces the machine output within delta",
        criterion_universality);
  r.run(10, "approximate halting spaces satisfy their certified constants",
        criterion_approx_properties);
  r.run(11, "the selftest report is byte-identical for a fixed seed", criterion_determinism);

  if (r.failures == 0) {
    std::cout << "acceptance: 11/11 criteria passed\n";
    return 0;
  }
  std::cout << "acceptance: " << (11 - r.failures) << "/11 criteria passed\n";
  return 1;
}
