#include "qtmlab/selftest.hpp"

#include <algorithm>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

#include "qtmlab/universal.hpp"

namespace qtmlab {

namespace {

const char* kGoodFixtures[] = {"move-halt",      "hadamard-halt",      "copy-halt",
                               "delay-by-first-bit", "move-to-output", "hadamard-to-output",
                               "never-halt"};

Vec random_unit(std::mt19937_64& rng, size_t dim) {
  std::normal_distribution<double> g;
  Vec v(dim);
  for (size_t i = 0; i < dim; ++i) v(i) = cplx(g(rng), g(rng));
  return v / v.norm();
}

struct suite_log {
  std::ostringstream out;
  bool all_ok = true;

  void run(const std::string& name, const std::function<std::string()>& body) {
    try {
      std::string msg = body();
      out << "ok " << name << ": " << msg << "\n";
    } catch (const std::exception& e) {
      all_ok = false;
      out << "FAIL " << name << ": " << e.what() << "\n";
    }
  }
};

void expect(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << v;
  return s.str();
}

}  // namespace

selftest_result run_selftest(uint64_t seed, bool sabotage, const std::string& fixture_dir) {
  std::mt19937_64 rng(seed);
  suite_log log;
  log.out << "selftest seed " << seed << (sabotage ? " (sabotaged)" : "") << "\n";

  auto fixture = [&](const std::string& name) {
    return load_machine(fixture_dir + "/" + name + ".qtm");
  };

  log.run("machine-validation", [&] {
    for (const char* name : kGoodFixtures) {
      expect(validate_machine(fixture(name), 0.0, true).ok,
             std::string(name) + " failed exact validation");
    }
    auto bad_norm = validate_machine(load_machine(fixture_dir + "/invalid/bad-row-norm.qtm"),
                                     0.0, true);
    expect(!bad_norm.ok && bad_norm.violations[0].which == "row-norm",
           "bad-row-norm not rejected as row-norm");
    auto bad_orth = validate_machine(
        load_machine(fixture_dir + "/invalid/bad-orthogonality.qtm"), 0.0, true);
    expect(!bad_orth.ok && bad_orth.violations[0].which == "row-orthogonality",
           "bad-orthogonality not rejected as row-orthogonality");
    bool threw = false;
    try {
      load_machine(fixture_dir + "/invalid/malformed.qtm");
    } catch (const parse_error&) {
      threw = true;
    }
    expect(threw, "malformed fixture parsed");
    return "7 fixtures well-formed, 2 rejected, 1 parse error";
  });

  log.run("step-isometry", [&] {
    double worst = 0.0;
    for (const char* name : kGoodFixtures) {
      machine m = fixture(name);
      config_space space = build_space(m, 2, 3);
      step_operator op = build_step_operator(space);
      expect(op.isometry_violations_exact() == 0,
             std::string(name) + " has exact isometry violations");
      worst = std::max(worst, op.isometry_defect());
    }
    expect(worst <= 1e-10, "float isometry defect above 1e-10");
    return "7 step operators exactly isometric, float defect " + fmt(worst);
  });

  log.run("exact-spectra", [&] {
    size_t move_dim = sabotage ? 3 : 4;
    halting_spectrum move = exact_spectrum(fixture("move-halt"), 2, 6);
    expect(move.entries.size() == 1 && move.entries[0].t == 1 &&
               move.entries[0].space.dim() == move_dim,
           "move-halt n=2 spectrum is not [(1," + std::to_string(move_dim) + ")]");
    halting_spectrum delay = exact_spectrum(fixture("delay-by-first-bit"), 2, 6);
    expect(delay.entries.size() == 2 && delay.entries[0].t == 2 && delay.entries[1].t == 3 &&
               delay.entries[0].space.dim() == 2 && delay.entries[1].space.dim() == 2,
           "delay n=2 spectrum is not [(2,2),(3,2)]");
    halting_spectrum never = exact_spectrum(fixture("never-halt"), 2, 6);
    expect(never.entries.empty(), "never-halt n=2 spectrum not empty");
    for (const char* name : kGoodFixtures) {
      expect(check_spectrum_bound(exact_spectrum(fixture(name), 2, 6)),
             std::string(name) + " exceeds the dimension bound");
    }
    return "pinned spectra match, dimension bound holds at n=2";
  });

  log.run("halting-closure", [&] {
    machine m = fixture("delay-by-first-bit");
    halting_spectrum spec = exact_spectrum(m, 2, 6);
    for (const auto& e : spec.entries) {
      for (int s = 0; s < 5; ++s) {
        Vec coeff = random_unit(rng, e.space.dim());
        Vec psi = e.space.basis * coeff;
        expect(is_eps_t_halting(m, psi, 2, 1e-8, e.t),
               "superposition not halting at t=" + std::to_string(e.t));
      }
    }
    return "10 random superpositions halt on schedule";
  });

  log.run("prefix-coding", [&] {
    prefix_code c = blind_prefix_code({1, 2, 2});
    expect(c.words == std::vector<std::string>{"0", "10", "11"}, "[1,2,2] miscoded");
    std::uniform_int_distribution<int> len_pick(1, 8);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<int> lengths;
      rational budget(1);
      for (int i = 0; i < 12; ++i) {
        int l = len_pick(rng);
        if (rational(1, 1LL << l) > budget) continue;
        budget -= rational(1, 1LL << l);
        lengths.push_back(l);
      }
      if (lengths.empty()) continue;
      prefix_code full = blind_prefix_code(lengths);
      for (size_t i = 0; i < lengths.size(); ++i) {
        expect((int)full.words[i].size() == lengths[i], "length mismatch");
        for (size_t j = 0; j < i; ++j) {
          expect(full.words[i].rfind(full.words[j], 0) != 0 &&
                     full.words[j].rfind(full.words[i], 0) != 0,
                 "prefix collision");
        }
      }
      prefix_code half =
          blind_prefix_code({lengths.begin(), lengths.begin() + lengths.size() / 2});
      for (size_t i = 0; i < half.words.size(); ++i) {
        expect(half.words[i] == full.words[i], "online stability broken");
      }
    }
    return "50 random feasible sequences prefix-free, lengths exact, online-stable";
  });

  log.run("compression-identity", [&] {
    Mat cols(8, 3);
    for (int c = 0; c < 3; ++c) cols.col(c) = random_unit(rng, 8);
    subspace u = span_of(cols);
    compression_map cm = make_compression(u);
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
      Vec psi = u.basis * random_unit(rng, u.dim());
      worst = std::max(worst, (cm.decompress(cm.compress(psi)) - psi).norm());
    }
    expect(worst <= 1e-9, "decompress(compress) drifted by " + fmt(worst));
    return "10 vectors recovered, worst drift " + fmt(worst);
  });

  log.run("norm-inequality", [&] {
    for (int s = 0; s < 20; ++s) {
      Vec a = random_unit(rng, 8), b = random_unit(rng, 8);
      double td = trace_distance(Mat(a * a.adjoint()), Mat(b * b.adjoint()));
      expect(td <= (a - b).norm() + 1e-10, "trace distance above vector distance");
    }
    return "trace distance <= vector distance on 20 pairs";
  });

  log.run("output-reading", [&] {
    machine m = fixture("hadamard-to-output");
    Vec zero = Vec::Zero(2);
    zero(0) = 1.0;
    qubit_string out = machine_output(m, zero, 1, 2);
    expect(out.is_pure(1e-9), "hadamard output lost purity");
    Vec plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Vec plus_state = qubit_string::fixed_length(1, plus).principal_vector();
    expect(out.fidelity_with_pure(plus_state) > 1.0 - 1e-9, "hadamard output is not |+>");
    return "H|0> read back pure with fidelity 1";
  });

  log.run("encode-roundtrip", [&] {
    machine mv = fixture("move-to-output");
    qubit_string in = qubit_string::basis_state("01");
    encoded_program prog = encode(mv, in, 6);
    expect(prog.code_word == "0" && prog.payload.max_len == 2, "unexpected program shape");
    qubit_string back = decode(prog, rational(1, 100), 6);
    Vec e01 = Vec::Zero(4);
    e01(1) = 1.0;
    qubit_string direct = machine_output(mv, e01, 2, 3);
    int k = std::max(back.max_len, direct.max_len);
    double d_mv = trace_distance(back.widened(k), direct.widened(k));
    expect(d_mv <= 1e-8, "move-to-output roundtrip drifted by " + fmt(d_mv));

    machine hd = fixture("hadamard-to-output");
    Vec zero = Vec::Zero(2);
    zero(0) = 1.0;
    qubit_string hin = qubit_string::fixed_length(1, zero);
    qubit_string hback = decode(encode(hd, hin, 6), rational(1, 100), 6);
    qubit_string hdirect = machine_output(hd, zero, 1, 2);
    k = std::max(hback.max_len, hdirect.max_len);
    double d_hd = trace_distance(hback.widened(k), hdirect.widened(k));
    expect(d_hd < 0.01, "hadamard roundtrip drifted by " + fmt(d_hd));
    return "roundtrips within " + fmt(std::max(d_mv, d_hd));
  });

  log.run("approx-quick", [&] {
    auto [space, meta] = approx_halting_space(fixture("move-halt"), 1, 1, rational(1, 5));
    expect(space.dim() == 2, "move-halt approximate space at t=1 is not full");
    expect(meta.epsilon == rational(18, 5), "settled epsilon is not 18*delta");
    auto [none, meta2] = approx_halting_space(fixture("never-halt"), 1, 1, rational(1, 20));
    expect(none.dim() == 0, "never-halt approximate space not empty");
    expect(meta2.epsilon == rational(9, 10), "never-halt epsilon is not 18*delta");
    return "toy approximate spaces settle at delta=0.2 and delta=0.05";
  });

  selftest_result res;
  res.ok = log.all_ok;
  res.report = log.out.str() + (log.all_ok ? "selftest: PASS\n" : "selftest: FAIL\n");
  return res;
}

}  // namespace qtmlab
