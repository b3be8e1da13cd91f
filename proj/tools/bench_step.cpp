#include <chrono>
#include <iostream>
#include <random>
#include <vector>

#include "qtmlab/state.hpp"

using namespace qtmlab;

// Compares the serial reference kernel against the row-parallel one on a
// single space: per-application wall time and the worst elementwise gap.
int main(int argc, char** argv) {
  if (argc > 1 && (std::string(argv[1]) == "-h" || std::string(argv[1]) == "--help")) {
    std::cout << "usage: bench_step [machine.qtm] [n] [t_max] [reps]\n";
    return 0;
  }
  std::string path = argc > 1 ? argv[1] : std::string(QTMLAB_FIXTURE_DIR "/hadamard-halt.qtm");
  int n = argc > 2 ? std::atoi(argv[2]) : 3;
  int t_max = argc > 3 ? std::atoi(argv[3]) : 8;
  int reps = argc > 4 ? std::atoi(argv[4]) : 50;

  machine m = load_machine(path);
  config_space space = build_space(m, n, t_max);
  step_operator op = build_step_operator(space);
  std::cout << "machine " << m.name << "  n " << n << "  t_max " << t_max << "  basis "
            << space.dim() << "  extended " << space.extended_dim() << "\n";

  std::mt19937_64 rng(12345);
  std::normal_distribution<double> g;
  std::vector<cplx> x(space.extended_dim());
  for (auto& v : x) v = cplx(g(rng), g(rng));

  std::vector<cplx> ys(x.size()), yp(x.size());
  using clk = std::chrono::steady_clock;

  auto t0 = clk::now();
  for (int r = 0; r < reps; ++r) op.apply_serial(x.data(), ys.data());
  auto t1 = clk::now();
  for (int r = 0; r < reps; ++r) op.apply_parallel(x.data(), yp.data());
  auto t2 = clk::now();

  double ser = std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
  double par = std::chrono::duration<double, std::milli>(t2 - t1).count() / reps;
  double gap = 0.0;
  for (size_t i = 0; i < x.size(); ++i) gap = std::max(gap, std::abs(ys[i] - yp[i]));

  std::cout << "serial   " << ser << " ms/apply\n";
  std::cout << "parallel " << par << " ms/apply\n";
  std::cout << "speedup  " << (par > 0 ? ser / par : 0.0) << "\n";
  std::cout << "max elementwise gap " << gap << "\n";
  return gap <= 1e-12 ? 0 : 1;
}
