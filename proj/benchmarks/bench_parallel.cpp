// Timing comparison between the OpenMP kernels and their serial references:
// Monte-Carlo channel accumulation and batch shadow estimation.

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "shadowlab/channel.hpp"
#include "shadowlab/shadows.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace shadowlab;

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void bench_channel(long long n_samples) {
  const Protocol p = make_protocol("global-haar", {.n = 0, .d = 8, .spin = 0});
  auto t0 = std::chrono::steady_clock::now();
  const SuperOperator serial =
      measurement_channel_mc_serial(p.ensemble, p.basis, n_samples, RandomStream(7));
  const double t_serial = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const McChannel parallel = measurement_channel_mc(p.ensemble, p.basis, n_samples, RandomStream(7));
  const double t_parallel = seconds_since(t0);
  const double diff = (serial.matrix - parallel.op.matrix).norm();
  std::printf("mc channel d=8 N=%lld:   serial %.3fs   parallel %.3fs   speedup %.2fx   |diff| %.2e\n",
              n_samples, t_serial, t_parallel, t_serial / t_parallel, diff);
}

void bench_estimate(long long n_snapshots) {
  const Protocol p = make_protocol("su2-tensor", {.n = 6, .d = 0, .spin = 0});
  RandomStream rng(9);
  const QuantumState rho = QuantumState::pure(random_pure_state(64, rng));
  const std::vector<Observable> obs = {observable_zsym(*p.schur),
                                       observable_isotypic_projector(*p.schur, 6)};
  auto t0 = std::chrono::steady_clock::now();
  const auto serial = estimate_batch_serial(p, rho, obs, n_snapshots, 10, RandomStream(11));
  const double t_serial = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const auto parallel = estimate_batch(p, rho, obs, n_snapshots, 10, RandomStream(11));
  const double t_parallel = seconds_since(t0);
  std::printf(
      "estimate su2-tensor n=6 N=%lld:   serial %.3fs   parallel %.3fs   speedup %.2fx   "
      "mean match %s\n",
      n_snapshots, t_serial, t_parallel, t_serial / t_parallel,
      serial[0].mean == parallel[0].mean ? "bitwise" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  long long n_channel = 20000, n_estimate = 20000;
  if (argc > 1) n_channel = std::atoll(argv[1]);
  if (argc > 2) n_estimate = std::atoll(argv[2]);
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP\n");
#endif
  bench_channel(n_channel);
  bench_estimate(n_estimate);
  return 0;
}
