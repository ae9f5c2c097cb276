// Compares the serial reference kernels against the OpenMP variants on a
// synthetic instance: wall time per pass and the worst relative deviation
// between the two results.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "shapemix/kernels.hpp"
#include "shapemix/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using shapemix::CounterRng;
namespace k = shapemix::kernels;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(
             clock::now().time_since_epoch())
      .count();
}

template <typename Fn>
double time_ms(int reps, Fn&& fn) {
  fn();  // warm up
  const double t0 = now_ms();
  for (int r = 0; r < reps; ++r) fn();
  return (now_ms() - t0) / reps;
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

int main(int argc, char** argv) {
  int M = 200;
  std::int64_t N = 100000;
  int reps = 5;
  if (argc > 1) M = std::atoi(argv[1]);
  if (argc > 2) N = std::atoll(argv[2]);
  if (argc > 3) reps = std::atoi(argv[3]);

#ifdef _OPENMP
  std::printf("threads=%d  M=%d  N=%lld  reps=%d\n", omp_get_max_threads(), M,
              static_cast<long long>(N), reps);
#else
  std::printf("threads=1 (no OpenMP)  M=%d  N=%lld  reps=%d\n", M,
              static_cast<long long>(N), reps);
#endif

  CounterRng rng(7);
  std::vector<double> B(static_cast<std::size_t>(M) * N);
  for (double& x : B) x = 0.1 + rng.next_u01();
  std::vector<double> w(M, 1.0 / M), r(N), rs(N), c(N);
  std::vector<double> gs(M), gp(M), acc_s(M), acc_p(M);

  const double t_dot_s =
      time_ms(reps, [&] { k::serial::column_dots(B.data(), M, N, w.data(), rs.data()); });
  const double t_dot_p =
      time_ms(reps, [&] { k::par::column_dots(B.data(), M, N, w.data(), r.data()); });
  double d_dot = 0.0;
  for (std::int64_t j = 0; j < N; ++j) d_dot = std::max(d_dot, rel_diff(r[j], rs[j]));

  for (std::int64_t j = 0; j < N; ++j) c[j] = 1.0 / r[j];
  const double t_wcs_s = time_ms(reps, [&] {
    k::serial::weighted_column_sum(B.data(), M, N, c.data(), gs.data());
  });
  const double t_wcs_p = time_ms(reps, [&] {
    k::par::weighted_column_sum(B.data(), M, N, c.data(), gp.data());
  });
  double d_wcs = 0.0;
  for (int i = 0; i < M; ++i) d_wcs = std::max(d_wcs, rel_diff(gs[i], gp[i]));

  const double t_em_s = time_ms(reps, [&] {
    k::serial::em_accumulate(B.data(), M, N, w.data(), acc_s.data());
  });
  const double t_em_p = time_ms(reps, [&] {
    k::par::em_accumulate(B.data(), M, N, w.data(), acc_p.data());
  });
  double d_em = 0.0;
  for (int i = 0; i < M; ++i) d_em = std::max(d_em, rel_diff(acc_s[i], acc_p[i]));

  const double sl_s = time_ms(reps, [&] { (void)k::serial::sum_log(r.data(), N); });
  const double sl_p = time_ms(reps, [&] { (void)k::par::sum_log(r.data(), N); });
  const double d_sl =
      rel_diff(k::serial::sum_log(r.data(), N), k::par::sum_log(r.data(), N));

  std::printf("%-20s %10s %10s %9s %12s\n", "kernel", "serial ms", "omp ms",
              "speedup", "max rel diff");
  auto row = [](const char* name, double ts, double tp, double d) {
    std::printf("%-20s %10.3f %10.3f %8.2fx %12.3e\n", name, ts, tp, ts / tp, d);
  };
  row("column_dots", t_dot_s, t_dot_p, d_dot);
  row("weighted_column_sum", t_wcs_s, t_wcs_p, d_wcs);
  row("em_accumulate", t_em_s, t_em_p, d_em);
  row("sum_log", sl_s, sl_p, d_sl);
  return 0;
}
