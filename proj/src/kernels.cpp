#include "shapemix/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shapemix::kernels {

namespace {

std::atomic<Exec> g_exec{Exec::Parallel};

inline std::int64_t num_blocks(std::int64_t n) {
  return (n + kBlock - 1) / kBlock;
}

}  // namespace

Exec exec_mode() { return g_exec.load(std::memory_order_relaxed); }
void set_exec_mode(Exec mode) { g_exec.store(mode, std::memory_order_relaxed); }

void CompensatedSum::add(double x) {
  const double t = sum + x;
  if (std::abs(sum) >= std::abs(x))
    carry += (sum - t) + x;
  else
    carry += (x - t) + sum;
  sum = t;
}

// ---------------------------------------------------------------- serial

namespace serial {

void column_dots(const double* B, int M, std::int64_t N, const double* w,
                 double* r) {
  for (std::int64_t j = 0; j < N; ++j) {
    const double* col = B + j * M;
    double acc = 0.0;
    for (int i = 0; i < M; ++i) acc += col[i] * w[i];
    r[j] = acc;
  }
}

void window_column_dots(const double* B, int M, std::int64_t N, int lo,
                        int len, const double* vals, double* sigma) {
  for (std::int64_t j = 0; j < N; ++j) {
    const double* col = B + j * M + lo;
    double acc = 0.0;
    for (int i = 0; i < len; ++i) acc += col[i] * vals[i];
    sigma[j] = acc;
  }
}

void weighted_column_sum(const double* B, int M, std::int64_t N,
                         const double* c, double* out) {
  std::fill(out, out + M, 0.0);
  for (std::int64_t j = 0; j < N; ++j) {
    const double* col = B + j * M;
    const double cj = c[j];
    for (int i = 0; i < M; ++i) out[i] += col[i] * cj;
  }
}

double em_accumulate(const double* B, int M, std::int64_t N, const double* w,
                     double* acc) {
  std::fill(acc, acc + M, 0.0);
  double rmin = std::numeric_limits<double>::infinity();
  for (std::int64_t j = 0; j < N; ++j) {
    const double* col = B + j * M;
    double r = 0.0;
    for (int i = 0; i < M; ++i) r += col[i] * w[i];
    rmin = std::min(rmin, r);
    const double inv = 1.0 / r;
    for (int i = 0; i < M; ++i) acc[i] += col[i] * inv;
  }
  return rmin;
}

double sum_log(const double* r, std::int64_t N) {
  CompensatedSum cs;
  for (std::int64_t j = 0; j < N; ++j) cs.add(std::log(r[j]));
  return cs.value();
}

double min_value(const double* r, std::int64_t N) {
  double m = std::numeric_limits<double>::infinity();
  for (std::int64_t j = 0; j < N; ++j) m = std::min(m, r[j]);
  return m;
}

double sum(const double* x, std::int64_t N) {
  CompensatedSum cs;
  for (std::int64_t j = 0; j < N; ++j) cs.add(x[j]);
  return cs.value();
}

double sum_sq(const double* x, std::int64_t N) {
  CompensatedSum cs;
  for (std::int64_t j = 0; j < N; ++j) cs.add(x[j] * x[j]);
  return cs.value();
}

double sum_sq_ratio(const double* s, const double* r, std::int64_t N) {
  CompensatedSum cs;
  for (std::int64_t j = 0; j < N; ++j) {
    const double q = s[j] / r[j];
    cs.add(q * q);
  }
  return cs.value();
}

QuadSums quad_sums(const double* t, const double* s, std::int64_t N) {
  CompensatedSum tt, ts, ss;
  for (std::int64_t j = 0; j < N; ++j) {
    tt.add(t[j] * t[j]);
    ts.add(t[j] * s[j]);
    ss.add(s[j] * s[j]);
  }
  return {tt.value(), ts.value(), ss.value()};
}

}  // namespace serial

// -------------------------------------------------------------- parallel

namespace par {

// Column-pointwise maps carry no reduction, so a plain parallel-for is
// already bit-identical to serial execution.

void column_dots(const double* B, int M, std::int64_t N, const double* w,
                 double* r) {
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < N; ++j) {
    const double* col = B + j * M;
    double acc = 0.0;
    for (int i = 0; i < M; ++i) acc += col[i] * w[i];
    r[j] = acc;
  }
}

void window_column_dots(const double* B, int M, std::int64_t N, int lo,
                        int len, const double* vals, double* sigma) {
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < N; ++j) {
    const double* col = B + j * M + lo;
    double acc = 0.0;
    for (int i = 0; i < len; ++i) acc += col[i] * vals[i];
    sigma[j] = acc;
  }
}

void weighted_column_sum(const double* B, int M, std::int64_t N,
                         const double* c, double* out) {
  const std::int64_t nb = num_blocks(N);
  std::vector<double> partial(static_cast<std::size_t>(nb) * M, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    double* p = partial.data() + b * M;
    const std::int64_t j1 = std::min(N, (b + 1) * kBlock);
    for (std::int64_t j = b * kBlock; j < j1; ++j) {
      const double* col = B + j * M;
      const double cj = c[j];
      for (int i = 0; i < M; ++i) p[i] += col[i] * cj;
    }
  }
  std::fill(out, out + M, 0.0);
  for (std::int64_t b = 0; b < nb; ++b) {
    const double* p = partial.data() + b * M;
    for (int i = 0; i < M; ++i) out[i] += p[i];
  }
}

double em_accumulate(const double* B, int M, std::int64_t N, const double* w,
                     double* acc) {
  const std::int64_t nb = num_blocks(N);
  std::vector<double> partial(static_cast<std::size_t>(nb) * M, 0.0);
  std::vector<double> blockmin(nb);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    double* p = partial.data() + b * M;
    double rmin = std::numeric_limits<double>::infinity();
    const std::int64_t j1 = std::min(N, (b + 1) * kBlock);
    for (std::int64_t j = b * kBlock; j < j1; ++j) {
      const double* col = B + j * M;
      double r = 0.0;
      for (int i = 0; i < M; ++i) r += col[i] * w[i];
      rmin = std::min(rmin, r);
      const double inv = 1.0 / r;
      for (int i = 0; i < M; ++i) p[i] += col[i] * inv;
    }
    blockmin[b] = rmin;
  }
  std::fill(acc, acc + M, 0.0);
  double rmin = std::numeric_limits<double>::infinity();
  for (std::int64_t b = 0; b < nb; ++b) {
    rmin = std::min(rmin, blockmin[b]);
    const double* p = partial.data() + b * M;
    for (int i = 0; i < M; ++i) acc[i] += p[i];
  }
  return rmin;
}

namespace {

// Per-block compensated partials combined in block order.
template <typename BlockFn>
double block_reduce(std::int64_t N, BlockFn&& fn) {
  const std::int64_t nb = num_blocks(N);
  std::vector<double> partial(nb);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    CompensatedSum cs;
    const std::int64_t j1 = std::min(N, (b + 1) * kBlock);
    for (std::int64_t j = b * kBlock; j < j1; ++j) fn(j, cs);
    partial[b] = cs.value();
  }
  CompensatedSum total;
  for (std::int64_t b = 0; b < nb; ++b) total.add(partial[b]);
  return total.value();
}

}  // namespace

double sum_log(const double* r, std::int64_t N) {
  return block_reduce(N, [r](std::int64_t j, CompensatedSum& cs) {
    cs.add(std::log(r[j]));
  });
}

double min_value(const double* r, std::int64_t N) {
  const std::int64_t nb = num_blocks(N);
  std::vector<double> partial(nb);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    double m = std::numeric_limits<double>::infinity();
    const std::int64_t j1 = std::min(N, (b + 1) * kBlock);
    for (std::int64_t j = b * kBlock; j < j1; ++j) m = std::min(m, r[j]);
    partial[b] = m;
  }
  double m = std::numeric_limits<double>::infinity();
  for (std::int64_t b = 0; b < nb; ++b) m = std::min(m, partial[b]);
  return m;
}

double sum(const double* x, std::int64_t N) {
  return block_reduce(N,
                      [x](std::int64_t j, CompensatedSum& cs) { cs.add(x[j]); });
}

double sum_sq(const double* x, std::int64_t N) {
  return block_reduce(N, [x](std::int64_t j, CompensatedSum& cs) {
    cs.add(x[j] * x[j]);
  });
}

double sum_sq_ratio(const double* s, const double* r, std::int64_t N) {
  return block_reduce(N, [s, r](std::int64_t j, CompensatedSum& cs) {
    const double q = s[j] / r[j];
    cs.add(q * q);
  });
}

QuadSums quad_sums(const double* t, const double* s, std::int64_t N) {
  const std::int64_t nb = num_blocks(N);
  std::vector<QuadSums> partial(nb);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    CompensatedSum tt, ts, ss;
    const std::int64_t j1 = std::min(N, (b + 1) * kBlock);
    for (std::int64_t j = b * kBlock; j < j1; ++j) {
      tt.add(t[j] * t[j]);
      ts.add(t[j] * s[j]);
      ss.add(s[j] * s[j]);
    }
    partial[b] = {tt.value(), ts.value(), ss.value()};
  }
  CompensatedSum tt, ts, ss;
  for (std::int64_t b = 0; b < nb; ++b) {
    tt.add(partial[b].tt);
    ts.add(partial[b].ts);
    ss.add(partial[b].ss);
  }
  return {tt.value(), ts.value(), ss.value()};
}

}  // namespace par

// -------------------------------------------------------------- dispatch

#define SHAPEMIX_DISPATCH(call) \
  return exec_mode() == Exec::Parallel ? par::call : serial::call

void column_dots(const double* B, int M, std::int64_t N, const double* w,
                 double* r) {
  if (exec_mode() == Exec::Parallel)
    par::column_dots(B, M, N, w, r);
  else
    serial::column_dots(B, M, N, w, r);
}

void window_column_dots(const double* B, int M, std::int64_t N, int lo,
                        int len, const double* vals, double* sigma) {
  if (exec_mode() == Exec::Parallel)
    par::window_column_dots(B, M, N, lo, len, vals, sigma);
  else
    serial::window_column_dots(B, M, N, lo, len, vals, sigma);
}

void weighted_column_sum(const double* B, int M, std::int64_t N,
                         const double* c, double* out) {
  if (exec_mode() == Exec::Parallel)
    par::weighted_column_sum(B, M, N, c, out);
  else
    serial::weighted_column_sum(B, M, N, c, out);
}

double em_accumulate(const double* B, int M, std::int64_t N, const double* w,
                     double* acc) {
  SHAPEMIX_DISPATCH(em_accumulate(B, M, N, w, acc));
}

double sum_log(const double* r, std::int64_t N) {
  SHAPEMIX_DISPATCH(sum_log(r, N));
}

double min_value(const double* r, std::int64_t N) {
  SHAPEMIX_DISPATCH(min_value(r, N));
}

double sum(const double* x, std::int64_t N) { SHAPEMIX_DISPATCH(sum(x, N)); }

double sum_sq(const double* x, std::int64_t N) {
  SHAPEMIX_DISPATCH(sum_sq(x, N));
}

double sum_sq_ratio(const double* s, const double* r, std::int64_t N) {
  SHAPEMIX_DISPATCH(sum_sq_ratio(s, r, N));
}

QuadSums quad_sums(const double* t, const double* s, std::int64_t N) {
  SHAPEMIX_DISPATCH(quad_sums(t, s, N));
}

#undef SHAPEMIX_DISPATCH

}  // namespace shapemix::kernels
