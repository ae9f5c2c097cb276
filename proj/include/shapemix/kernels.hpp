#pragma once

#include <cstdint>
#include <vector>

// Data-parallel reduction kernels over the M x N evaluation matrix.
//
// The matrix is stored column-major: column j (one sample) occupies
// B[j*M .. j*M+M).  Every reduction over samples uses a fixed block
// decomposition (kBlock columns per block, partials combined in block
// order), so results are identical for any OpenMP thread count and
// across repeated calls.  The serial:: variants are straightforward
// single-pass loops kept as a reference; tools/bench_kernels.cpp
// compares the two.

namespace shapemix::kernels {

enum class Exec { Serial, Parallel };

Exec exec_mode();
void set_exec_mode(Exec mode);

// Columns per reduction block; fixed so the reduction tree does not
// depend on the thread count.
inline constexpr std::int64_t kBlock = 1024;

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x);
  double value() const { return sum + carry; }
};

// r[j] = <B_j, w>
void column_dots(const double* B, int M, std::int64_t N, const double* w,
                 double* r);

// sigma[j] = sum_{i in [lo, lo+len)} B[j*M+i] * vals[i-lo]
void window_column_dots(const double* B, int M, std::int64_t N, int lo,
                        int len, const double* vals, double* sigma);

// out[i] = sum_j B_ij * c[j]
void weighted_column_sum(const double* B, int M, std::int64_t N,
                         const double* c, double* out);

// One fused expectation-maximization pass:
//   r_j = <B_j, w>;  acc[i] = sum_j B_ij / r_j.
// Returns the minimum r_j encountered.
double em_accumulate(const double* B, int M, std::int64_t N, const double* w,
                     double* acc);

// Compensated sum of log(r[j]); caller guarantees r > 0.
double sum_log(const double* r, std::int64_t N);

double min_value(const double* r, std::int64_t N);

double sum(const double* x, std::int64_t N);
double sum_sq(const double* x, std::int64_t N);

// sum of (s[j]/r[j])^2
double sum_sq_ratio(const double* s, const double* r, std::int64_t N);

struct QuadSums {
  double tt = 0.0;  // sum t^2
  double ts = 0.0;  // sum t*s
  double ss = 0.0;  // sum s^2
};
QuadSums quad_sums(const double* t, const double* s, std::int64_t N);

namespace serial {
void column_dots(const double* B, int M, std::int64_t N, const double* w,
                 double* r);
void window_column_dots(const double* B, int M, std::int64_t N, int lo,
                        int len, const double* vals, double* sigma);
void weighted_column_sum(const double* B, int M, std::int64_t N,
                         const double* c, double* out);
double em_accumulate(const double* B, int M, std::int64_t N, const double* w,
                     double* acc);
double sum_log(const double* r, std::int64_t N);
double min_value(const double* r, std::int64_t N);
double sum(const double* x, std::int64_t N);
double sum_sq(const double* x, std::int64_t N);
double sum_sq_ratio(const double* s, const double* r, std::int64_t N);
QuadSums quad_sums(const double* t, const double* s, std::int64_t N);
}  // namespace serial

namespace par {
void column_dots(const double* B, int M, std::int64_t N, const double* w,
                 double* r);
void window_column_dots(const double* B, int M, std::int64_t N, int lo,
                        int len, const double* vals, double* sigma);
void weighted_column_sum(const double* B, int M, std::int64_t N,
                         const double* c, double* out);
double em_accumulate(const double* B, int M, std::int64_t N, const double* w,
                     double* acc);
double sum_log(const double* r, std::int64_t N);
double min_value(const double* r, std::int64_t N);
double sum(const double* x, std::int64_t N);
double sum_sq(const double* x, std::int64_t N);
double sum_sq_ratio(const double* s, const double* r, std::int64_t N);
QuadSums quad_sums(const double* t, const double* s, std::int64_t N);
}  // namespace par

}  // namespace shapemix::kernels
