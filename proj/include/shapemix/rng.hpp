#pragma once

#include <cstdint>

namespace shapemix {

// Counter-based generator: draw i of a stream is mix64(seed + (i+1)*phi)
// with the splitmix64 finalizer, so a (seed, counter) pair pins every
// variate independently of call history.  Chosen over std engines for
// cross-platform, cross-language reproducibility of fixtures.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  // uniform on (0,1), never returning an endpoint
  double next_u01();
  // standard normal via the inverse CDF
  double next_normal();
  // Gamma(k) for integer k >= 1 as a sum of exponentials
  double next_gamma_int(int k);
  // Beta(a,b) with integer parameters via the gamma ratio
  double next_beta_int(int a, int b);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

// Inverse standard normal CDF: Abramowitz-Stegun 26.2.23 start refined
// by Newton steps on erfc; relative accuracy near full double precision.
double normal_icdf(double p);

// Standard normal CDF via erfc.
double normal_cdf(double x);

}  // namespace shapemix
