#include "shapemix/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace shapemix {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(seed_ + counter_ * kGolden);
}

double CounterRng::next_u01() {
  // 53 random bits centered in (0,1): (k + 0.5) * 2^-53
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
}

double CounterRng::next_normal() { return normal_icdf(next_u01()); }

double CounterRng::next_gamma_int(int k) {
  if (k < 1) throw std::invalid_argument("next_gamma_int: k must be >= 1");
  double acc = 0.0;
  for (int i = 0; i < k; ++i) acc -= std::log(next_u01());
  return acc;
}

double CounterRng::next_beta_int(int a, int b) {
  const double ga = next_gamma_int(a);
  const double gb = next_gamma_int(b);
  return ga / (ga + gb);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double normal_pdf(double x) { return std::exp(-0.5 * x * x) * kInvSqrt2Pi; }

// Abramowitz-Stegun 26.2.23, |error| < 4.5e-4 for the lower tail.
double icdf_seed(double p) {
  const double t = std::sqrt(-2.0 * std::log(p));
  const double num = 2.515517 + t * (0.802853 + t * 0.010328);
  const double den = 1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308));
  return -(t - num / den);
}

}  // namespace

double normal_icdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_icdf: p must lie in (0,1)");
  const bool upper = p > 0.5;
  const double pl = upper ? 1.0 - p : p;
  double x = icdf_seed(pl);
  for (int it = 0; it < 4; ++it) {
    const double err = normal_cdf(x) - pl;
    x -= err / normal_pdf(x);
  }
  return upper ? -x : x;
}

}  // namespace shapemix
