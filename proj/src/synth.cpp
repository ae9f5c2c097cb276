#include "shapemix/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "shapemix/rng.hpp"

namespace shapemix {

namespace {

constexpr double kGaussW[5] = {0.6, 0.05, 0.15, 0.1, 0.1};
constexpr double kGaussMu[5] = {0.0, 4.0, 5.5, -3.5, -4.5};
constexpr double kGaussSd[5] = {1.0, 0.5, 1.0, 0.25, 0.25};

constexpr double kBetaConcaveW[5] = {0.05, 0.3, 0.3, 0.3, 0.05};
constexpr double kBetaConvexIncW[5] = {0.05, 0.05, 0.1, 0.25, 0.55};

int pick_component(const double* w, int n, double u) {
  double acc = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    acc += w[i];
    if (u < acc) return i;
  }
  return n - 1;
}

// Beta(m, 6-m) CDF for integer parameters: binomial tail of 5 trials.
double beta5_cdf(int m, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  static const double binom5[6] = {1, 5, 10, 10, 5, 1};
  double acc = 0.0;
  for (int j = m; j <= 5; ++j)
    acc += binom5[j] * std::pow(x, j) * std::pow(1.0 - x, 5 - j);
  return acc;
}

}  // namespace

SynthProfile synth_profile_from_name(const std::string& name) {
  if (name == "gauss5") return SynthProfile::Gauss5;
  if (name == "beta_concave") return SynthProfile::BetaConcave;
  if (name == "beta_convex_increasing") return SynthProfile::BetaConvexIncreasing;
  if (name == "halfnormal") return SynthProfile::Halfnormal;
  throw std::invalid_argument("unknown synth profile: " + name);
}

const char* synth_profile_name(SynthProfile p) {
  switch (p) {
    case SynthProfile::Gauss5: return "gauss5";
    case SynthProfile::BetaConcave: return "beta_concave";
    case SynthProfile::BetaConvexIncreasing: return "beta_convex_increasing";
    case SynthProfile::Halfnormal: return "halfnormal";
  }
  return "?";
}

Vec synth_samples(SynthProfile profile, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("synth_samples: n must be >= 1");
  CounterRng rng(seed);
  Vec out;
  out.reserve(n);
  switch (profile) {
    case SynthProfile::Gauss5:
      for (std::int64_t i = 0; i < n; ++i) {
        const int c = pick_component(kGaussW, 5, rng.next_u01());
        out.push_back(kGaussMu[c] + kGaussSd[c] * rng.next_normal());
      }
      break;
    case SynthProfile::BetaConcave:
    case SynthProfile::BetaConvexIncreasing: {
      const double* w = profile == SynthProfile::BetaConcave
                            ? kBetaConcaveW
                            : kBetaConvexIncW;
      for (std::int64_t i = 0; i < n; ++i) {
        const int m = pick_component(w, 5, rng.next_u01()) + 1;
        out.push_back(rng.next_beta_int(m, 6 - m));
      }
      break;
    }
    case SynthProfile::Halfnormal:
      while (static_cast<std::int64_t>(out.size()) < n) {
        const double z = std::abs(rng.next_normal());
        if (z < 3.0) out.push_back(z / 3.0);
      }
      break;
  }
  return out;
}

double synth_cdf(SynthProfile profile, double x) {
  switch (profile) {
    case SynthProfile::Gauss5: {
      double acc = 0.0;
      for (int c = 0; c < 5; ++c)
        acc += kGaussW[c] * normal_cdf((x - kGaussMu[c]) / kGaussSd[c]);
      return acc;
    }
    case SynthProfile::BetaConcave:
    case SynthProfile::BetaConvexIncreasing: {
      const double* w = profile == SynthProfile::BetaConcave
                            ? kBetaConcaveW
                            : kBetaConvexIncW;
      double acc = 0.0;
      for (int m = 1; m <= 5; ++m) acc += w[m - 1] * beta5_cdf(m, x);
      return acc;
    }
    case SynthProfile::Halfnormal: {
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      const double z = 2.0 * normal_cdf(3.0 * x) - 1.0;
      const double total = 2.0 * normal_cdf(3.0) - 1.0;
      return z / total;
    }
  }
  return 0.0;
}

}  // namespace shapemix
