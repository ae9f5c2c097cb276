#pragma once

#include <cstdint>
#include <string>

#include "shapemix/basis.hpp"

namespace shapemix {

// Synthetic data profiles used by the experiments and the test suite.
//   gauss5:                5-component Gaussian mixture on the real line
//   beta_concave:          5-component Beta mixture with concave weights
//   beta_convex_increasing 5-component Beta mixture, convex increasing
//   halfnormal:            |N(0,1)| with values >= 3 discarded, scaled to [0,1]
enum class SynthProfile { Gauss5, BetaConcave, BetaConvexIncreasing, Halfnormal };

SynthProfile synth_profile_from_name(const std::string& name);
const char* synth_profile_name(SynthProfile p);

Vec synth_samples(SynthProfile profile, std::int64_t n, std::uint64_t seed);

// Analytic CDF of each profile's target density (used by the
// goodness-of-fit tests; halfnormal is the rescaled truncated density).
double synth_cdf(SynthProfile profile, double x);

}  // namespace shapemix
