#pragma once

#include <string>
#include <vector>

#include "mpctune/rng.hpp"

namespace mpctune {

// One randomized dynamics parameter, stored as (mean, std) and converted to
// gamma (shape, rate) on demand. The std is floored at kSigmaFloor so the
// derived shape mu^2/sigma^2 stays representable.
struct GammaSpec {
  std::string name;
  double mean = 1.0;
  double stddev = 1e-5;

  static constexpr double kSigmaFloor = 1e-5;

  GammaSpec() = default;
  GammaSpec(std::string name, double mean, double stddev);
};

struct ShapeRate {
  double shape = 0.0;
  double rate = 0.0;
};

// shape = mu^2/sigma^2, rate = mu/sigma^2. Throws ConfigError for
// non-positive mean or std.
ShapeRate to_shape_rate(const GammaSpec& spec);

// One draw from Gamma(shape, rate), Marsaglia-Tsang squeeze method with the
// alpha < 1 boost. Strictly positive.
double sample_gamma(double shape, double rate, Rng& rng);

double sample(const GammaSpec& spec, Rng& rng);

}  // namespace mpctune
