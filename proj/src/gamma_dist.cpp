#include "mpctune/gamma_dist.hpp"

#include <cmath>

#include "mpctune/errors.hpp"

namespace mpctune {

GammaSpec::GammaSpec(std::string name_, double mean_, double stddev_)
    : name(std::move(name_)), mean(mean_), stddev(stddev_) {
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw ConfigError("GammaSpec '" + name + "': mean must be positive, got " +
                      std::to_string(mean));
  }
  if (!(stddev > 0.0) || !std::isfinite(stddev)) {
    throw ConfigError("GammaSpec '" + name + "': std must be positive, got " +
                      std::to_string(stddev));
  }
  if (stddev < kSigmaFloor) stddev = kSigmaFloor;
}

ShapeRate to_shape_rate(const GammaSpec& spec) {
  if (!(spec.mean > 0.0) || !(spec.stddev > 0.0)) {
    throw ConfigError("GammaSpec '" + spec.name + "': mean and std must be positive");
  }
  const double var = spec.stddev * spec.stddev;
  return {spec.mean * spec.mean / var, spec.mean / var};
}

namespace {

// Marsaglia-Tsang for alpha >= 1; unit rate.
double gamma_unit_rate(double alpha, Rng& rng) {
  if (alpha < 1.0) {
    // Boost: Gamma(a) = Gamma(a + 1) * U^(1/a)
    const double u = 1.0 - rng.uniform();  // (0, 1]
    return gamma_unit_rate(alpha + 1.0, rng) * std::pow(u, 1.0 / alpha);
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = rng.normal();
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = 1.0 - rng.uniform();  // (0, 1]
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double sample_gamma(double shape, double rate, Rng& rng) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw ConfigError("sample_gamma: shape and rate must be positive");
  }
  return gamma_unit_rate(shape, rng) / rate;
}

double sample(const GammaSpec& spec, Rng& rng) {
  const ShapeRate sr = to_shape_rate(spec);
  return sample_gamma(sr.shape, sr.rate, rng);
}

}  // namespace mpctune
