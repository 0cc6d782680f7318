#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mpctune/errors.hpp"
#include "mpctune/gamma_dist.hpp"

using namespace mpctune;

TEST_CASE("shape/rate conversion on exact inputs") {
  auto sr = to_shape_rate(GammaSpec("m", 1.0, 1.0));
  CHECK(sr.shape == 1.0);
  CHECK(sr.rate == 1.0);

  sr = to_shape_rate(GammaSpec("m", 1.0, 0.1));
  CHECK(sr.shape == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(sr.rate == doctest::Approx(100.0).epsilon(1e-12));

  sr = to_shape_rate(GammaSpec("l", 2.0, 0.5));
  CHECK(sr.shape == 16.0);
  CHECK(sr.rate == 8.0);
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(GammaSpec("m", 0.0, 0.1), ConfigError);
  CHECK_THROWS_AS(GammaSpec("m", -1.0, 0.1), ConfigError);
  CHECK_THROWS_AS(GammaSpec("m", 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(GammaSpec("m", 1.0, -0.5), ConfigError);
}

TEST_CASE("moment identity round-trips for random specs") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double mu = rng.uniform(1e-3, 50.0);
    const double sigma = rng.uniform(1e-4, 5.0);
    const GammaSpec spec("p", mu, sigma);
    const ShapeRate sr = to_shape_rate(spec);
    const double mean = sr.shape / sr.rate;
    const double var = sr.shape / (sr.rate * sr.rate);
    CHECK(mean == doctest::Approx(spec.mean).epsilon(1e-12));
    CHECK(var == doctest::Approx(spec.stddev * spec.stddev).epsilon(1e-12));
  }
}

TEST_CASE("monotone concentration: smaller sigma, larger shape") {
  double prev_shape = 0.0;
  for (double sigma : {0.5, 0.2, 0.1, 0.05, 0.01}) {
    const double shape = to_shape_rate(GammaSpec("m", 1.3, sigma)).shape;
    CHECK(shape > prev_shape);
    prev_shape = shape;
  }
}

TEST_CASE("sample mean over 1e6 draws, mu=1 sigma=0.1") {
  Rng rng(11);
  const GammaSpec spec("m", 1.0, 0.1);
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample(spec, rng);
  const double mean = sum / n;
  CHECK(mean >= 0.999);
  CHECK(mean <= 1.001);
}

TEST_CASE("sample variance over 1e6 draws, mu=2 sigma=0.5") {
  Rng rng(13);
  const GammaSpec spec("l", 2.0, 0.5);
  const int n = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample(spec, rng);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(var - 0.25) < 0.02 * 0.25);
}

TEST_CASE("draws are strictly positive, including alpha < 1") {
  Rng rng(17);
  // alpha = mu^2/sigma^2 = 0.25 exercises the boost branch
  const GammaSpec small("m", 0.5, 1.0);
  for (int i = 0; i < 20000; ++i) CHECK(sample(small, rng) > 0.0);
  const GammaSpec big("m", 1.0, 1e-5);
  for (int i = 0; i < 1000; ++i) CHECK(sample(big, rng) > 0.0);
}

TEST_CASE("same seed gives the same draw sequence") {
  const GammaSpec spec("m", 1.5, 0.3);
  Rng a(21), b(21);
  for (int i = 0; i < 1000; ++i) {
    CHECK(sample(spec, a) == sample(spec, b));
  }
}

TEST_CASE("sigma floor keeps draws next to the mean") {
  Rng rng(23);
  const GammaSpec spec("m", 1.0, 1e-5);
  for (int i = 0; i < 1000; ++i) {
    CHECK(std::abs(sample(spec, rng) - 1.0) < 1e-3);
  }
}
