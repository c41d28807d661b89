#include <doctest.h>

#include <cmath>
#include <cstring>

#include "oracles.hpp"
#include "mscale/error.hpp"
#include "mscale/panel.hpp"
#include "mscale/spectral.hpp"
#include "mscale/synth.hpp"

using namespace mscale;

namespace {

bool bit_identical(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("fgn autocovariance closed form") {
  CHECK(fgn_autocovariance(0.5, 0) == 1.0);
  CHECK(fgn_autocovariance(0.5, 3) == doctest::Approx(0.0).scale(1e-15));
  CHECK(fgn_autocovariance(0.7, 1) == doctest::Approx(0.5 * (std::pow(2.0, 1.4) - 2.0)));
  CHECK(fgn_autocovariance(0.3, 1) < 0.0);
}

TEST_CASE("white fGn has no lag-1 correlation") {
  FbmSpec s;
  s.hurst = 0.5;
  s.length = 1 << 14;
  s.seed = 3;
  const auto x = gen_fbm(s);
  REQUIRE(x.size() == s.length);
  const double rho = oracle::autocovariance(x, 1) / oracle::autocovariance(x, 0);
  CHECK(std::abs(rho) < 0.03);
}

TEST_CASE("H = 0.7 sample autocovariance matches the closed form") {
  const std::size_t seeds = 10;
  std::vector<std::vector<double>> acf(11);
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    FbmSpec s;
    s.hurst = 0.7;
    s.length = 1 << 14;
    s.seed = 1000 + seed;
    const auto x = gen_fbm(s);
    for (std::size_t k = 1; k <= 10; ++k) acf[k].push_back(oracle::autocovariance(x, k));
  }
  for (std::size_t k = 1; k <= 10; ++k) {
    const double se = oracle::stddev(acf[k]) / std::sqrt(static_cast<double>(seeds));
    CHECK(std::abs(oracle::mean(acf[k]) - fgn_autocovariance(0.7, k)) < 3.0 * se);
  }
}

TEST_CASE("fBm increments scale as tau^2H") {
  for (double h : {0.3, 0.7}) {
    std::vector<double> slopes;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      FbmSpec s;
      s.hurst = h;
      s.length = 1 << 14;
      s.seed = seed;
      s.output = FbmOutput::path;
      const auto x = gen_fbm(s);
      std::vector<double> taus, vars;
      for (std::size_t tau = 1; tau <= x.size() / 8; tau *= 2) {
        double acc = 0.0;
        for (std::size_t t = 0; t + tau < x.size(); ++t) acc += (x[t + tau] - x[t]) * (x[t + tau] - x[t]);
        taus.push_back(static_cast<double>(tau));
        vars.push_back(acc / static_cast<double>(x.size() - tau));
      }
      slopes.push_back(oracle::loglog_slope(taus, vars));
    }
    CHECK(std::abs(oracle::mean(slopes) - 2.0 * h) < 0.05);
  }
}

TEST_CASE("fBm path is the running sum of the increments") {
  FbmSpec s;
  s.hurst = 0.6;
  s.length = 256;
  s.seed = 8;
  const auto inc = gen_fbm(s);
  s.output = FbmOutput::path;
  const auto path = gen_fbm(s);
  CHECK(bit_identical(path, cumulative_sum(inc)));
}

TEST_CASE("generators are pure functions of their spec") {
  FbmSpec f;
  f.hurst = 0.7;
  f.length = 1 << 14;
  f.seed = 1;
  CHECK(bit_identical(gen_fbm(f), gen_fbm(f)));
  FbmSpec g = f;
  g.seed = 2;
  CHECK_FALSE(bit_identical(gen_fbm(f), gen_fbm(g)));

  const CascadeSpec c{0.7, 12, 9};
  CHECK(bit_identical(gen_cascade(c), gen_cascade(c)));

  SeasonalSpec s;
  s.components = {{24.0, 2.0}};
  s.noise = f;
  CHECK(bit_identical(gen_seasonal(s), gen_seasonal(s)));
}

TEST_CASE("fbm spec validation") {
  FbmSpec s;
  s.length = 1000;
  CHECK_THROWS_AS(gen_fbm(s), InvalidConfig);
  s.length = 32;
  CHECK_THROWS_AS(gen_fbm(s), InvalidConfig);
  s.length = 64;
  s.hurst = 1.0;
  CHECK_THROWS_AS(gen_fbm(s), InvalidConfig);
  s.hurst = 0.0;
  CHECK_THROWS_AS(gen_fbm(s), InvalidConfig);
}

TEST_CASE("prefix generation keeps the seed stream") {
  FbmSpec s;
  s.hurst = 0.4;
  s.length = 2048;
  s.seed = 4;
  const auto full = gen_fbm(s);
  const auto pre = gen_fbm_prefix(s, 1632);
  REQUIRE(pre.size() == 1632);
  CHECK(std::equal(pre.begin(), pre.end(), full.begin()));
}

TEST_CASE("cascade") {
  SUBCASE("m0 = 0.5 is uniform") {
    const auto m = gen_cascade({0.5, 10, 3});
    REQUIRE(m.size() == 1024);
    for (double v : m) CHECK(v == std::ldexp(1.0, -10));
  }
  SUBCASE("total mass is exactly one") {
    for (std::size_t depth = 6; depth <= 16; ++depth) {
      const auto m = gen_cascade({0.6, depth, depth});
      CHECK(oracle::tree_sum(m) == 1.0);
      for (double v : m) CHECK(v > 0.0);
    }
  }
  SUBCASE("tau(2) for m0 = 0.6") {
    const auto m = gen_cascade({0.6, 14, 1});
    CHECK(std::abs(oracle::partition_exponent(m, 2.0) + std::log2(0.52)) < 0.05);
    CHECK(cascade_mass_exponent(0.6, 2.0) == doctest::Approx(-std::log2(0.52)));
  }
  SUBCASE("partition function exponents for q = 1, 2, 3") {
    for (double m0 : {0.6, 0.75}) {
      const auto m = gen_cascade({m0, 14, 7});
      for (double q : {1.0, 2.0, 3.0})
        CHECK(std::abs(oracle::partition_exponent(m, q) - cascade_mass_exponent(m0, q)) < 0.05);
    }
    CHECK(cascade_mass_exponent(0.6, 1.0) == doctest::Approx(0.0).scale(1e-15));
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(gen_cascade({0.4, 10, 0}), InvalidConfig);
    CHECK_THROWS_AS(gen_cascade({1.0, 10, 0}), InvalidConfig);
    CHECK_THROWS_AS(gen_cascade({0.6, 5, 0}), InvalidConfig);
  }
}

TEST_CASE("seasonal generator") {
  SUBCASE("24 h cosine peaks at bin 68") {
    SeasonalSpec s;
    s.components = {{24.0, 1.0}};
    const auto p = power_spectrum(gen_seasonal(s));
    const auto peaks = find_peaks(p, 1632);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].bin == 68);
  }
  SUBCASE("zero amplitudes reduce to the noise") {
    FbmSpec noise;
    noise.hurst = 0.6;
    noise.length = 2048;
    noise.seed = 5;
    SeasonalSpec s;
    s.length = 2048;
    s.components = {{24.0, 0.0}, {12.0, 0.0}};
    s.noise = noise;
    CHECK(bit_identical(gen_seasonal(s), gen_fbm(noise)));
  }
  SUBCASE("amplitude ratio 3 gives power ratio 9") {
    SeasonalSpec s;
    s.components = {{24.0, 3.0}, {12.0, 1.0}};
    const auto p = power_spectrum(gen_seasonal(s));
    CHECK(std::abs(p[68] / p[136] - 9.0) < 1e-9);
  }
  SUBCASE("negative amplitude rejected") {
    SeasonalSpec s;
    s.components = {{24.0, -1.0}};
    CHECK_THROWS_AS(gen_seasonal(s), InvalidConfig);
  }
}
