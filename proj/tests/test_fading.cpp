#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "crgen/fading.hpp"
#include "crgen/rng.hpp"

using namespace crgen;

namespace {
const double kInvSqrt2 = 0.70710678118654752;
}

TEST_CASE("rayleigh cdf closed form") {
    const GainDistribution g = make_rayleigh_gain(kInvSqrt2);
    // |G|^2 ~ Exp(1): P[|G| < 0.5] = 1 - exp(-0.25)
    CHECK(cdf_below(g, 0.5) == doctest::Approx(0.22119921692859512).epsilon(1e-12));
    CHECK(cdf_below(g, 0.0) == 0.0);
    CHECK(cdf_below(g, -1.0) == 0.0);
}

TEST_CASE("rayleigh quantile closed form") {
    const GainDistribution g = make_rayleigh_gain(kInvSqrt2);
    // sqrt(-ln 0.9)
    CHECK(gamma0(g, 0.1) == doctest::Approx(0.32459284597450128).epsilon(1e-9));
    CHECK(gamma0(g, 0.0) == 0.0);
    for (double eta : {0.01, 0.1, 0.5, 0.9}) {
        CHECK(gamma0(g, eta) == doctest::Approx(std::sqrt(-std::log1p(-eta))).epsilon(1e-12));
        CHECK(gamma0_by_bisection(g, eta) == doctest::Approx(gamma0(g, eta)).epsilon(1e-9));
    }
}

TEST_CASE("constant gain quantile and capacity") {
    const GainDistribution g = make_constant_gain(1.0);
    CHECK(gamma0(g, 0.0) == 1.0);
    CHECK(gamma0(g, 0.5) == 1.0);
    CHECK(gamma0_by_bisection(g, 0.25) == doctest::Approx(1.0).epsilon(1e-9));
    FadingSpec spec{g, 10.0, 1.0, 0.0};
    CHECK(outage_capacity(spec) == doctest::Approx(std::log2(11.0)).epsilon(1e-12));
    spec.power = 1.0;
    CHECK(outage_capacity(spec) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cdf is strict at atoms") {
    const GainDistribution g = make_constant_gain(1.0);
    CHECK(cdf_below(g, 1.0) == 0.0);
    CHECK(cdf_below(g, 1.000001) == 1.0);
    FadingSpec zero{make_rayleigh_gain(kInvSqrt2), 5.0, 1.0, 0.0};
    CHECK(outage_capacity(zero) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("gain sampling") {
    CHECK(sample_gain(make_constant_gain(2.0), 3, 1) == std::vector<double>{2.0, 2.0, 2.0});

    const std::vector<double> ray = sample_gain(make_rayleigh_gain(kInvSqrt2), 1000000, 2);
    double mean_sq = 0.0;
    for (double v : ray) mean_sq += v * v / ray.size();
    CHECK(std::abs(mean_sq - 1.0) <= 0.01);

    const GainDistribution emp = make_empirical_gain({0.5, 1.0, 1.5, 2.0});
    const std::vector<double> draws = sample_gain(emp, 1000000, 4);
    const GainDistribution redrawn = make_empirical_gain(draws);
    double sup = 0.0;
    for (double x = 0.0; x <= 2.5; x += 0.01)
        sup = std::max(sup, std::abs(cdf_below(redrawn, x) - cdf_below(emp, x)));
    CHECK(sup <= 0.01);
}

TEST_CASE("empirical gain quantile") {
    const GainDistribution g = make_empirical_gain({1.5, 0.5, 2.0, 1.0});
    CHECK(gamma0(g, 0.25) == 1.0);
    CHECK(cdf_below(g, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(gamma0(g, 0.0) == 0.5);
    CHECK(gamma0(g, 0.9) == 2.0);
}

TEST_CASE("quantile contract on random empirical models with ties") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        Rng rng(seed);
        const int m = 1 + static_cast<int>(rng.next_below(50));
        std::vector<double> samples(m);
        for (auto& v : samples) v = 0.25 * static_cast<double>(rng.next_below(8));
        const GainDistribution g = make_empirical_gain(samples);
        for (int k = 0; k < 20; ++k) {
            const double eta = 0.05 * k;
            const double q = gamma0(g, eta);
            CHECK(cdf_below(g, q) <= eta);
            CHECK(cdf_below(g, q + 1e-6) > eta);
        }
    }
}

TEST_CASE("monte carlo consistency of the rayleigh model") {
    const GainDistribution g = make_rayleigh_gain(kInvSqrt2);
    const std::vector<double> draws = sample_gain(g, 1000000, 3);
    const GainDistribution emp = make_empirical_gain(draws);
    for (double x : {0.3, 0.7, 1.2}) {
        CHECK(std::abs(cdf_below(emp, x) - cdf_below(g, x)) <= 5e-3);
    }
    CHECK(std::abs(gamma0(emp, 0.1) - gamma0(g, 0.1)) <= 5e-3);
}

TEST_CASE("monotone in eta and power") {
    const GainDistribution g = make_rayleigh_gain(1.3);
    double prev = -1.0;
    for (int k = 0; k < 19; ++k) {
        const double q = gamma0(g, 0.05 * k);
        CHECK(q >= prev);
        prev = q;
    }
    FadingSpec spec{g, 1.0, 1.0, 0.2};
    double prev_c = -1.0;
    for (double p : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        spec.power = p;
        const double c = outage_capacity(spec);
        CHECK(c >= prev_c);
        prev_c = c;
    }
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(make_rayleigh_gain(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_constant_gain(-0.5), std::invalid_argument);
    CHECK_THROWS_AS(make_empirical_gain({}), std::invalid_argument);
    CHECK_THROWS_AS(make_empirical_gain({0.5, -0.1}), std::invalid_argument);
    FadingSpec bad{make_constant_gain(1.0), 1.0, 1.0, 1.0};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad.eta = 0.5;
    bad.noise_var = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}
