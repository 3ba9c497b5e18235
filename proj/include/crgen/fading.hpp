#pragma once

#include <cstdint>
#include <variant>
#include <vector>

namespace crgen {

// Deterministic channel gain |G| = g0.
struct ConstantGain {
    double g0 = 1.0;
};

// Rayleigh magnitude with scale sigma: |G|^2 is exponential with mean
// 2*sigma^2 (sigma = 1/sqrt(2) gives |G|^2 ~ Exp(1)).
struct RayleighGain {
    double scale = 1.0;
};

// Gain magnitudes given by a finite sample set; the distribution is the
// empirical one (each sample mass 1/m). Samples are kept sorted.
struct EmpiricalGain {
    std::vector<double> samples;
};

using GainDistribution = std::variant<ConstantGain, RayleighGain, EmpiricalGain>;

GainDistribution make_constant_gain(double g0);
GainDistribution make_rayleigh_gain(double scale);
GainDistribution make_empirical_gain(std::vector<double> samples);

// Slow fading scenario: gain model, transmit power, noise variance and the
// allowed outage fraction eta.
struct FadingSpec {
    GainDistribution gain;
    double power = 1.0;
    double noise_var = 1.0;
    double eta = 0.1;
};

void validate(const FadingSpec& spec);

// P[|G| < gamma], strictly below
double cdf_below(const GainDistribution& gain, double gamma);

// largest gain threshold whose outage probability still stays within eta:
// sup{gamma : P[|G| < gamma] <= eta}, eta in [0, 1)
double gamma0(const GainDistribution& gain, double eta);

// generic quantile search on cdf_below, absolute tolerance 1e-12 on gamma
double gamma0_by_bisection(const GainDistribution& gain, double eta);

// log2(1 + P * gamma0^2 / noise_var)
double outage_capacity(const FadingSpec& spec);

std::vector<double> sample_gain(const GainDistribution& gain, int n, std::uint64_t seed);

}  // namespace crgen
