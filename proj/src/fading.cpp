#include "crgen/fading.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crgen/rng.hpp"

namespace crgen {

GainDistribution make_constant_gain(double g0) {
    if (g0 < 0.0 || !std::isfinite(g0)) throw std::invalid_argument("constant gain must be nonnegative");
    return ConstantGain{g0};
}

GainDistribution make_rayleigh_gain(double scale) {
    if (scale <= 0.0 || !std::isfinite(scale)) throw std::invalid_argument("rayleigh scale must be positive");
    return RayleighGain{scale};
}

GainDistribution make_empirical_gain(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("empirical gain needs at least one sample");
    for (double v : samples)
        if (v < 0.0 || !std::isfinite(v)) throw std::invalid_argument("gain samples must be nonnegative");
    std::sort(samples.begin(), samples.end());
    return EmpiricalGain{std::move(samples)};
}

void validate(const FadingSpec& spec) {
    if (spec.power <= 0.0 || !std::isfinite(spec.power)) throw std::invalid_argument("power must be positive");
    if (spec.noise_var <= 0.0 || !std::isfinite(spec.noise_var))
        throw std::invalid_argument("noise variance must be positive");
    if (spec.eta < 0.0 || spec.eta >= 1.0) throw std::invalid_argument("eta must be in [0, 1)");
    if (std::holds_alternative<EmpiricalGain>(spec.gain) &&
        std::get<EmpiricalGain>(spec.gain).samples.empty())
        throw std::invalid_argument("empirical gain needs at least one sample");
}

double cdf_below(const GainDistribution& gain, double gamma) {
    if (std::holds_alternative<ConstantGain>(gain)) {
        return gamma > std::get<ConstantGain>(gain).g0 ? 1.0 : 0.0;
    }
    if (std::holds_alternative<RayleighGain>(gain)) {
        if (gamma <= 0.0) return 0.0;
        const double s = std::get<RayleighGain>(gain).scale;
        return -std::expm1(-gamma * gamma / (2.0 * s * s));
    }
    const auto& samples = std::get<EmpiricalGain>(gain).samples;
    const auto it = std::lower_bound(samples.begin(), samples.end(), gamma);
    return static_cast<double>(it - samples.begin()) / static_cast<double>(samples.size());
}

double gamma0(const GainDistribution& gain, double eta) {
    if (eta < 0.0 || eta >= 1.0) throw std::invalid_argument("eta must be in [0, 1)");
    if (std::holds_alternative<ConstantGain>(gain)) {
        return std::get<ConstantGain>(gain).g0;
    }
    if (std::holds_alternative<RayleighGain>(gain)) {
        const double s = std::get<RayleighGain>(gain).scale;
        return s * std::sqrt(-2.0 * std::log1p(-eta));
    }
    // step cdf: the largest sample v with (#samples strictly below v)/m <= eta.
    // The candidate predicate is monotone along the sorted samples, so binary
    // search over positions works; comparisons reuse cdf_below so the quantile
    // contract holds exactly.
    const auto& samples = std::get<EmpiricalGain>(gain).samples;
    size_t lo = 0, hi = samples.size() - 1;
    while (lo < hi) {
        const size_t mid = (lo + hi + 1) / 2;
        if (cdf_below(gain, samples[mid]) <= eta)
            lo = mid;
        else
            hi = mid - 1;
    }
    return samples[lo];
}

double gamma0_by_bisection(const GainDistribution& gain, double eta) {
    if (eta < 0.0 || eta >= 1.0) throw std::invalid_argument("eta must be in [0, 1)");
    double hi = 1.0;
    while (cdf_below(gain, hi) <= eta) {
        hi *= 2.0;
        if (hi > 1e300) return hi;
    }
    double lo = 0.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (cdf_below(gain, mid) <= eta)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

double outage_capacity(const FadingSpec& spec) {
    validate(spec);
    const double g = gamma0(spec.gain, spec.eta);
    return std::log2(1.0 + spec.power * g * g / spec.noise_var);
}

std::vector<double> sample_gain(const GainDistribution& gain, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample count must be positive");
    std::vector<double> out(n);
    Rng rng(seed);
    if (std::holds_alternative<ConstantGain>(gain)) {
        std::fill(out.begin(), out.end(), std::get<ConstantGain>(gain).g0);
    } else if (std::holds_alternative<RayleighGain>(gain)) {
        const double s = std::get<RayleighGain>(gain).scale;
        for (double& v : out) {
            const double u = rng.next_double();
            v = s * std::sqrt(-2.0 * std::log1p(-u));
        }
    } else {
        const auto& samples = std::get<EmpiricalGain>(gain).samples;
        for (double& v : out) v = samples[rng.next_below(samples.size())];
    }
    return out;
}

}  // namespace crgen
