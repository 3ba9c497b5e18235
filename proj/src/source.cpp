#include "crgen/source.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "crgen/rng.hpp"

namespace crgen {

JointSource::JointSource(int nx, int ny, std::vector<double> joint)
    : nx_(nx), ny_(ny), joint_(std::move(joint)) {
    if (nx_ < 1 || ny_ < 1) throw std::invalid_argument("alphabet sizes must be positive");
    if (joint_.size() != static_cast<size_t>(nx_) * ny_)
        throw std::invalid_argument("joint pmf size does not match alphabet sizes");
    double sum = 0.0;
    for (double v : joint_) {
        if (v < 0.0 || !std::isfinite(v)) throw std::invalid_argument("joint pmf entries must be nonnegative");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-12) throw std::invalid_argument("joint pmf must sum to 1");
    px_.assign(nx_, 0.0);
    py_.assign(ny_, 0.0);
    for (int x = 0; x < nx_; ++x)
        for (int y = 0; y < ny_; ++y) {
            px_[x] += p(x, y);
            py_[y] += p(x, y);
        }
}

JointSource JointSource::normalized(int nx, int ny, std::vector<double> weights) {
    double sum = 0.0;
    for (double v : weights) {
        if (v < 0.0 || !std::isfinite(v)) throw std::invalid_argument("weights must be nonnegative");
        sum += v;
    }
    if (sum <= 0.0) throw std::invalid_argument("weights must have positive total");
    for (double& v : weights) v /= sum;
    return JointSource(nx, ny, std::move(weights));
}

JointSource JointSource::dsbs(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("dsbs flip probability must be in [0,1]");
    const double agree = 0.5 * (1.0 - p);
    const double differ = 0.5 * p;
    return JointSource(2, 2, {agree, differ, differ, agree});
}

double shannon_entropy(std::span<const double> p) {
    double h = 0.0;
    for (double v : p) {
        if (v > 0.0) h -= v * std::log2(v);
    }
    return h;
}

double entropy_x(const JointSource& src) { return shannon_entropy(src.marginal_x()); }

double entropy_y(const JointSource& src) { return shannon_entropy(src.marginal_y()); }

double conditional_entropy_x_given_y(const JointSource& src) {
    const double h = shannon_entropy(src.joint()) - entropy_y(src);
    return h > 0.0 ? h : 0.0;
}

double mutual_info_xy(const JointSource& src) {
    const double i = entropy_x(src) + entropy_y(src) - shannon_entropy(src.joint());
    return i > 0.0 ? i : 0.0;
}

SourceSample sample(const JointSource& src, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample length must be positive");
    std::vector<double> cdf(src.joint().size());
    std::partial_sum(src.joint().begin(), src.joint().end(), cdf.begin());
    cdf.back() = 1.0;

    Rng rng(seed);
    SourceSample out;
    out.seed = seed;
    out.x_seq.resize(n);
    out.y_seq.resize(n);
    const int ny = src.ny();
    for (int i = 0; i < n; ++i) {
        const double u = rng.next_double();
        size_t lo = 0, hi = cdf.size() - 1;
        while (lo < hi) {
            const size_t mid = (lo + hi) / 2;
            if (cdf[mid] > u)
                hi = mid;
            else
                lo = mid + 1;
        }
        out.x_seq[i] = static_cast<int>(lo) / ny;
        out.y_seq[i] = static_cast<int>(lo) % ny;
    }
    return out;
}

}  // namespace crgen
