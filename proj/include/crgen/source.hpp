#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace crgen {

// Discrete memoryless pair source (X, Y) given by its joint pmf.
class JointSource {
public:
    // joint is row-major: joint[x * ny + y]. Entries must be nonnegative and
    // sum to 1 within 1e-12.
    JointSource(int nx, int ny, std::vector<double> joint);

    // doubly symmetric binary source: X uniform, Y = X flipped with prob p
    static JointSource dsbs(double p);

    // rescales nonnegative weights (positive total) to a pmf; for user data
    // measured in counts or unnormalized scores
    static JointSource normalized(int nx, int ny, std::vector<double> weights);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double p(int x, int y) const { return joint_[static_cast<size_t>(x) * ny_ + y]; }
    const std::vector<double>& joint() const { return joint_; }
    const std::vector<double>& marginal_x() const { return px_; }
    const std::vector<double>& marginal_y() const { return py_; }

private:
    int nx_;
    int ny_;
    std::vector<double> joint_;
    std::vector<double> px_;
    std::vector<double> py_;
};

// -sum(p log2 p), zero-mass entries skipped
double shannon_entropy(std::span<const double> p);

double entropy_x(const JointSource& src);
double entropy_y(const JointSource& src);
// H(X|Y) = H(X,Y) - H(Y), clamped at 0
double conditional_entropy_x_given_y(const JointSource& src);
// I(X;Y) = H(X) + H(Y) - H(X,Y), clamped at 0
double mutual_info_xy(const JointSource& src);

struct SourceSample {
    std::vector<int> x_seq;
    std::vector<int> y_seq;
    std::uint64_t seed = 0;
};

// n i.i.d. draws from the joint pmf
SourceSample sample(const JointSource& src, int n, std::uint64_t seed);

}  // namespace crgen
