#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace crgen {

// Empirical symbol counts of a length-n sequence over {0, ..., a-1}.
struct TypeClass {
    std::vector<int> counts;
    int n = 0;
};

struct TypicalityParams {
    double epsilon = 0.05;
};

// 0.05 up to n = 200, then shrinking like n^(-1/3)
double default_epsilon(int n);

TypeClass type_of(std::span<const int> seq, int alphabet_size);

// integer type with denominator n closest to p in total variation; ties go to
// the larger remainder, then the smaller symbol
TypeClass quantize_to_type(std::span<const double> p, int n);

// per-symbol count test: |count(a)/n - p(a)| <= eps for all a, and zero-mass
// symbols may not occur at all
bool is_typical(std::span<const int> seq, std::span<const double> p, double eps);

// same test on pair counts against a row-major joint pmf p[a * b_size + b]
bool is_jointly_typical(std::span<const int> seq_a, std::span<const int> seq_b,
                        std::span<const double> joint, int a_size, int b_size, double eps);

// workspace variant for hot loops; counts must have size a_size * b_size
bool is_jointly_typical_ws(std::span<const int> seq_a, std::span<const int> seq_b,
                           std::span<const double> joint, int a_size, int b_size, double eps,
                           std::span<int> counts);

// uniform draw from the type class (random arrangement of the count multiset)
std::vector<int> sample_from_type(const TypeClass& type, std::uint64_t seed);

}  // namespace crgen
