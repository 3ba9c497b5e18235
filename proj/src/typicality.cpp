#include "crgen/typicality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "crgen/rng.hpp"

namespace crgen {

double default_epsilon(int n) {
    if (n <= 200) return 0.05;
    return 0.05 * std::cbrt(200.0 / static_cast<double>(n));
}

TypeClass type_of(std::span<const int> seq, int alphabet_size) {
    if (alphabet_size < 1) throw std::invalid_argument("alphabet size must be positive");
    TypeClass t;
    t.n = static_cast<int>(seq.size());
    t.counts.assign(alphabet_size, 0);
    for (int s : seq) {
        if (s < 0 || s >= alphabet_size) throw std::invalid_argument("symbol outside alphabet");
        ++t.counts[s];
    }
    return t;
}

TypeClass quantize_to_type(std::span<const double> p, int n) {
    if (n < 1) throw std::invalid_argument("type denominator must be positive");
    if (p.empty()) throw std::invalid_argument("pmf must be nonempty");
    const int a = static_cast<int>(p.size());
    TypeClass t;
    t.n = n;
    t.counts.assign(a, 0);
    std::vector<double> remainder(a);
    int assigned = 0;
    for (int s = 0; s < a; ++s) {
        const double target = p[s] * n;
        t.counts[s] = static_cast<int>(std::floor(target));
        remainder[s] = target - t.counts[s];
        assigned += t.counts[s];
    }
    std::vector<int> order(a);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        if (remainder[lhs] != remainder[rhs]) return remainder[lhs] > remainder[rhs];
        return lhs < rhs;
    });
    for (int k = 0; k < n - assigned; ++k) ++t.counts[order[k % a]];
    if (assigned > n) {
        // rounding dust in p can overshoot; take the surplus back from the
        // smallest remainders
        for (int k = a - 1; assigned > n && k >= 0; --k) {
            const int give = std::min(t.counts[order[k]], assigned - n);
            t.counts[order[k]] -= give;
            assigned -= give;
        }
    }
    return t;
}

bool is_typical(std::span<const int> seq, std::span<const double> p, double eps) {
    const TypeClass t = type_of(seq, static_cast<int>(p.size()));
    const double n = static_cast<double>(t.n);
    for (size_t s = 0; s < p.size(); ++s) {
        if (p[s] == 0.0) {
            if (t.counts[s] != 0) return false;
        } else if (std::fabs(t.counts[s] / n - p[s]) > eps) {
            return false;
        }
    }
    return true;
}

bool is_jointly_typical_ws(std::span<const int> seq_a, std::span<const int> seq_b,
                           std::span<const double> joint, int a_size, int b_size, double eps,
                           std::span<int> counts) {
    if (seq_a.size() != seq_b.size()) throw std::invalid_argument("sequence lengths differ");
    std::fill(counts.begin(), counts.end(), 0);
    for (size_t i = 0; i < seq_a.size(); ++i) ++counts[seq_a[i] * b_size + seq_b[i]];
    const double n = static_cast<double>(seq_a.size());
    for (int c = 0; c < a_size * b_size; ++c) {
        if (joint[c] == 0.0) {
            if (counts[c] != 0) return false;
        } else if (std::fabs(counts[c] / n - joint[c]) > eps) {
            return false;
        }
    }
    return true;
}

bool is_jointly_typical(std::span<const int> seq_a, std::span<const int> seq_b,
                        std::span<const double> joint, int a_size, int b_size, double eps) {
    if (joint.size() != static_cast<size_t>(a_size) * b_size)
        throw std::invalid_argument("joint pmf size does not match alphabet sizes");
    std::vector<int> counts(static_cast<size_t>(a_size) * b_size, 0);
    return is_jointly_typical_ws(seq_a, seq_b, joint, a_size, b_size, eps, counts);
}

std::vector<int> sample_from_type(const TypeClass& type, std::uint64_t seed) {
    std::vector<int> seq;
    seq.reserve(type.n);
    for (size_t s = 0; s < type.counts.size(); ++s)
        seq.insert(seq.end(), type.counts[s], static_cast<int>(s));
    if (static_cast<int>(seq.size()) != type.n)
        throw std::invalid_argument("type counts do not sum to n");
    Rng rng(seed);
    for (size_t i = seq.size(); i > 1; --i) {
        const size_t j = rng.next_below(i);
        std::swap(seq[i - 1], seq[j]);
    }
    return seq;
}

}  // namespace crgen
