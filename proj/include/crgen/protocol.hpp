#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "crgen/crcap.hpp"
#include "crgen/fading.hpp"
#include "crgen/rng.hpp"
#include "crgen/source.hpp"
#include "crgen/typicality.hpp"

namespace crgen {

enum class Backend { Idealized, GaussianCodebook };

struct ProtocolConfig {
    int n = 200;            // source symbols per block
    int n_c = 0;            // channel uses per block; 0 means n
    double delta = 0.008;   // rate slack in the codebook size exponents
    double epsilon = -1.0;  // typicality slack; negative means default_epsilon(n)
    double alpha = 0.45;    // conditional error threshold used for outage accounting
    double margin = 0.1;    // idealized backend: required capacity headroom, bits per use
    Backend backend = Backend::Idealized;
    int trials = 500;
    std::uint64_t seed = 1;
    int buckets = 25;                  // gain buckets when gains are sampled
    std::vector<double> gain_states;   // optional explicit gain states, drawn uniformly
    long long max_table_entries = 1LL << 28;  // cap on words*n and channel codebook size
    bool record_trials = true;
};

struct CodebookSizes {
    long long n1 = 1;  // bins
    long long n2 = 1;  // words per bin
};

// N1 = ceil(2^{n(I(U;X)-I(U;Y)+3 delta)}), N2 = ceil(2^{n(I(U;Y)-2 delta)}),
// clamped to >= 1; rejects configurations whose tables would not fit
CodebookSizes codebook_sizes(const InfoPair& ip, int n, double delta,
                             long long max_table_entries = 1LL << 28);

struct CodebookSet {
    long long n1 = 0;
    long long n2 = 0;
    int n = 0;
    int card_u = 0;
    std::vector<int> words;  // flat [n1*n2][n]
    std::vector<int> u0;
    TypeClass word_type;

    std::span<const int> word(long long flat) const {
        return {words.data() + flat * n, static_cast<size_t>(n)};
    }
    // index value used for the reserved fallback word
    long long u0_index() const { return n1 * n2; }
};

// words of the quantized type of P_U, one independent draw per slot; the
// fallback word u0 is distinct from every type-class member
CodebookSet generate_codebooks(const JointSource& src, const AuxChannel& aux,
                               const ProtocolConfig& cfg);

struct EncodeResult {
    long long word = 0;  // flat index, u0_index() on fallback
    long long bin = 0;   // 1-based; n1 + 1 is the fallback message
};

// first word jointly typical with x in row-major scan order
EncodeResult encode(const CodebookSet& cb, std::span<const int> x_seq,
                    std::span<const double> p_ux, int nx, double eps);

// the unique typical word of the bin, else u0; bin n1 + 1 maps to u0 directly
long long decode(const CodebookSet& cb, std::span<const int> y_seq, long long bin,
                 std::span<const double> p_uy, int ny, double eps);

// message-index channel between the terminals
struct ChannelSim {
    Backend backend = Backend::Idealized;
    long long num_messages = 1;  // n1 + 1
    int n_c = 1;
    double power = 1.0;
    double noise_var = 1.0;
    double margin = 0.1;
    std::vector<std::complex<double>> codewords;  // gaussian backend, [num_messages][n_c]

    static ChannelSim make(const ProtocolConfig& cfg, long long n1, double power,
                           double noise_var, std::uint64_t seed);
    long long transmit(long long bin, double gain, Rng& rng) const;
};

struct TrialResult {
    double g = 0.0;
    long long k_index = 0;
    long long l_index = 0;
    long long bin_sent = 0;
    long long bin_decoded = 0;
    bool agreed = false;
};

struct BucketStats {
    double g_lo = 0.0;
    double g_hi = 0.0;
    long trials = 0;
    long errors = 0;
    long source_fails = 0;   // decode at the true bin already disagrees
    long channel_fails = 0;  // decoded bin differs from the sent bin
};

struct RunStats {
    long long n1 = 0;
    long long n2 = 0;
    InfoPair ip;
    std::vector<BucketStats> per_state;
    double outage_fraction = 0.0;
    double empirical_rate = 0.0;  // log2(n1*n2 + 1) / n
    bool cardinality_bound_ok = false;
    long total_trials = 0;
    long total_errors = 0;
    long total_source_fails = 0;
    std::vector<TrialResult> trials;
};

// full protocol simulation over independent gain states
RunStats run(const JointSource& src, const AuxChannel& aux, const FadingSpec& fspec,
             const ProtocolConfig& cfg);

}  // namespace crgen
