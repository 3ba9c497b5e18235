#include "crgen/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "crgen/errors.hpp"

namespace crgen {

namespace {

// ceiling of 2^e with a relative snap so that exponents representing exact
// integers do not round up past them
long long ceil_exp2(double e) {
    if (e <= 0.0) return 1;
    const double v = std::exp2(e);
    const double snapped = v - std::max(1e-9, v * 1e-12);
    const double c = std::ceil(snapped);
    return c < 1.0 ? 1 : static_cast<long long>(c);
}

std::vector<double> joint_ux(const JointSource& src, const AuxChannel& aux) {
    std::vector<double> p(static_cast<size_t>(aux.card_u) * src.nx(), 0.0);
    for (int u = 0; u < aux.card_u; ++u)
        for (int x = 0; x < src.nx(); ++x) p[u * src.nx() + x] = src.marginal_x()[x] * aux.at(u, x);
    return p;
}

std::vector<double> joint_uy(const JointSource& src, const AuxChannel& aux) {
    std::vector<double> p(static_cast<size_t>(aux.card_u) * src.ny(), 0.0);
    for (int u = 0; u < aux.card_u; ++u)
        for (int y = 0; y < src.ny(); ++y) {
            double acc = 0.0;
            for (int x = 0; x < src.nx(); ++x) acc += src.p(x, y) * aux.at(u, x);
            p[u * src.ny() + y] = acc;
        }
    return p;
}

std::vector<double> marginal_u(const JointSource& src, const AuxChannel& aux) {
    std::vector<double> p(aux.card_u, 0.0);
    for (int u = 0; u < aux.card_u; ++u)
        for (int x = 0; x < src.nx(); ++x) p[u] += src.marginal_x()[x] * aux.at(u, x);
    return p;
}

}  // namespace

CodebookSizes codebook_sizes(const InfoPair& ip, int n, double delta, long long max_table_entries) {
    if (n < 1) throw std::invalid_argument("block length must be positive");
    if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
    const double e1 = n * (ip.ix - ip.iy + 3.0 * delta);
    const double e2 = n * (ip.iy - 2.0 * delta);
    if (e1 > 62.0 || e2 > 62.0)
        throw ResourceCapError("codebook size exponent " + std::to_string(std::max(e1, e2)) +
                               " exceeds the representable cap");
    CodebookSizes sizes;
    sizes.n1 = ceil_exp2(e1);
    sizes.n2 = ceil_exp2(e2);
    const double total = static_cast<double>(sizes.n1) * static_cast<double>(sizes.n2) *
                         static_cast<double>(n);
    if (total > static_cast<double>(max_table_entries))
        throw ResourceCapError("codebook table of " + std::to_string(total) +
                               " entries exceeds the configured cap");
    return sizes;
}

CodebookSet generate_codebooks(const JointSource& src, const AuxChannel& aux,
                               const ProtocolConfig& cfg) {
    if (aux.card_u < 2) throw std::invalid_argument("protocol needs at least two auxiliary symbols");
    const InfoPair ip = info_pair(aux, src);
    const CodebookSizes sizes = codebook_sizes(ip, cfg.n, cfg.delta, cfg.max_table_entries);

    CodebookSet cb;
    cb.n1 = sizes.n1;
    cb.n2 = sizes.n2;
    cb.n = cfg.n;
    cb.card_u = aux.card_u;
    const std::vector<double> p_u = marginal_u(src, aux);
    cb.word_type = quantize_to_type(p_u, cfg.n);

    const std::uint64_t cb_seed = split_seed(cfg.seed, 0xC0DEB00CULL);
    cb.words.resize(static_cast<size_t>(cb.n1) * cb.n2 * cb.n);
    for (long long flat = 0; flat < cb.n1 * cb.n2; ++flat) {
        const std::vector<int> w = sample_from_type(cb.word_type, split_seed(cb_seed, flat));
        std::copy(w.begin(), w.end(), cb.words.begin() + flat * cb.n);
    }

    if (cb.word_type.counts[0] == cb.n) {
        // the all-first-symbol sequence is the single member of this type
        // class, so fall back to the lexicographically smallest other sequence
        cb.u0.assign(cfg.n, 0);
        cb.u0.back() = 1;
    } else {
        cb.u0.assign(cfg.n, 0);
    }
    return cb;
}

EncodeResult encode(const CodebookSet& cb, std::span<const int> x_seq,
                    std::span<const double> p_ux, int nx, double eps) {
    if (static_cast<int>(x_seq.size()) != cb.n) throw std::invalid_argument("x sequence length mismatch");
    std::vector<int> counts(static_cast<size_t>(cb.card_u) * nx);
    for (long long flat = 0; flat < cb.n1 * cb.n2; ++flat) {
        if (is_jointly_typical_ws(cb.word(flat), x_seq, p_ux, cb.card_u, nx, eps, counts))
            return {flat, flat / cb.n2 + 1};
    }
    return {cb.u0_index(), cb.n1 + 1};
}

long long decode(const CodebookSet& cb, std::span<const int> y_seq, long long bin,
                 std::span<const double> p_uy, int ny, double eps) {
    if (static_cast<int>(y_seq.size()) != cb.n) throw std::invalid_argument("y sequence length mismatch");
    if (bin < 1 || bin > cb.n1 + 1) throw std::invalid_argument("bin index out of range");
    if (bin == cb.n1 + 1) return cb.u0_index();
    std::vector<int> counts(static_cast<size_t>(cb.card_u) * ny);
    long long match = -1;
    for (long long j = 0; j < cb.n2; ++j) {
        const long long flat = (bin - 1) * cb.n2 + j;
        if (is_jointly_typical_ws(cb.word(flat), y_seq, p_uy, cb.card_u, ny, eps, counts)) {
            if (match >= 0) return cb.u0_index();  // ambiguous bin
            match = flat;
        }
    }
    return match >= 0 ? match : cb.u0_index();
}

ChannelSim ChannelSim::make(const ProtocolConfig& cfg, long long n1, double power,
                            double noise_var, std::uint64_t seed) {
    ChannelSim ch;
    ch.backend = cfg.backend;
    ch.num_messages = n1 + 1;
    ch.n_c = cfg.n_c > 0 ? cfg.n_c : cfg.n;
    ch.power = power;
    ch.noise_var = noise_var;
    ch.margin = cfg.margin;
    if (ch.backend == Backend::GaussianCodebook) {
        const double total = static_cast<double>(ch.num_messages) * ch.n_c;
        if (total > static_cast<double>(cfg.max_table_entries))
            throw ResourceCapError("channel codebook of " + std::to_string(total) +
                                   " symbols exceeds the configured cap");
        Rng rng(split_seed(seed, 0x57A7E11EULL));
        ch.codewords.resize(static_cast<size_t>(ch.num_messages) * ch.n_c);
        for (long long m = 0; m < ch.num_messages; ++m) {
            double energy = 0.0;
            for (int i = 0; i < ch.n_c; ++i) {
                const std::complex<double> v(rng.next_gaussian(), rng.next_gaussian());
                ch.codewords[m * ch.n_c + i] = v;
                energy += std::norm(v);
            }
            const double scale = std::sqrt(ch.n_c * power / std::max(energy, 1e-300));
            for (int i = 0; i < ch.n_c; ++i) ch.codewords[m * ch.n_c + i] *= scale;
        }
    }
    return ch;
}

long long ChannelSim::transmit(long long bin, double gain, Rng& rng) const {
    if (bin < 1 || bin > num_messages) throw std::invalid_argument("message index out of range");
    if (num_messages == 1) return bin;
    if (backend == Backend::Idealized) {
        const double rate = std::log2(static_cast<double>(num_messages)) / n_c;
        const double cap = std::log2(1.0 + gain * gain * power / noise_var);
        if (rate <= cap - margin) return bin;
        const long long r = static_cast<long long>(rng.next_below(num_messages - 1));
        return r + 1 + (r + 1 >= bin ? 1 : 0);
    }
    // gaussian codewords through z = g t + noise, minimum distance decoding
    // with the realized gain known at the receiver
    const std::complex<double>* sent = &codewords[(bin - 1) * n_c];
    const double sigma = std::sqrt(noise_var / 2.0);
    std::vector<std::complex<double>> z(n_c);
    for (int i = 0; i < n_c; ++i)
        z[i] = gain * sent[i] + std::complex<double>(sigma * rng.next_gaussian(), sigma * rng.next_gaussian());
    long long best = 1;
    double best_d = std::numeric_limits<double>::infinity();
    for (long long m = 0; m < num_messages; ++m) {
        double d = 0.0;
        for (int i = 0; i < n_c; ++i) d += std::norm(z[i] - gain * codewords[m * n_c + i]);
        if (d < best_d) {
            best_d = d;
            best = m + 1;
        }
    }
    return best;
}

RunStats run(const JointSource& src, const AuxChannel& aux, const FadingSpec& fspec,
             const ProtocolConfig& cfg) {
    validate(fspec);
    if (cfg.trials < 1) throw std::invalid_argument("trial count must be positive");
    if (cfg.alpha <= 0.0 || cfg.alpha >= 1.0) throw std::invalid_argument("alpha must be in (0, 1)");

    const double eps = cfg.epsilon < 0.0 ? default_epsilon(cfg.n) : cfg.epsilon;
    const CodebookSet cb = generate_codebooks(src, aux, cfg);
    const ChannelSim ch = ChannelSim::make(cfg, cb.n1, fspec.power, fspec.noise_var, cfg.seed);
    const std::vector<double> p_ux = joint_ux(src, aux);
    const std::vector<double> p_uy = joint_uy(src, aux);

    RunStats stats;
    stats.n1 = cb.n1;
    stats.n2 = cb.n2;
    stats.ip = info_pair(aux, src);
    stats.empirical_rate =
        std::log2(static_cast<double>(cb.n1) * static_cast<double>(cb.n2) + 1.0) / cfg.n;
    stats.cardinality_bound_ok = stats.empirical_rate <= 2.0 * (entropy_x(src) + 1.0);

    // gain buckets: one per explicit state, otherwise quantile cells of the
    // gain model
    std::vector<double> edges;
    if (cfg.gain_states.empty()) {
        const int nb = std::max(cfg.buckets, 1);
        stats.per_state.resize(nb);
        for (int b = 1; b < nb; ++b)
            edges.push_back(gamma0(fspec.gain, static_cast<double>(b) / nb));
        for (int b = 0; b < nb; ++b) {
            stats.per_state[b].g_lo = b == 0 ? 0.0 : edges[b - 1];
            stats.per_state[b].g_hi =
                b == nb - 1 ? std::numeric_limits<double>::infinity() : edges[b];
        }
    } else {
        stats.per_state.resize(cfg.gain_states.size());
        for (size_t b = 0; b < cfg.gain_states.size(); ++b) {
            stats.per_state[b].g_lo = cfg.gain_states[b];
            stats.per_state[b].g_hi = cfg.gain_states[b];
        }
    }

    if (cfg.record_trials) stats.trials.reserve(cfg.trials);
    for (int t = 0; t < cfg.trials; ++t) {
        const std::uint64_t ts = split_seed(cfg.seed, 1000003ULL * (t + 1));
        double g;
        size_t bucket;
        if (cfg.gain_states.empty()) {
            g = sample_gain(fspec.gain, 1, split_seed(ts, 2))[0];
            bucket = std::upper_bound(edges.begin(), edges.end(), g) - edges.begin();
        } else {
            Rng pick(split_seed(ts, 2));
            bucket = pick.next_below(cfg.gain_states.size());
            g = cfg.gain_states[bucket];
        }

        const SourceSample xy = sample(src, cfg.n, split_seed(ts, 1));
        const EncodeResult enc = encode(cb, xy.x_seq, p_ux, src.nx(), eps);
        Rng chr(split_seed(ts, 3));
        const long long bin_out = ch.transmit(enc.bin, g, chr);
        const long long l = decode(cb, xy.y_seq, bin_out, p_uy, src.ny(), eps);
        const long long l_ideal = bin_out == enc.bin ? l : decode(cb, xy.y_seq, enc.bin, p_uy, src.ny(), eps);

        BucketStats& bs = stats.per_state[bucket];
        ++bs.trials;
        ++stats.total_trials;
        const bool agreed = l == enc.word;
        if (!agreed) {
            ++bs.errors;
            ++stats.total_errors;
        }
        if (l_ideal != enc.word) {
            ++bs.source_fails;
            ++stats.total_source_fails;
        }
        if (bin_out != enc.bin) ++bs.channel_fails;
        if (cfg.record_trials)
            stats.trials.push_back({g, enc.word, l, enc.bin, bin_out, agreed});
    }

    double outage = 0.0;
    for (const BucketStats& bs : stats.per_state) {
        if (bs.trials == 0) continue;
        const double err = static_cast<double>(bs.errors) / bs.trials;
        if (err > cfg.alpha) outage += static_cast<double>(bs.trials) / stats.total_trials;
    }
    stats.outage_fraction = outage;
    return stats;
}

}  // namespace crgen
