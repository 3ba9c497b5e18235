#include "crgen/crcap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crgen/errors.hpp"
#include "crgen/rng.hpp"

namespace crgen {

namespace {

constexpr double kLogFloor = 1e-300;

double safe_log2_ratio(double num, double den) {
    return std::log2(std::max(num, kLogFloor) / std::max(den, kLogFloor));
}

void check_dims(const AuxChannel& aux, const JointSource& src) {
    if (aux.card_x != src.nx()) throw std::invalid_argument("aux channel input size does not match source");
    if (aux.card_u < 1) throw std::invalid_argument("aux channel output size must be positive");
    if (aux.w.size() != static_cast<size_t>(aux.card_u) * aux.card_x)
        throw std::invalid_argument("aux channel matrix size mismatch");
}

struct Evaluator {
    const JointSource* src;
    int nu, nx, ny;
    std::vector<double> p_u;   // nu
    std::vector<double> p_uy;  // nu * ny

    explicit Evaluator(const JointSource& s, int card_u)
        : src(&s), nu(card_u), nx(s.nx()), ny(s.ny()), p_u(card_u), p_uy(static_cast<size_t>(card_u) * s.ny()) {}

    // fills p_u/p_uy and returns the two mutual informations
    InfoPair eval(const AuxChannel& aux) {
        const auto& px = src->marginal_x();
        const auto& py = src->marginal_y();
        std::fill(p_u.begin(), p_u.end(), 0.0);
        std::fill(p_uy.begin(), p_uy.end(), 0.0);
        for (int u = 0; u < nu; ++u)
            for (int x = 0; x < nx; ++x) {
                const double wux = aux.at(u, x);
                if (wux == 0.0) continue;
                p_u[u] += px[x] * wux;
                for (int y = 0; y < ny; ++y) p_uy[u * ny + y] += src->p(x, y) * wux;
            }
        InfoPair out;
        for (int u = 0; u < nu; ++u) {
            if (p_u[u] <= 0.0) continue;
            for (int x = 0; x < nx; ++x) {
                const double m = px[x] * aux.at(u, x);
                if (m > 0.0) out.ix += m * std::log2(aux.at(u, x) / p_u[u]);
            }
            for (int y = 0; y < ny; ++y) {
                const double m = p_uy[u * ny + y];
                if (m > 0.0 && py[y] > 0.0) out.iy += m * std::log2(m / (p_u[u] * py[y]));
            }
        }
        if (out.ix < 0.0) out.ix = 0.0;
        if (out.iy < 0.0) out.iy = 0.0;
        return out;
    }

    // gradients of I(U;X) and I(U;Y) in the channel entries; eval() must have
    // run on the same channel first
    void grad(const AuxChannel& aux, std::vector<double>& gx, std::vector<double>& gy) {
        const auto& px = src->marginal_x();
        const auto& py = src->marginal_y();
        for (int u = 0; u < nu; ++u)
            for (int x = 0; x < nx; ++x) {
                gx[u * nx + x] = px[x] * safe_log2_ratio(aux.at(u, x), p_u[u]);
                double acc = 0.0;
                for (int y = 0; y < ny; ++y) {
                    const double pxy = src->p(x, y);
                    if (pxy > 0.0)
                        acc += pxy * safe_log2_ratio(p_uy[u * ny + y], p_u[u] * py[y]);
                }
                gy[u * nx + x] = acc;
            }
    }
};

// euclidean projection of one column onto the probability simplex
void project_column(AuxChannel& aux, int x, std::vector<double>& buf) {
    const int nu = aux.card_u;
    buf.resize(nu);
    for (int u = 0; u < nu; ++u) buf[u] = aux.at(u, x);
    std::sort(buf.begin(), buf.end(), std::greater<double>());
    double csum = 0.0, tau = 0.0;
    int rho = 0;
    for (int j = 0; j < nu; ++j) {
        csum += buf[j];
        const double t = (csum - 1.0) / (j + 1);
        if (buf[j] - t > 0.0) {
            rho = j + 1;
            tau = t;
        }
    }
    double total = 0.0;
    for (int u = 0; u < nu; ++u) {
        const double v = std::max(aux.at(u, x) - tau, 0.0);
        aux.at(u, x) = v;
        total += v;
    }
    // guard against degenerate all-zero columns
    if (total <= 0.0) {
        for (int u = 0; u < nu; ++u) aux.at(u, x) = 1.0 / nu;
    }
    (void)rho;
}

AuxChannel mix(const AuxChannel& a, const AuxChannel& b, double t) {
    AuxChannel out = a;
    for (size_t i = 0; i < out.w.size(); ++i) out.w[i] = (1.0 - t) * a.w[i] + t * b.w[i];
    return out;
}

struct Candidate {
    double value = -1.0;
    double excess = 0.0;
    AuxChannel aux;
};

}  // namespace

AuxChannel identity_aux(int card_x, int card_u) {
    if (card_u < card_x) throw std::invalid_argument("identity aux needs card_u >= card_x");
    AuxChannel aux{card_u, card_x, std::vector<double>(static_cast<size_t>(card_u) * card_x, 0.0)};
    for (int x = 0; x < card_x; ++x) aux.at(x, x) = 1.0;
    return aux;
}

AuxChannel constant_aux(int card_x, int card_u) {
    if (card_u < 1) throw std::invalid_argument("aux needs card_u >= 1");
    AuxChannel aux{card_u, card_x, std::vector<double>(static_cast<size_t>(card_u) * card_x, 0.0)};
    for (int x = 0; x < card_x; ++x) aux.at(0, x) = 1.0;
    return aux;
}

InfoPair info_pair(const AuxChannel& aux, const JointSource& src) {
    check_dims(aux, src);
    for (int x = 0; x < aux.card_x; ++x) {
        double col = 0.0;
        for (int u = 0; u < aux.card_u; ++u) {
            if (aux.at(u, x) < 0.0) throw std::invalid_argument("aux channel entries must be nonnegative");
            col += aux.at(u, x);
        }
        if (std::fabs(col - 1.0) > 1e-9) throw std::invalid_argument("aux channel columns must sum to 1");
    }
    Evaluator ev(src, aux.card_u);
    return ev.eval(aux);
}

CapacityResult cr_capacity(const JointSource& src, double budget, const OptimizerOptions& opts) {
    if (budget < 0.0 || !std::isfinite(budget)) throw std::invalid_argument("budget must be nonnegative");
    const int nx = src.nx();
    const int nu = opts.card_u > 0 ? opts.card_u : nx + 1;
    const int dim = nu * nx;

    Evaluator ev(src, nu);
    long iterations = 0;

    const AuxChannel anchor = constant_aux(nx, nu);

    Candidate best;
    auto consider = [&](const AuxChannel& aux) {
        const InfoPair ip = ev.eval(aux);
        const double excess = ip.ix - ip.iy;
        if (excess <= budget + opts.feas_tol && ip.ix > best.value) {
            best.value = ip.ix;
            best.excess = excess;
            best.aux = aux;
        }
    };

    // walk toward the always-feasible constant channel until the constraint
    // holds, keeping the feasible end of the bracket
    auto repair = [&](const AuxChannel& aux) -> AuxChannel {
        InfoPair ip = ev.eval(aux);
        if (ip.ix - ip.iy <= budget + opts.feas_tol) return aux;
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            const AuxChannel m = mix(aux, anchor, mid);
            ip = ev.eval(m);
            if (ip.ix - ip.iy <= budget + opts.feas_tol)
                hi = mid;
            else
                lo = mid;
        }
        return mix(aux, anchor, hi);
    };

    std::vector<double> gx(dim), gy(dim), buf;
    auto ascend = [&](AuxChannel aux, double lambda) -> AuxChannel {
        const InfoPair ip0 = ev.eval(aux);
        double phi = ip0.ix - lambda * std::pow(std::max(ip0.ix - ip0.iy - budget, 0.0), 2);
        for (int it = 0; it < opts.max_iters; ++it) {
            ++iterations;
            const InfoPair ip = ev.eval(aux);
            ev.grad(aux, gx, gy);
            const double push = 2.0 * lambda * std::max(ip.ix - ip.iy - budget, 0.0);
            double step = 0.25;
            bool improved = false;
            for (int bt = 0; bt < 24; ++bt) {
                AuxChannel trial = aux;
                for (int i = 0; i < dim; ++i) trial.w[i] += step * (gx[i] - push * (gx[i] - gy[i]));
                for (int x = 0; x < nx; ++x) project_column(trial, x, buf);
                const InfoPair tip = ev.eval(trial);
                const double tphi = tip.ix - lambda * std::pow(std::max(tip.ix - tip.iy - budget, 0.0), 2);
                if (tphi > phi) {
                    aux = std::move(trial);
                    improved = tphi - phi > opts.value_tol;
                    phi = tphi;
                    break;
                }
                step *= 0.5;
            }
            if (!improved) break;
        }
        return aux;
    };

    auto polish = [&](AuxChannel aux) {
        consider(aux);
        for (double lambda : {32.0, 256.0, 2048.0, 16384.0}) {
            aux = ascend(std::move(aux), lambda);
            consider(repair(aux));
        }
    };

    // deterministic starts: the two endpoint channels, the mixtures between
    // them, then seeded random channels
    if (nu >= nx) polish(identity_aux(nx, nu));
    polish(anchor);
    const AuxChannel ident = nu >= nx ? identity_aux(nx, nu) : anchor;
    for (int k = 1; k <= opts.mixture_starts; ++k) {
        const double t = static_cast<double>(k) / (opts.mixture_starts + 1);
        polish(mix(ident, anchor, t));
    }
    Rng rng(opts.seed);
    for (int s = 0; s < opts.random_starts; ++s) {
        AuxChannel aux{nu, nx, std::vector<double>(dim)};
        for (int x = 0; x < nx; ++x) {
            double tot = 0.0;
            for (int u = 0; u < nu; ++u) {
                double e;
                do {
                    e = rng.next_double();
                } while (e <= 0.0);
                aux.at(u, x) = -std::log(e);
                tot += aux.at(u, x);
            }
            for (int u = 0; u < nu; ++u) aux.at(u, x) /= tot;
        }
        polish(std::move(aux));
    }

    if (best.value < 0.0) {
        // constant channel is always feasible, so this cannot trigger unless
        // the budget is pathological; report it honestly
        throw std::runtime_error("no feasible auxiliary channel found");
    }
    CapacityResult out;
    out.value = best.value;
    out.argmax = best.aux;
    out.excess = best.excess;
    out.budget = budget;
    out.iterations = iterations;
    return out;
}

CapacityResult brute_force_cr_capacity(const JointSource& src, double budget, int grid_steps,
                                       int card_u, double max_points) {
    if (budget < 0.0 || !std::isfinite(budget)) throw std::invalid_argument("budget must be nonnegative");
    if (grid_steps < 2) throw std::invalid_argument("grid_steps must be at least 2");
    if (card_u < 1) throw std::invalid_argument("card_u must be positive");
    const int nx = src.nx();
    const int levels = grid_steps - 1;

    // composition count C(levels + card_u - 1, card_u - 1), checked before any
    // of the columns are materialized
    double comps = 1.0;
    for (int k = 1; k < card_u; ++k)
        comps *= static_cast<double>(levels + k) / static_cast<double>(k);
    double total = 1.0;
    for (int x = 0; x < nx; ++x) total *= comps;
    if (total > max_points)
        throw ResourceCapError("brute force grid has about " + std::to_string(total) + " points");

    // all pmfs over card_u symbols with entries k/levels
    std::vector<std::vector<double>> columns;
    std::vector<int> stack(card_u, 0);
    auto emit = [&]() {
        std::vector<double> col(card_u);
        for (int u = 0; u < card_u; ++u) col[u] = static_cast<double>(stack[u]) / levels;
        columns.push_back(std::move(col));
    };
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == card_u - 1) {
            stack[pos] = left;
            emit();
            return;
        }
        for (int k = 0; k <= left; ++k) {
            stack[pos] = k;
            self(self, pos + 1, left - k);
        }
    };
    rec(rec, 0, levels);

    Evaluator ev(src, card_u);
    AuxChannel aux{card_u, nx, std::vector<double>(static_cast<size_t>(card_u) * nx, 0.0)};
    std::vector<size_t> idx(nx, 0);

    CapacityResult best;
    best.value = -1.0;
    best.budget = budget;
    long count = 0;
    for (;;) {
        for (int x = 0; x < nx; ++x)
            for (int u = 0; u < card_u; ++u) aux.at(u, x) = columns[idx[x]][u];
        const InfoPair ip = ev.eval(aux);
        ++count;
        const double excess = ip.ix - ip.iy;
        if (excess <= budget + 1e-9 && ip.ix > best.value) {
            best.value = ip.ix;
            best.excess = excess;
            best.argmax = aux;
        }
        int x = 0;
        while (x < nx && ++idx[x] == columns.size()) {
            idx[x] = 0;
            ++x;
        }
        if (x == nx) break;
    }
    best.iterations = count;
    if (best.value < 0.0) throw std::runtime_error("no feasible grid point found");
    return best;
}

bool converse_bound_check(const CapacityResult& result, const JointSource& src) {
    return result.value <= entropy_x(src) + 1e-9 && result.excess <= result.budget + 1e-6;
}

}  // namespace crgen
