#pragma once

#include <cstdint>
#include <vector>

#include "crgen/source.hpp"

namespace crgen {

// Auxiliary channel P(U|X), row-major w[u * card_x + x]; for every x the
// column over u is a pmf.
struct AuxChannel {
    int card_u = 0;
    int card_x = 0;
    std::vector<double> w;

    double at(int u, int x) const { return w[static_cast<size_t>(u) * card_x + x]; }
    double& at(int u, int x) { return w[static_cast<size_t>(u) * card_x + x]; }
};

AuxChannel identity_aux(int card_x, int card_u);
AuxChannel constant_aux(int card_x, int card_u);

struct InfoPair {
    double ix = 0.0;  // I(U;X)
    double iy = 0.0;  // I(U;Y)
};

// both mutual informations induced by U -- X -- Y
InfoPair info_pair(const AuxChannel& aux, const JointSource& src);

struct CapacityResult {
    double value = 0.0;   // I(U;X) at the returned channel
    AuxChannel argmax;
    double excess = 0.0;  // I(U;X) - I(U;Y) at the returned channel
    double budget = 0.0;
    long iterations = 0;
};

struct OptimizerOptions {
    std::uint64_t seed = 1;
    int card_u = 0;          // 0 means card_x + 1
    int random_starts = 40;
    int mixture_starts = 17;
    int max_iters = 400;     // ascent iterations per penalty round
    double value_tol = 1e-9;
    double feas_tol = 1e-9;
};

// largest I(U;X) over auxiliary channels whose one-way communication excess
// I(U;X) - I(U;Y) stays within the budget; multi-start projected ascent with
// penalty rounds and a feasibility repair pass
CapacityResult cr_capacity(const JointSource& src, double budget, const OptimizerOptions& opts = {});

// exhaustive reference: every per-column pmf on a uniform grid with the given
// number of levels per coordinate; throws ResourceCapError past max_points
CapacityResult brute_force_cr_capacity(const JointSource& src, double budget, int grid_steps,
                                       int card_u, double max_points = 2.5e8);

// value within H(X) and excess within budget, up to reporting tolerances
bool converse_bound_check(const CapacityResult& result, const JointSource& src);

}  // namespace crgen
