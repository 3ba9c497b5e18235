#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "crgen/commands.hpp"
#include "crgen/errors.hpp"

namespace {

struct Overrides {
    std::optional<double> eta, power, noise_var;
    std::optional<double> budget_bits, budget_scale;
    std::optional<int> card_u, grid_steps;
    std::optional<std::uint64_t> opt_seed;
    std::optional<int> n, n_c, trials;
    std::optional<double> delta, epsilon, alpha, margin;
    std::optional<std::uint64_t> sim_seed;
    std::optional<std::string> backend;

    void apply(crgen::AppConfig& cfg) const {
        if (eta) cfg.fading.eta = *eta;
        if (power) cfg.fading.power = *power;
        if (noise_var) cfg.fading.noise_var = *noise_var;
        if (budget_bits) cfg.capacity.budget_bits = *budget_bits;
        if (budget_scale) cfg.capacity.budget_scale = *budget_scale;
        if (card_u) cfg.capacity.opts.card_u = *card_u;
        if (grid_steps) cfg.capacity.grid_steps = *grid_steps;
        if (opt_seed) cfg.capacity.opts.seed = *opt_seed;
        if (n) cfg.protocol.n = *n;
        if (n_c) cfg.protocol.n_c = *n_c;
        if (trials) cfg.protocol.trials = *trials;
        if (delta) cfg.protocol.delta = *delta;
        if (epsilon) cfg.protocol.epsilon = *epsilon;
        if (alpha) cfg.protocol.alpha = *alpha;
        if (margin) cfg.protocol.margin = *margin;
        if (sim_seed) cfg.protocol.seed = *sim_seed;
        if (backend) {
            if (*backend == "idealized")
                cfg.protocol.backend = crgen::Backend::Idealized;
            else if (*backend == "gaussian")
                cfg.protocol.backend = crgen::Backend::GaussianCodebook;
            else
                throw crgen::ConfigError("unknown backend: " + *backend);
        }
    }
};

void add_fading_options(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--eta", ov.eta, "outage fraction");
    cmd->add_option("--power", ov.power, "transmit power");
    cmd->add_option("--noise-var", ov.noise_var, "noise variance");
}

void add_capacity_options(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--budget-bits", ov.budget_bits, "communication budget in bits");
    cmd->add_option("--budget-scale", ov.budget_scale, "scale on the outage capacity budget");
    cmd->add_option("--card-u", ov.card_u, "auxiliary alphabet size");
    cmd->add_option("--seed", ov.opt_seed, "optimizer seed");
    cmd->add_option("--grid-steps", ov.grid_steps, "oracle grid levels per coordinate");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"outage capacity, common randomness capacity and protocol simulation "
                 "for slow fading channels"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    Overrides ov;
    app.add_option("--config", config_path, "JSON config file (a run manifest also works)");
    app.add_option("--out", out_dir, "output directory for CSV/JSON results");

    auto* oc = app.add_subcommand("outage-capacity", "outage threshold gain and capacity");
    std::string sweep_text;
    oc->add_option("--sweep", sweep_text, "eta sweep, eta=<from>:<to>:<step>");
    add_fading_options(oc, ov);

    auto* cr = app.add_subcommand("cr-capacity", "constrained common randomness capacity");
    bool use_oracle = false;
    cr->add_flag("--oracle", use_oracle, "use the exhaustive grid reference instead of the optimizer");
    add_fading_options(cr, ov);
    add_capacity_options(cr, ov);

    auto* sim = app.add_subcommand("simulate", "protocol simulation over the fading channel");
    add_fading_options(sim, ov);
    add_capacity_options(sim, ov);
    sim->add_option("--n", ov.n, "source block length");
    sim->add_option("--n-c", ov.n_c, "channel uses per block");
    sim->add_option("--delta", ov.delta, "rate slack");
    sim->add_option("--epsilon", ov.epsilon, "typicality slack");
    sim->add_option("--alpha", ov.alpha, "outage error threshold");
    sim->add_option("--margin", ov.margin, "idealized backend capacity margin");
    sim->add_option("--trials", ov.trials, "trial count");
    sim->add_option("--sim-seed", ov.sim_seed, "simulation seed");
    sim->add_option("--backend", ov.backend, "channel backend: idealized or gaussian");

    try {
        app.parse(argc, argv);

        crgen::AppConfig cfg;
        if (!config_path.empty()) cfg = crgen::load_config(config_path);
        ov.apply(cfg);

        if (oc->parsed()) {
            std::optional<crgen::SweepSpec> sweep;
            if (!sweep_text.empty()) sweep = crgen::parse_sweep(sweep_text);
            crgen::cmd_outage_capacity(cfg, sweep, out_dir, std::cout);
        } else if (cr->parsed()) {
            crgen::cmd_cr_capacity(cfg, use_oracle, out_dir, std::cout);
        } else if (sim->parsed()) {
            crgen::cmd_simulate(cfg, out_dir, std::cout);
        }
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    } catch (const crgen::ResourceCapError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 3;
    } catch (const crgen::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
