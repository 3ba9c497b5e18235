#include "crgen/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "crgen/errors.hpp"
#include "crgen/protocol.hpp"

namespace crgen {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::string& out_dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/" + name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file: " + path);
    out << content;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const AppConfig& cfg, const std::string& command, std::uint64_t seed,
                    const std::string& out_dir, const std::string& prefix) {
    json m;
    m["command"] = command;
    m["version"] = kToolVersion;
    m["timestamp"] = timestamp_utc();
    m["seed"] = seed;
    m["config"] = json::parse(dump_config(cfg));
    write_file(out_dir, prefix + "_manifest.json", m.dump(2) + "\n");
}

const JointSource& require_source(const AppConfig& cfg) {
    if (!cfg.source) throw ConfigError("this command needs a source section in the config");
    return *cfg.source;
}

}  // namespace

SweepSpec parse_sweep(const std::string& text) {
    SweepSpec s;
    char name[8] = {0};
    if (std::sscanf(text.c_str(), "%3[a-z]=%lf:%lf:%lf", name, &s.from, &s.to, &s.step) != 4 ||
        std::string(name) != "eta")
        throw ConfigError("sweep must look like eta=<from>:<to>:<step>");
    if (s.step <= 0.0 || s.to < s.from) throw ConfigError("sweep range is empty or step is not positive");
    return s;
}

double resolve_budget(const AppConfig& cfg) {
    if (cfg.capacity.budget_bits) {
        if (*cfg.capacity.budget_bits < 0.0) throw ConfigError("budget_bits must be nonnegative");
        return *cfg.capacity.budget_bits;
    }
    return cfg.capacity.budget_scale * outage_capacity(cfg.fading);
}

void cmd_outage_capacity(const AppConfig& cfg, const std::optional<SweepSpec>& sweep,
                         const std::string& out_dir, std::ostream& log) {
    const double g0 = gamma0(cfg.fading.gain, cfg.fading.eta);
    const double cap = outage_capacity(cfg.fading);
    log << "eta = " << fmt_double(cfg.fading.eta) << "\n";
    log << "gamma0 = " << fmt_double(g0) << "\n";
    log << "capacity_bits = " << fmt_double(cap) << "\n";

    json summary;
    summary["eta"] = cfg.fading.eta;
    summary["gamma0"] = g0;
    summary["capacity_bits"] = cap;
    write_file(out_dir, "outage_capacity_summary.json", summary.dump(2) + "\n");

    if (sweep) {
        std::string csv = "eta,gamma0,capacity_bits\n";
        FadingSpec fs = cfg.fading;
        for (int k = 0;; ++k) {
            const double eta = sweep->from + k * sweep->step;
            if (eta > sweep->to + 0.5 * sweep->step) break;
            if (eta < 0.0 || eta >= 1.0) throw ConfigError("sweep eta values must stay in [0, 1)");
            fs.eta = eta;
            const double g = gamma0(fs.gain, eta);
            csv += fmt_double(eta) + "," + fmt_double(g) + "," + fmt_double(outage_capacity(fs)) + "\n";
        }
        write_file(out_dir, "outage_capacity_sweep.csv", csv);
        log << "sweep written to " << out_dir << "/outage_capacity_sweep.csv\n";
    }
    write_manifest(cfg, "outage-capacity", 0, out_dir, "outage_capacity");
}

void cmd_cr_capacity(const AppConfig& cfg, bool use_oracle, const std::string& out_dir,
                     std::ostream& log) {
    const JointSource& src = require_source(cfg);
    const double budget = resolve_budget(cfg);
    CapacityResult res;
    if (use_oracle) {
        const int card_u = cfg.capacity.opts.card_u > 0 ? cfg.capacity.opts.card_u : src.nx() + 1;
        res = brute_force_cr_capacity(src, budget, cfg.capacity.grid_steps, card_u);
        log << "method = brute_force(grid_steps=" << cfg.capacity.grid_steps << ")\n";
    } else {
        res = cr_capacity(src, budget, cfg.capacity.opts);
        log << "method = optimizer\n";
    }
    log << "budget_bits = " << fmt_double(res.budget) << "\n";
    log << "cr_capacity_bits = " << fmt_double(res.value) << "\n";
    log << "excess_bits = " << fmt_double(res.excess) << "\n";

    json summary;
    summary["method"] = use_oracle ? "brute_force" : "optimizer";
    summary["budget_bits"] = res.budget;
    summary["cr_capacity_bits"] = res.value;
    summary["excess_bits"] = res.excess;
    summary["converse_bound_ok"] = converse_bound_check(res, src);
    json w = json::array();
    for (int u = 0; u < res.argmax.card_u; ++u) {
        json row = json::array();
        for (int x = 0; x < res.argmax.card_x; ++x) row.push_back(res.argmax.at(u, x));
        w.push_back(row);
    }
    summary["aux_channel"] = w;
    write_file(out_dir, "cr_capacity_summary.json", summary.dump(2) + "\n");
    write_manifest(cfg, "cr-capacity", cfg.capacity.opts.seed, out_dir, "cr_capacity");
}

void cmd_simulate(const AppConfig& cfg, const std::string& out_dir, std::ostream& log) {
    const JointSource& src = require_source(cfg);
    const double budget = resolve_budget(cfg);
    const CapacityResult cap = cr_capacity(src, budget, cfg.capacity.opts);
    const RunStats stats = run(src, cap.argmax, cfg.fading, cfg.protocol);

    std::string csv = "g_lo,g_hi,trials,errors,error_rate\n";
    for (const BucketStats& b : stats.per_state) {
        const double rate = b.trials > 0 ? static_cast<double>(b.errors) / b.trials : 0.0;
        csv += fmt_double(b.g_lo) + "," + fmt_double(b.g_hi) + "," + std::to_string(b.trials) +
               "," + std::to_string(b.errors) + "," + fmt_double(rate) + "\n";
    }
    write_file(out_dir, "simulate_buckets.csv", csv);

    json summary;
    summary["gamma0"] = gamma0(cfg.fading.gain, cfg.fading.eta);
    summary["capacity_bits"] = outage_capacity(cfg.fading);
    summary["cr_capacity_bits"] = cap.value;
    summary["excess_bits"] = cap.excess;
    summary["budget_bits"] = cap.budget;
    summary["outage_fraction"] = stats.outage_fraction;
    summary["empirical_rate"] = stats.empirical_rate;
    summary["N1"] = stats.n1;
    summary["N2"] = stats.n2;
    summary["cardinality_bound_ok"] = stats.cardinality_bound_ok;
    summary["trials"] = stats.total_trials;
    summary["errors"] = stats.total_errors;
    write_file(out_dir, "simulate_summary.json", summary.dump(2) + "\n");

    log << "N1 = " << stats.n1 << ", N2 = " << stats.n2 << "\n";
    log << "empirical_rate = " << fmt_double(stats.empirical_rate) << "\n";
    log << "outage_fraction = " << fmt_double(stats.outage_fraction) << "\n";
    log << "cardinality_bound_ok = " << (stats.cardinality_bound_ok ? "true" : "false") << "\n";
    write_manifest(cfg, "simulate", cfg.protocol.seed, out_dir, "simulate");
}

}  // namespace crgen
