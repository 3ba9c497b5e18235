#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "crgen/config.hpp"

namespace crgen {

inline constexpr const char* kToolVersion = "0.1.0";

struct SweepSpec {
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;
};

// parses "eta=<from>:<to>:<step>"
SweepSpec parse_sweep(const std::string& text);

// Each command prints a short report to `log`, writes its CSV/JSON outputs and
// a run manifest under `out_dir`, and throws ConfigError / ResourceCapError on
// invalid requests.
void cmd_outage_capacity(const AppConfig& cfg, const std::optional<SweepSpec>& sweep,
                         const std::string& out_dir, std::ostream& log);
void cmd_cr_capacity(const AppConfig& cfg, bool use_oracle, const std::string& out_dir,
                     std::ostream& log);
void cmd_simulate(const AppConfig& cfg, const std::string& out_dir, std::ostream& log);

// resolved capacity budget for a config: explicit bits, or the scaled outage
// capacity of the fading spec
double resolve_budget(const AppConfig& cfg);

}  // namespace crgen
