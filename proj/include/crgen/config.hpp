#pragma once

#include <optional>
#include <string>

#include "crgen/crcap.hpp"
#include "crgen/fading.hpp"
#include "crgen/protocol.hpp"
#include "crgen/source.hpp"

namespace crgen {

struct CapacityConfig {
    std::optional<double> budget_bits;  // absent: budget_scale * outage capacity
    double budget_scale = 1.0;
    OptimizerOptions opts;
    int grid_steps = 21;  // brute force reference
};

struct AppConfig {
    std::optional<JointSource> source;
    FadingSpec fading;
    CapacityConfig capacity;
    ProtocolConfig protocol;
};

// Parses the JSON config file. A run manifest (an object with "command" and
// "config" keys) is accepted as well; its embedded config is used.
AppConfig load_config(const std::string& path);
AppConfig parse_config(const std::string& text);

// serialized resolved config, reloadable through parse_config
std::string dump_config(const AppConfig& cfg);

}  // namespace crgen
