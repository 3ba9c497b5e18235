#include "crgen/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "crgen/errors.hpp"

namespace crgen {

using nlohmann::json;

namespace {

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw ConfigError(std::string("missing or non-numeric field: ") + key);
    return j[key].get<double>();
}

JointSource parse_source(const json& j) {
    if (j.contains("dsbs")) {
        return JointSource::dsbs(require_number(j, "dsbs"));
    }
    if (!j.contains("matrix") || !j["matrix"].is_array())
        throw ConfigError("source needs either dsbs or a joint matrix");
    const auto& m = j["matrix"];
    const int nx = j.contains("nx") ? static_cast<int>(require_number(j, "nx"))
                                    : static_cast<int>(m.size());
    if (m.empty() || !m[0].is_array()) throw ConfigError("source matrix must be a list of rows");
    const int ny = j.contains("ny") ? static_cast<int>(require_number(j, "ny"))
                                    : static_cast<int>(m[0].size());
    if (static_cast<int>(m.size()) != nx) throw ConfigError("source matrix row count does not match nx");
    std::vector<double> joint;
    joint.reserve(static_cast<size_t>(nx) * ny);
    for (const auto& row : m) {
        if (static_cast<int>(row.size()) != ny) throw ConfigError("source matrix column count does not match ny");
        for (const auto& v : row) {
            if (!v.is_number()) throw ConfigError("source matrix entries must be numbers");
            joint.push_back(v.get<double>());
        }
    }
    try {
        return JointSource(nx, ny, std::move(joint));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid source matrix: ") + e.what());
    }
}

GainDistribution parse_gain(const json& j) {
    if (!j.contains("type") || !j["type"].is_string())
        throw ConfigError("gain needs a type (constant, rayleigh or empirical)");
    const std::string type = j["type"].get<std::string>();
    try {
        if (type == "constant") return make_constant_gain(require_number(j, "g0"));
        if (type == "rayleigh") return make_rayleigh_gain(require_number(j, "scale"));
        if (type == "empirical") {
            std::vector<double> samples;
            if (j.contains("samples") && j["samples"].is_array()) {
                for (const auto& v : j["samples"]) {
                    if (!v.is_number()) throw ConfigError("gain samples must be numbers");
                    samples.push_back(v.get<double>());
                }
            } else if (j.contains("path") && j["path"].is_string()) {
                std::ifstream in(j["path"].get<std::string>());
                if (!in) throw ConfigError("cannot open gain sample file: " + j["path"].get<std::string>());
                double v;
                while (in >> v) samples.push_back(v);
            } else {
                throw ConfigError("empirical gain needs samples or a path");
            }
            return make_empirical_gain(std::move(samples));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid gain: ") + e.what());
    }
    throw ConfigError("unknown gain type: " + type);
}

void parse_capacity(const json& j, CapacityConfig& cap) {
    if (j.contains("budget_bits")) cap.budget_bits = require_number(j, "budget_bits");
    if (j.contains("budget_scale")) cap.budget_scale = require_number(j, "budget_scale");
    if (j.contains("grid_steps")) cap.grid_steps = static_cast<int>(require_number(j, "grid_steps"));
    if (j.contains("card_u")) cap.opts.card_u = static_cast<int>(require_number(j, "card_u"));
    if (j.contains("seed")) cap.opts.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("random_starts"))
        cap.opts.random_starts = static_cast<int>(require_number(j, "random_starts"));
}

void parse_protocol(const json& j, ProtocolConfig& p) {
    if (j.contains("n")) p.n = static_cast<int>(require_number(j, "n"));
    if (j.contains("n_c")) p.n_c = static_cast<int>(require_number(j, "n_c"));
    if (j.contains("delta")) p.delta = require_number(j, "delta");
    if (j.contains("epsilon")) p.epsilon = require_number(j, "epsilon");
    if (j.contains("alpha")) p.alpha = require_number(j, "alpha");
    if (j.contains("margin")) p.margin = require_number(j, "margin");
    if (j.contains("trials")) p.trials = static_cast<int>(require_number(j, "trials"));
    if (j.contains("seed")) p.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("buckets")) p.buckets = static_cast<int>(require_number(j, "buckets"));
    if (j.contains("max_table_entries"))
        p.max_table_entries = j["max_table_entries"].get<long long>();
    if (j.contains("record_trials")) {
        if (!j["record_trials"].is_boolean()) throw ConfigError("record_trials must be a boolean");
        p.record_trials = j["record_trials"].get<bool>();
    }
    if (j.contains("gain_states")) {
        if (!j["gain_states"].is_array()) throw ConfigError("gain_states must be an array");
        p.gain_states.clear();
        for (const auto& v : j["gain_states"]) {
            if (!v.is_number()) throw ConfigError("gain_states entries must be numbers");
            p.gain_states.push_back(v.get<double>());
        }
    }
    if (j.contains("backend")) {
        if (!j["backend"].is_string()) throw ConfigError("backend must be a string");
        const std::string b = j["backend"].get<std::string>();
        if (b == "idealized")
            p.backend = Backend::Idealized;
        else if (b == "gaussian")
            p.backend = Backend::GaussianCodebook;
        else
            throw ConfigError("unknown backend: " + b);
    }
}

}  // namespace

AppConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    // run manifests carry the config under a "config" key
    if (doc.contains("command") && doc.contains("config")) doc = doc["config"];

    AppConfig cfg;
    if (doc.contains("source")) cfg.source = parse_source(doc["source"]);
    if (doc.contains("gain")) cfg.fading.gain = parse_gain(doc["gain"]);
    if (doc.contains("power")) cfg.fading.power = require_number(doc, "power");
    if (doc.contains("noise_var")) cfg.fading.noise_var = require_number(doc, "noise_var");
    if (doc.contains("eta")) cfg.fading.eta = require_number(doc, "eta");
    if (doc.contains("capacity")) parse_capacity(doc["capacity"], cfg.capacity);
    if (doc.contains("protocol")) parse_protocol(doc["protocol"], cfg.protocol);
    try {
        validate(cfg.fading);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid fading parameters: ") + e.what());
    }
    return cfg;
}

AppConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string dump_config(const AppConfig& cfg) {
    json doc;
    if (cfg.source) {
        json rows = json::array();
        for (int x = 0; x < cfg.source->nx(); ++x) {
            json row = json::array();
            for (int y = 0; y < cfg.source->ny(); ++y) row.push_back(cfg.source->p(x, y));
            rows.push_back(row);
        }
        doc["source"] = {{"nx", cfg.source->nx()}, {"ny", cfg.source->ny()}, {"matrix", rows}};
    }
    if (std::holds_alternative<ConstantGain>(cfg.fading.gain)) {
        doc["gain"] = {{"type", "constant"}, {"g0", std::get<ConstantGain>(cfg.fading.gain).g0}};
    } else if (std::holds_alternative<RayleighGain>(cfg.fading.gain)) {
        doc["gain"] = {{"type", "rayleigh"}, {"scale", std::get<RayleighGain>(cfg.fading.gain).scale}};
    } else {
        doc["gain"] = {{"type", "empirical"},
                       {"samples", std::get<EmpiricalGain>(cfg.fading.gain).samples}};
    }
    doc["power"] = cfg.fading.power;
    doc["noise_var"] = cfg.fading.noise_var;
    doc["eta"] = cfg.fading.eta;

    json cap;
    if (cfg.capacity.budget_bits) cap["budget_bits"] = *cfg.capacity.budget_bits;
    cap["budget_scale"] = cfg.capacity.budget_scale;
    cap["grid_steps"] = cfg.capacity.grid_steps;
    cap["card_u"] = cfg.capacity.opts.card_u;
    cap["seed"] = cfg.capacity.opts.seed;
    cap["random_starts"] = cfg.capacity.opts.random_starts;
    doc["capacity"] = cap;

    const ProtocolConfig& p = cfg.protocol;
    json proto = {{"n", p.n},           {"n_c", p.n_c},
                  {"delta", p.delta},   {"epsilon", p.epsilon},
                  {"alpha", p.alpha},   {"margin", p.margin},
                  {"trials", p.trials}, {"seed", p.seed},
                  {"buckets", p.buckets}, {"max_table_entries", p.max_table_entries},
                  {"record_trials", p.record_trials},
                  {"backend", p.backend == Backend::Idealized ? "idealized" : "gaussian"}};
    if (!p.gain_states.empty()) proto["gain_states"] = p.gain_states;
    doc["protocol"] = proto;
    return doc.dump(2);
}

}  // namespace crgen
