#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "crgen/commands.hpp"
#include "crgen/config.hpp"
#include "crgen/errors.hpp"

using namespace crgen;
namespace fs = std::filesystem;

namespace {

const char* kBaseConfig = R"({
  "source": {"dsbs": 0.2},
  "gain": {"type": "rayleigh", "scale": 0.70710678118654752},
  "power": 0.133,
  "noise_var": 1.0,
  "eta": 0.1,
  "capacity": {"budget_scale": 0.8, "card_u": 3, "seed": 1},
  "protocol": {"n": 100, "n_c": 300, "delta": 0.008, "alpha": 0.45, "margin": 0.002,
               "trials": 60, "seed": 11, "buckets": 5}
})";

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "crgen_test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CRGEN_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

}  // namespace

TEST_CASE("config parsing essentials") {
    const AppConfig cfg = parse_config(kBaseConfig);
    REQUIRE(cfg.source.has_value());
    CHECK(cfg.source->p(0, 0) == doctest::Approx(0.4));
    CHECK(cfg.fading.power == 0.133);
    CHECK(cfg.fading.eta == 0.1);
    CHECK(cfg.capacity.budget_scale == 0.8);
    CHECK(cfg.capacity.opts.card_u == 3);
    CHECK(cfg.protocol.n_c == 300);
    CHECK(cfg.protocol.trials == 60);
}

TEST_CASE("empirical gain loads magnitudes from a file") {
    const fs::path dir = fresh_dir("gain_path");
    const fs::path list = dir / "gains.txt";
    std::ofstream(list) << "0.5\n1.0\n1.5\n2.0\n";
    const std::string cfg_text =
        std::string(R"({"gain": {"type": "empirical", "path": ")") + list.string() +
        R"("}, "eta": 0.25})";
    const AppConfig cfg = parse_config(cfg_text);
    CHECK(gamma0(cfg.fading.gain, 0.25) == 1.0);
    CHECK_THROWS_AS(parse_config(R"({"gain": {"type": "empirical", "path": "/nope.txt"}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"gain": {"type": "empirical"}})"), ConfigError);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"gain": {"type": "laplace"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"eta": 1.5})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"source": {"matrix": [[0.5, 0.5]], "nx": 2}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"source": {}})"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), ConfigError);
}

TEST_CASE("dump and reload round trip") {
    const AppConfig cfg = parse_config(kBaseConfig);
    const AppConfig again = parse_config(dump_config(cfg));
    CHECK(again.source->joint() == cfg.source->joint());
    CHECK(again.fading.power == cfg.fading.power);
    CHECK(again.capacity.budget_scale == cfg.capacity.budget_scale);
    CHECK(again.protocol.n == cfg.protocol.n);
    CHECK(again.protocol.seed == cfg.protocol.seed);
    CHECK(dump_config(again) == dump_config(cfg));
}

TEST_CASE("sweep parsing") {
    const SweepSpec s = parse_sweep("eta=0:0.9:0.05");
    CHECK(s.from == 0.0);
    CHECK(s.to == 0.9);
    CHECK(s.step == 0.05);
    CHECK_THROWS_AS(parse_sweep("eta=0:0.9"), ConfigError);
    CHECK_THROWS_AS(parse_sweep("power=0:1:0.1"), ConfigError);
    CHECK_THROWS_AS(parse_sweep("eta=0.5:0.1:0.1"), ConfigError);
    CHECK_THROWS_AS(parse_sweep("eta=0:0.9:0"), ConfigError);
}

TEST_CASE("budget resolution") {
    AppConfig cfg = parse_config(kBaseConfig);
    const double c = outage_capacity(cfg.fading);
    CHECK(resolve_budget(cfg) == doctest::Approx(0.8 * c).epsilon(1e-12));
    cfg.capacity.budget_bits = 0.25;
    CHECK(resolve_budget(cfg) == 0.25);
}

TEST_CASE("fading-derived budget saturates a dsbs source") {
    const fs::path dir = fresh_dir("saturate");
    // constant gain makes the budget log2(1 + 90), far above H(X|Y)
    AppConfig cfg = parse_config(R"({
      "source": {"dsbs": 0.1},
      "gain": {"type": "constant", "g0": 3.0},
      "power": 10.0, "noise_var": 1.0, "eta": 0.0,
      "capacity": {"seed": 2}
    })");
    std::ostringstream log;
    cmd_cr_capacity(cfg, false, dir.string(), log);
    const auto summary = nlohmann::json::parse(slurp(dir / "cr_capacity_summary.json"));
    CHECK(summary["cr_capacity_bits"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(summary["converse_bound_ok"].get<bool>());
}

TEST_CASE("outage capacity command writes summary and sweep") {
    const fs::path dir = fresh_dir("outage");
    const AppConfig cfg = parse_config(kBaseConfig);
    std::ostringstream log;
    cmd_outage_capacity(cfg, SweepSpec{0.0, 0.2, 0.1}, dir.string(), log);
    CHECK(slurp(dir / "outage_capacity_summary.json").find("capacity_bits") != std::string::npos);
    const std::string csv = slurp(dir / "outage_capacity_sweep.csv");
    CHECK(csv.rfind("eta,gamma0,capacity_bits", 0) == 0);
    CHECK(slurp(dir / "outage_capacity_manifest.json").find("outage-capacity") != std::string::npos);
}

TEST_CASE("manifests replay bit identically") {
    const fs::path dir_a = fresh_dir("replay_a");
    const fs::path dir_b = fresh_dir("replay_b");
    const AppConfig cfg = parse_config(kBaseConfig);
    std::ostringstream log;
    cmd_simulate(cfg, dir_a.string(), log);
    const AppConfig replayed = load_config((dir_a / "simulate_manifest.json").string());
    cmd_simulate(replayed, dir_b.string(), log);
    CHECK(slurp(dir_a / "simulate_buckets.csv") == slurp(dir_b / "simulate_buckets.csv"));
    CHECK(slurp(dir_a / "simulate_summary.json") == slurp(dir_b / "simulate_summary.json"));
}

TEST_CASE("cli exit codes") {
    const fs::path dir = fresh_dir("cli");
    {
        std::ofstream out(dir / "cfg.json");
        out << kBaseConfig;
    }
    {
        std::ofstream out(dir / "bad.json");
        out << "{ broken";
    }
    const std::string base = "--config " + (dir / "cfg.json").string() + " --out " + dir.string();
    CHECK(run_cli(base + " outage-capacity") == 0);
    CHECK(run_cli(base + " cr-capacity --budget-bits 0.05") == 0);
    CHECK(run_cli("--config " + (dir / "bad.json").string() + " outage-capacity") == 2);
    CHECK(run_cli("--config " + (dir / "missing.json").string() + " outage-capacity") == 2);
    CHECK(run_cli(base + " simulate --alpha 1.5") == 2);
    CHECK(run_cli(base + " cr-capacity --oracle --grid-steps 4001 --card-u 4") == 3);
    CHECK(run_cli(base + " outage-capacity --sweep eta=0:2:0.5") == 2);
    CHECK(run_cli("cr-capacity") == 2);  // no source configured
}
