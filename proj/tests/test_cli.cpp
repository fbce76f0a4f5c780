#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "qsync/cli.hpp"

using qsync::run_cli;

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

double parse_value(const std::string& text, const std::string& key) {
    const auto pos = text.find(key + " = ");
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + key.size() + 3));
}

}  // namespace

TEST_CASE("analyze reports the degenerate cluster of the energy-conserving machine") {
    const CliRun r =
        cli({"analyze", "--preset", "coupled_machines", "--delta", "0", "--omega", "40"});
    CHECK(r.code == 0);
    CHECK(r.out.find("energy_conserving = true") != std::string::npos);
    CHECK(r.out.find("(41, x3)") != std::string::npos);
    CHECK(r.out.find("prediction = sync_possible_energy_conserving") != std::string::npos);
}

TEST_CASE("analyze flags the detuned machine as energy non-conserving") {
    const CliRun r = cli({"analyze", "--preset", "coupled_machines", "--delta", "0.02"});
    CHECK(r.code == 0);
    CHECK(r.out.find("energy_conserving = false") != std::string::npos);
    CHECK(r.out.find("prediction = sync_possible_energy_nonconserving") != std::string::npos);
}

TEST_CASE("steady at zero coupling reports zero coherence and zero power") {
    const CliRun r = cli({"steady", "--preset", "coupled_machines", "--epsilon", "0"});
    CHECK(r.code == 0);
    CHECK(std::abs(parse_value(r.out, "s_coh")) <= 1e-12);
    CHECK(std::abs(parse_value(r.out, "power")) <= 1e-12);
    CHECK(r.out.find("limit_cycle_valid = true") != std::string::npos);
}

TEST_CASE("spectrum prints a classified table with one steady mode") {
    const CliRun r = cli({"spectrum", "--preset", "coupled_machines", "--epsilon", "0.03",
                          "--delta", "0.02"});
    CHECK(r.code == 0);
    CHECK(r.out.find("steady modes: 1") != std::string::npos);
    CHECK(r.out.find("oscillating coherences: 0") != std::string::npos);
}

TEST_CASE("perturb prints a convergence table with ratios near 4") {
    const CliRun r = cli({"perturb", "--preset", "coupled_machines", "--delta", "0.02",
                          "--eps-values", "1e-3", "5e-4"});
    CHECK(r.code == 0);
    CHECK(r.out.find("convergence table") != std::string::npos);
    const auto pos = r.out.rfind("\n", r.out.size() - 2);
    const std::string last_row = r.out.substr(pos);
    const double ratio = std::stod(last_row.substr(last_row.rfind(' ')));
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
}

TEST_CASE("perturb on the degenerate printed wiring is a numerical failure") {
    const CliRun r = cli({"perturb", "--preset", "coupled_machines", "--wiring",
                          "printed_both_23"});
    CHECK(r.code == 2);
    CHECK(r.err.find("numerical failure") != std::string::npos);
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(cli({"frobnicate"}).code == 1);
    CHECK(cli({"steady", "--no-such-flag", "1"}).code == 1);
    CHECK(cli({}).code == 1);
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"analyze", "--preset", "nonsense"}).code == 1);
    CHECK(cli({"sweep", "--config", "/nonexistent/qsync.json"}).code == 1);
}

TEST_CASE("sweep subcommand writes the configured CSV") {
    const std::string config_path = "/tmp/qsync_cli_sweep.json";
    const std::string output_path = "/tmp/qsync_cli_sweep.csv";
    {
        std::ofstream cfg(config_path);
        cfg << R"({
          "preset": "coupled_machines",
          "eps_range": {"min": 0.0, "max": 0.02, "count": 2},
          "delta_range": {"min": 0.0, "max": 0.0, "count": 1},
          "observables": ["s_coh", "power", "j_hot", "j_cold", "first_law_residual"],
          "format": "csv",
          "output": ")" << output_path << R"("
        })";
    }
    const CliRun r = cli({"sweep", "--config", config_path, "--threads", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("sweep complete: 2 grid points, 0 flagged") != std::string::npos);

    std::ifstream in(output_path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("epsilon,delta,s_coh,l1,power,j_hot,j_cold,first_law_residual,"
                        "spectral_gap,status") != std::string::npos);
    // delta = 0 column of an energy-conserving machine: power is numerically zero
    CHECK(ss.str().find(",ok\n") != std::string::npos);
}
