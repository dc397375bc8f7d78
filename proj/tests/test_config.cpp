// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sstream>

#include "hybridfb/config.hpp"

using namespace hybridfb;

namespace {

ExperimentConfig parse_str(const std::string& text) {
    std::stringstream ss(text);
    return parse_config_stream(ss, "cfg");
}

void expect_same(const ExperimentConfig& a, const ExperimentConfig& b) {
    CHECK(a.experiment == b.experiment);
    CHECK(a.n_antennas == b.n_antennas);
    CHECK(a.n_users == b.n_users);
    CHECK(a.bit_budget == b.bit_budget);
    CHECK(a.p_d_db == b.p_d_db);
    CHECK(a.saoa_deg == b.saoa_deg);
    CHECK(a.codebooks == b.codebooks);
    CHECK(a.trials == b.trials);
    CHECK(a.drops == b.drops);
    CHECK(a.n_paths == b.n_paths);
    CHECK(a.spacing == b.spacing);
    CHECK(a.x_min == b.x_min);
    CHECK(a.x_max == b.x_max);
    CHECK(a.b_cap == b.b_cap);
    CHECK(a.cells == b.cells);
    CHECK(a.users_per_cell == b.users_per_cell);
    CHECK(a.shadow_sigma_db == b.shadow_sigma_db);
    CHECK(a.pathloss_exponent == b.pathloss_exponent);
    CHECK(a.cell_radius == b.cell_radius);
    CHECK(a.min_distance == b.min_distance);
    CHECK(a.seed == b.seed);
    CHECK(a.out_dir == b.out_dir);
    CHECK(a.threads == b.threads);
}

} // namespace

TEST_CASE("an empty stream yields the defaults") {
    const ExperimentConfig cfg = parse_str("");
    CHECK(cfg.experiment == "power-sweep");
    CHECK(cfg.n_antennas == 32);
    CHECK(cfg.n_users == std::vector<arma::uword>{8});
    CHECK(cfg.bit_budget == std::vector<arma::uword>{32});
    CHECK(cfg.p_d_db == std::vector<double>{0.0, 5.0, 10.0, 15.0, 20.0});
    CHECK(cfg.saoa_deg == std::vector<double>{10.0});
    CHECK(cfg.codebooks == std::vector<std::string>{"dft"});
    CHECK(cfg.trials == 500);
    CHECK(cfg.drops == 10);
    CHECK(cfg.n_paths == 20);
    CHECK(cfg.spacing == 0.5);
    CHECK(cfg.x_min == 1);
    CHECK(cfg.x_max == 0);
    CHECK(cfg.b_cap == 14);
    CHECK(cfg.cells == 3);
    CHECK(cfg.users_per_cell == 3);
    CHECK(cfg.shadow_sigma_db == 8.0);
    CHECK(cfg.pathloss_exponent == 2.2);
    CHECK(cfg.cell_radius == 500.0);
    CHECK(cfg.min_distance == 100.0);
    CHECK(cfg.seed == 1);
    CHECK(cfg.out_dir == "results");
    CHECK(cfg.threads == 1);
}

TEST_CASE("the printed defaults parse back unchanged") {
    std::stringstream printed;
    print_default_config(printed);
    const ExperimentConfig parsed = parse_config_stream(printed, "defaults");
    expect_same(parsed, ExperimentConfig{});
}

TEST_CASE("keys, lists, and comments parse as documented") {
    const ExperimentConfig cfg = parse_str(
        "# leading comment\n"
        "experiment = bound-vs-mc\n"
        "users = 4, 10 ,20\n"
        "p_d_db = -5, 0, 2.5   # trailing comment\n"
        "codebooks = dft, skewed, grid\n"
        "\n"
        "out_dir = /tmp/somewhere\n"
        "seed = 18446744073709551615\n");
    CHECK(cfg.experiment == "bound-vs-mc");
    CHECK(cfg.n_users == std::vector<arma::uword>{4, 10, 20});
    CHECK(cfg.p_d_db == std::vector<double>{-5.0, 0.0, 2.5});
    CHECK(cfg.codebooks == std::vector<std::string>{"dft", "skewed", "grid"});
    CHECK(cfg.out_dir == "/tmp/somewhere");
    CHECK(cfg.seed == 18446744073709551615ULL);
}

TEST_CASE("every documented experiment name is accepted") {
    for (const auto& name : experiment_names()) {
        const ExperimentConfig cfg = parse_str("experiment = " + name + "\n");
        CHECK(cfg.experiment == name);
    }
}

TEST_CASE("parse errors carry file and line") {
    CHECK_THROWS_WITH_AS(parse_str("bogus = 1\n"), "cfg:1: unknown key 'bogus'",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_str("# one\nexperiment = warp\n"),
                         "cfg:2: unknown experiment 'warp'", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_str("codebooks = dft, fourier\n"),
                         "cfg:1: unknown codebook 'fourier'", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_str("codebooks = prediction-grid\n"),
                         "cfg:1: unknown codebook 'prediction-grid'", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_str("spacing = 0.5x\n"), "cfg:1: expected a number, got '0.5x'",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_str("trials = -3\n"),
                         "cfg:1: expected a non-negative integer, got '-3'", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_str("seed =\n"), "cfg:1: missing value for 'seed'",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_str("just words\n"), "cfg:1: expected 'key = value'",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_str("= 5\n"), "cfg:1: missing key", std::runtime_error);
}

TEST_CASE("a missing config file is reported by path") {
    CHECK_THROWS_WITH_AS(parse_config("/nonexistent/hybridfb.cfg"),
                         "cannot open config: /nonexistent/hybridfb.cfg", std::runtime_error);
}
