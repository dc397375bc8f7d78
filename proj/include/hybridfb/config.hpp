// SPDX-License-Identifier: Apache-2.0
//
// Plain-text key = value experiment configuration.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <armadillo>

namespace hybridfb {

struct ExperimentConfig {
    std::string experiment = "power-sweep";

    arma::uword n_antennas = 32;
    std::vector<arma::uword> n_users{8};   // grid for user-sweep, else first
    std::vector<arma::uword> bit_budget{32}; // grid for budget sweeps, else first
    std::vector<double> p_d_db{0, 5, 10, 15, 20}; // grid for power sweeps, else first
    std::vector<double> saoa_deg{10};      // grid for saoa-sweep, else first
    std::vector<std::string> codebooks{"dft"}; // conventional-baseline kinds

    arma::uword trials = 500;
    arma::uword drops = 10;
    arma::uword n_paths = 20;
    double spacing = 0.5;
    arma::uword x_min = 1;
    arma::uword x_max = 0; // 0 = n_antennas
    arma::uword b_cap = 14;

    arma::uword cells = 3;
    arma::uword users_per_cell = 3;
    double shadow_sigma_db = 8.0;
    double pathloss_exponent = 2.2;
    double cell_radius = 500.0;
    double min_distance = 100.0;

    std::uint64_t seed = 1;
    std::string out_dir = "results";
    arma::uword threads = 1;
};

// Known experiment identifiers, in documentation order.
const std::vector<std::string>& experiment_names();

// Parse `path`. Unknown keys, malformed values, and unknown experiment names
// raise std::runtime_error carrying "path:line: message".
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_stream(std::istream& is, const std::string& name);

// Emit a config file reproducing the defaults, with comments.
void print_default_config(std::ostream& os);

} // namespace hybridfb
