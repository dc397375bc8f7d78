// SPDX-License-Identifier: Apache-2.0

#include "hybridfb/config.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hybridfb {

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "power-sweep",     "user-sweep",          "budget-sweep",
        "saoa-sweep",      "bound-vs-mc",         "bit-allocation-compare",
        "multicell-power-sweep", "validate",
    };
    return names;
}

namespace {

[[noreturn]] void fail(const std::string& file, std::size_t line, const std::string& msg) {
    throw std::runtime_error(file + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    return out;
}

double parse_double(const std::string& file, std::size_t line, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail(file, line, "expected a number, got '" + v + "'");
    }
}

unsigned long long parse_uint(const std::string& file, std::size_t line, const std::string& v) {
    try {
        std::size_t used = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
        const unsigned long long u = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return u;
    } catch (const std::exception&) {
        fail(file, line, "expected a non-negative integer, got '" + v + "'");
    }
}

std::vector<double> parse_double_list(const std::string& file, std::size_t line,
                                      const std::string& v) {
    std::vector<double> out;
    for (const auto& cell : split_list(v)) out.push_back(parse_double(file, line, cell));
    if (out.empty()) fail(file, line, "empty list");
    return out;
}

std::vector<arma::uword> parse_uint_list(const std::string& file, std::size_t line,
                                         const std::string& v) {
    std::vector<arma::uword> out;
    for (const auto& cell : split_list(v))
        out.push_back(static_cast<arma::uword>(parse_uint(file, line, cell)));
    if (out.empty()) fail(file, line, "empty list");
    return out;
}

} // namespace

ExperimentConfig parse_config_stream(std::istream& is, const std::string& name) {
    ExperimentConfig cfg;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(name, line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(name, line_no, "missing key");
        if (value.empty()) fail(name, line_no, "missing value for '" + key + "'");

        if (key == "experiment") {
            const auto& names = experiment_names();
            if (std::find(names.begin(), names.end(), value) == names.end())
                fail(name, line_no, "unknown experiment '" + value + "'");
            cfg.experiment = value;
        } else if (key == "antennas") {
            cfg.n_antennas = static_cast<arma::uword>(parse_uint(name, line_no, value));
        } else if (key == "users") {
            cfg.n_users = parse_uint_list(name, line_no, value);
        } else if (key == "bit_budget") {
            cfg.bit_budget = parse_uint_list(name, line_no, value);
        } else if (key == "p_d_db") {
            cfg.p_d_db = parse_double_list(name, line_no, value);
        } else if (key == "saoa_deg") {
            cfg.saoa_deg = parse_double_list(name, line_no, value);
        } else if (key == "codebooks") {
            cfg.codebooks = split_list(value);
            for (const auto& c : cfg.codebooks)
                if (c != "dft" && c != "skewed" && c != "grid")
                    fail(name, line_no, "unknown codebook '" + c + "'");
        } else if (key == "trials") {
            cfg.trials = static_cast<arma::uword>(parse_uint(name, line_no, value));
        } else if (key == "drops") {
            cfg.drops = static_cast<arma::uword>(parse_uint(name, line_no, value));
        } else if (key == "paths") {
            cfg.n_paths = static_cast<arma::uword>(parse_uint(name, line_no, value));
        } else if (key == "spacing") {
            cfg.spacing = parse_double(name, line_no, value);
        } else if (key == "x_min") {
            cfg.x_min = static_cast<arma::uword>(parse_uint(name, line_no, value));
        } else if (key == "x_max") {
            cfg.x_max = static_cast<arma::uword>(parse_uint(name, line_no, value));
        } else if (key == "b_cap") {
            cfg.b_cap = static_cast<arma::uword>(parse_uint(name, line_no, value));
        } else if (key == "cells") {
            cfg.cells = static_cast<arma::uword>(parse_uint(name, line_no, value));
        } else if (key == "users_per_cell") {
            cfg.users_per_cell = static_cast<arma::uword>(parse_uint(name, line_no, value));
        } else if (key == "shadow_sigma_db") {
            cfg.shadow_sigma_db = parse_double(name, line_no, value);
        } else if (key == "pathloss_exponent") {
            cfg.pathloss_exponent = parse_double(name, line_no, value);
        } else if (key == "cell_radius") {
            cfg.cell_radius = parse_double(name, line_no, value);
        } else if (key == "min_distance") {
            cfg.min_distance = parse_double(name, line_no, value);
        } else if (key == "seed") {
            cfg.seed = parse_uint(name, line_no, value);
        } else if (key == "out_dir") {
            cfg.out_dir = value;
        } else if (key == "threads") {
            cfg.threads = static_cast<arma::uword>(parse_uint(name, line_no, value));
        } else {
            fail(name, line_no, "unknown key '" + key + "'");
        }
    }
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config: " + path);
    return parse_config_stream(is, path);
}

void print_default_config(std::ostream& os) {
    const ExperimentConfig d;
    os << "# experiment configuration (defaults)\n";
    os << "# experiments: ";
    const auto& names = experiment_names();
    for (std::size_t i = 0; i < names.size(); ++i) os << (i ? ", " : "") << names[i];
    os << "\n";
    os << "experiment = " << d.experiment << "\n\n";
    os << "antennas = " << d.n_antennas << "\n";
    os << "users = " << d.n_users.front() << "          # list = grid for user-sweep\n";
    os << "bit_budget = " << d.bit_budget.front() << "     # list = grid for budget sweeps\n";
    os << "p_d_db = 0,5,10,15,20  # grid for power sweeps; first value used elsewhere\n";
    os << "saoa_deg = " << d.saoa_deg.front() << "       # list = grid for saoa-sweep\n";
    os << "codebooks = dft      # conventional baselines: dft, skewed, grid\n\n";
    os << "trials = " << d.trials << "\n";
    os << "drops = " << d.drops << "\n";
    os << "paths = " << d.n_paths << "\n";
    os << "spacing = 0.5\n";
    os << "x_min = " << d.x_min << "\n";
    os << "x_max = " << d.x_max << "            # 0 = number of antennas\n";
    os << "b_cap = " << d.b_cap << "\n\n";
    os << "cells = " << d.cells << "\n";
    os << "users_per_cell = " << d.users_per_cell << "\n";
    os << "shadow_sigma_db = 8\n";
    os << "pathloss_exponent = 2.2\n";
    os << "cell_radius = 500\n";
    os << "min_distance = 100\n\n";
    os << "seed = " << d.seed << "\n";
    os << "out_dir = " << d.out_dir << "\n";
    os << "threads = " << d.threads << "\n";
}

} // namespace hybridfb
