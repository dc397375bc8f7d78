// SPDX-License-Identifier: Apache-2.0

#include "hybridfb/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hybridfb {

namespace {

double wrap_pi(double a) {
    while (a > arma::datum::pi) a -= 2.0 * arma::datum::pi;
    while (a <= -arma::datum::pi) a += 2.0 * arma::datum::pi;
    return a;
}

} // namespace

CellTopology make_triangle_topology(arma::uword n_cells) {
    if (n_cells == 0) throw std::invalid_argument("make_triangle_topology: need at least one cell");
    CellTopology topo;
    topo.bs_positions.set_size(2, n_cells);
    topo.bs_broadside.set_size(n_cells);
    if (n_cells == 1) {
        topo.bs_positions.zeros();
        topo.bs_broadside(0) = 0.5 * arma::datum::pi;
        return topo;
    }
    // Vertices on a circle of radius 500 m around the centroid; for three
    // cells this is the equilateral triangle with side 500*sqrt(3) m.
    const double radius = 500.0;
    for (arma::uword l = 0; l < n_cells; ++l) {
        const double ang = 0.5 * arma::datum::pi +
                           2.0 * arma::datum::pi * static_cast<double>(l) / static_cast<double>(n_cells);
        topo.bs_positions(0, l) = radius * std::cos(ang);
        topo.bs_positions(1, l) = radius * std::sin(ang);
        topo.bs_broadside(l) = wrap_pi(ang + arma::datum::pi);
    }
    return topo;
}

Drop drop_single_cell(arma::uword n_users, const ArrayConfig& array, double saoa,
                      arma::uword n_paths, std::uint64_t seed) {
    if (n_users == 0) throw std::invalid_argument("drop_single_cell: need at least one user");
    Drop d;
    d.array = array;
    d.saoa = saoa;
    d.seed = seed;
    d.topology = make_triangle_topology(1);
    d.ensemble.array = array;
    d.ensemble.n_users = {n_users};
    d.ensemble.link.assign(1, std::vector<std::vector<UserChannelModel>>(1));

    Engine eng = make_engine(derive_seed(seed, 0));
    auto& cell = d.ensemble.link[0][0];
    cell.reserve(n_users);
    for (arma::uword k = 0; k < n_users; ++k) {
        AngularProfile prof;
        prof.mean_aoa = draw_uniform(eng, -0.5 * arma::datum::pi, 0.5 * arma::datum::pi);
        prof.spread = saoa;
        prof.n_paths = n_paths;
        UserChannelModel u;
        u.paths = draw_paths(prof, eng);
        u.cov = analytical_beam_covariance(array, u.paths);
        u.gain = 1.0;
        cell.push_back(std::move(u));
    }
    return d;
}

Drop drop_multicell(const CellTopology& topology, const std::vector<arma::uword>& n_users,
                    const LargeScaleModel& largescale, const ArrayConfig& array,
                    double saoa, arma::uword n_paths, std::uint64_t seed) {
    const arma::uword L = topology.bs_positions.n_cols;
    if (L == 0 || n_users.size() != L)
        throw std::invalid_argument("drop_multicell: one user count per cell required");
    if (!(topology.cell_radius > topology.min_distance) || !(topology.min_distance > 0.0))
        throw std::invalid_argument("drop_multicell: need 0 < min_distance < cell_radius");

    Drop d;
    d.array = array;
    d.saoa = saoa;
    d.seed = seed;
    d.topology = topology;
    d.largescale = largescale;
    d.ensemble.array = array;
    d.ensemble.n_users = n_users;
    d.ensemble.link.assign(L, std::vector<std::vector<UserChannelModel>>(L));
    for (arma::uword b = 0; b < L; ++b)
        for (arma::uword c = 0; c < L; ++c) d.ensemble.link[b][c].resize(n_users[c]);
    d.positions.assign(L, {});

    Engine eng = make_engine(derive_seed(seed, 0));
    const double r0 = topology.min_distance;
    const double R = topology.cell_radius;

    // Draw order, replayed by the manifest: cells in order, users ascending;
    // per user first the position (wedge angle, then area-uniform radius),
    // then for every BS in order the shadowing draw and the path angles.
    for (arma::uword l = 0; l < L; ++l) {
        d.positions[l].resize(n_users[l]);
        for (arma::uword k = 0; k < n_users[l]; ++k) {
            const double off = draw_uniform(eng, -topology.wedge_halfwidth, topology.wedge_halfwidth);
            const double u01 = draw_uniform(eng, 0.0, 1.0);
            const double r = std::sqrt(u01 * (R * R - r0 * r0) + r0 * r0);
            const double heading = topology.bs_broadside(l) + off;
            arma::vec pos = {topology.bs_positions(0, l) + r * std::cos(heading),
                             topology.bs_positions(1, l) + r * std::sin(heading)};
            d.positions[l][k] = pos;

            for (arma::uword j = 0; j < L; ++j) {
                const double dx = pos(0) - topology.bs_positions(0, j);
                const double dy = pos(1) - topology.bs_positions(1, j);
                const double dist = std::max(std::hypot(dx, dy), largescale.reference_distance);
                const double shadow_db = draw_normal(eng, 0.0, largescale.shadow_sigma_db);
                const double gain = std::pow(10.0, shadow_db / 10.0) *
                                    std::pow(dist / largescale.reference_distance,
                                             -largescale.pathloss_exponent);

                AngularProfile prof;
                prof.mean_aoa = wrap_pi(std::atan2(dy, dx) - topology.bs_broadside(j));
                prof.spread = saoa;
                prof.n_paths = n_paths;

                UserChannelModel& link = d.ensemble.link[j][l][k];
                link.paths = draw_paths(prof, eng);
                link.cov = analytical_beam_covariance(array, link.paths);
                link.cov.spatial *= gain;
                link.cov.beam_diag *= gain;
                link.gain = gain;
            }
        }
    }
    return d;
}

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

arma::uword ceil_div(arma::uword a, arma::uword b) { return (a + b - 1) / b; }

Codebook build_book(CodebookKind kind, const ArrayConfig& array, arma::uword bits,
                    const SchemeOptions& opt, const UserChannelModel& user,
                    std::uint64_t book_seed) {
    const arma::uword eff = std::min<arma::uword>(bits, opt.b_cap);
    switch (kind) {
        case CodebookKind::dft: return dft_codebook(array.n_antennas, eff);
        case CodebookKind::skewed: return skewed_codebook(user.cov.spatial, eff, book_seed);
        case CodebookKind::prediction_grid:
            return prediction_grid_codebook(array.n_antennas, eff, opt.x_min, opt.x_max);
    }
    throw std::invalid_argument("build_book: unknown codebook kind");
}

Classification all_class_I(arma::uword K, arma::uword bits) {
    Classification cls;
    for (arma::uword k = 0; k < K; ++k) cls.class_I.push_back(k);
    cls.bits_per_I_user = bits;
    cls.chosen_f = K;
    return cls;
}

} // namespace

SchemeResult proposed_scheme(const Drop& drop, arma::uword B_total, const SchemeOptions& opt) {
    if (B_total == 0) throw std::invalid_argument("proposed_scheme: B_total must be positive");
    const double p_d = db_to_linear(opt.p_d_db);
    SchemeResult out;

    if (drop.single_cell()) {
        const auto& users = drop.cell0();
        std::vector<arma::vec> profiles;
        profiles.reserve(users.size());
        for (const auto& u : users) profiles.push_back(u.cov.beam_diag);

        out.split = greedy_classify(profiles, B_total, p_d, opt.x_min, opt.x_max);
        out.bound = sum_rate_lower_bound(profiles, out.split.class_I, out.split.class_S_ordered,
                                         out.split.bits_per_I_user, p_d, opt.x_min, opt.x_max);

        std::vector<Codebook> books;
        if (!out.split.class_I.empty()) {
            const Codebook shared =
                build_book(CodebookKind::prediction_grid, drop.array, out.split.bits_per_I_user,
                           opt, users.front(), 0);
            books.assign(out.split.class_I.size(), shared);
        }
        out.rate = monte_carlo_sum_rate(users, drop.array, out.split, books, opt.p_d_db,
                                        opt.trials, opt.seed, "proposed");
        out.rate.total_bits = B_total;
        return out;
    }

    out.mc_split = multicell_classify(drop.ensemble, B_total, p_d, opt.x_min, opt.x_max);
    const arma::uword L = drop.n_cells();
    std::vector<std::vector<bool>> mask(L);
    for (arma::uword l = 0; l < L; ++l) {
        mask[l].assign(drop.ensemble.n_users[l], false);
        for (arma::uword n : out.mc_split.per_cell[l].class_S_ordered) mask[l][n] = true;
    }
    out.bound = multicell_bound(drop.ensemble, mask, out.mc_split.bits_per_I_user, p_d,
                                opt.x_min, opt.x_max);

    std::vector<std::vector<Codebook>> books(L);
    if (out.mc_split.chosen_f > 0) {
        const Codebook shared =
            build_book(CodebookKind::prediction_grid, drop.array, out.mc_split.bits_per_I_user,
                       opt, drop.ensemble.link[0][0][0], 0);
        for (arma::uword l = 0; l < L; ++l)
            books[l].assign(out.mc_split.per_cell[l].class_I.size(), shared);
    }
    out.rate = monte_carlo_sum_rate_multicell(drop.ensemble, out.mc_split.per_cell, books,
                                              opt.p_d_db, opt.trials, opt.seed, "proposed");
    out.rate.total_bits = B_total;
    return out;
}

RateReport conventional_baseline(const Drop& drop, arma::uword B_total, CodebookKind kind,
                                 const SchemeOptions& opt) {
    if (B_total == 0)
        throw std::invalid_argument("conventional_baseline: B_total must be positive");
    const arma::uword K_total = drop.ensemble.total_users();
    const arma::uword bits = ceil_div(B_total, K_total);
    const std::string scheme = std::string("conventional-") + codebook_kind_name(kind);

    RateReport rep;
    if (drop.single_cell()) {
        const auto& users = drop.cell0();
        std::vector<Codebook> books;
        books.reserve(users.size());
        for (arma::uword k = 0; k < users.size(); ++k)
            books.push_back(build_book(kind, drop.array, bits, opt, users[k],
                                       derive_seed(opt.seed, 1000 + k)));
        rep = monte_carlo_sum_rate(users, drop.array, all_class_I(users.size(), bits), books,
                                   opt.p_d_db, opt.trials, opt.seed, scheme);
    } else {
        const arma::uword L = drop.n_cells();
        std::vector<Classification> per_cell;
        std::vector<std::vector<Codebook>> books(L);
        arma::uword pooled = 0;
        for (arma::uword l = 0; l < L; ++l) {
            per_cell.push_back(all_class_I(drop.ensemble.n_users[l], bits));
            for (arma::uword k = 0; k < drop.ensemble.n_users[l]; ++k, ++pooled)
                books[l].push_back(build_book(kind, drop.array, bits, opt,
                                              drop.ensemble.link[l][l][k],
                                              derive_seed(opt.seed, 1000 + pooled)));
        }
        rep = monte_carlo_sum_rate_multicell(drop.ensemble, per_cell, books, opt.p_d_db,
                                             opt.trials, opt.seed, scheme);
    }
    rep.total_bits = B_total;
    return rep;
}

RateReport perfect_csi(const Drop& drop, const SchemeOptions& opt) {
    if (!drop.single_cell())
        throw std::invalid_argument("perfect_csi: single-cell evaluation only");
    RateReport rep = monte_carlo_perfect(drop.cell0(), drop.array, opt.p_d_db, opt.trials,
                                         opt.seed, "perfect");
    rep.total_bits = 0;
    return rep;
}

namespace {

std::string fnum(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_drop_manifest(const Drop& drop, std::ostream& os) {
    const arma::uword L = drop.n_cells();
    os << "# drop manifest: replayable record of geometry, large-scale gains and path angles\n";
    os << "seed " << drop.seed << "\n";
    os << "antennas " << drop.array.n_antennas << "\n";
    os << "spacing " << fnum(drop.array.spacing) << "\n";
    os << "saoa_rad " << fnum(drop.saoa) << "\n";
    os << "cells " << L << "\n";
    os << "users";
    for (arma::uword l = 0; l < L; ++l) os << ' ' << drop.ensemble.n_users[l];
    os << "\n";
    for (arma::uword l = 0; l < L; ++l)
        os << "bs " << l << ' ' << fnum(drop.topology.bs_positions(0, l)) << ' '
           << fnum(drop.topology.bs_positions(1, l)) << ' ' << fnum(drop.topology.bs_broadside(l))
           << "\n";
    for (arma::uword l = 0; l < drop.positions.size(); ++l)
        for (arma::uword k = 0; k < drop.positions[l].size(); ++k)
            os << "user " << l << ' ' << k << ' ' << fnum(drop.positions[l][k](0)) << ' '
               << fnum(drop.positions[l][k](1)) << "\n";
    for (arma::uword j = 0; j < L; ++j)
        for (arma::uword l = 0; l < L; ++l)
            for (arma::uword k = 0; k < drop.ensemble.n_users[l]; ++k) {
                const UserChannelModel& link = drop.ensemble.link[j][l][k];
                os << "link " << j << ' ' << l << ' ' << k << " gain " << fnum(link.gain)
                   << " mean_aoa " << fnum(link.paths.profile.mean_aoa) << "\n";
                os << "aoas " << j << ' ' << l << ' ' << k;
                for (arma::uword p = 0; p < link.paths.aoas.n_elem; ++p)
                    os << ' ' << fnum(link.paths.aoas(p));
                os << "\n";
            }
}

void write_drop_manifest(const Drop& drop, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_drop_manifest(drop, os);
}

} // namespace hybridfb
