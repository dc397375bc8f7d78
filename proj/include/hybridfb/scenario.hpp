// SPDX-License-Identifier: Apache-2.0
//
// Drop generation (user geometry, large-scale fading, per-link statistics)
// and end-to-end scheme evaluation on a drop.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hybridfb/classifier.hpp"
#include "hybridfb/rate.hpp"

namespace hybridfb {

struct CellTopology {
    arma::mat bs_positions;   // 2 x L, meters
    arma::vec bs_broadside;   // heading of each array broadside, radians
    double cell_radius = 500.0;
    double min_distance = 100.0;
    double wedge_halfwidth = arma::datum::pi / 3.0; // users within +-60 deg
};

// L base stations on the vertices of an equilateral triangle with side
// 500*sqrt(3) m (every BS 500 m from the centroid), broadsides facing the
// centroid. L = 1 places one BS at the origin heading +y.
CellTopology make_triangle_topology(arma::uword n_cells = 3);

struct LargeScaleModel {
    double shadow_sigma_db = 8.0;
    double pathloss_exponent = 2.2;
    double reference_distance = 100.0; // meters; gain 1 at this distance
};

// One drop: everything that stays fixed while fast fading varies.
struct Drop {
    ArrayConfig array;
    double saoa = 0.0; // angular spread, radians
    std::uint64_t seed = 0;
    CellTopology topology;
    LargeScaleModel largescale;
    MulticellEnsemble ensemble;
    std::vector<std::vector<arma::vec>> positions; // [cell][user], 2-vectors; empty when synthetic

    arma::uword n_cells() const { return ensemble.n_cells(); }
    bool single_cell() const { return n_cells() == 1; }
    const std::vector<UserChannelModel>& cell0() const { return ensemble.link[0][0]; }
};

// Synthetic single cell: K users with mean AoAs i.i.d. uniform on
// [-pi/2, pi/2], common spread, unit large-scale gain, analytical
// covariances attached. No geometry.
Drop drop_single_cell(arma::uword n_users, const ArrayConfig& array, double saoa,
                      arma::uword n_paths, std::uint64_t seed);

// Geometric multi-cell drop: users uniform by area in each BS's wedge
// between min_distance and cell_radius; every (BS, user) link gets a mean
// AoA from the bearing in that BS's broadside frame, lognormal shadowing
// (i.i.d. per link), pathloss (d / d_ref)^(-nu), and scaled analytical
// covariances.
Drop drop_multicell(const CellTopology& topology, const std::vector<arma::uword>& n_users,
                    const LargeScaleModel& largescale, const ArrayConfig& array,
                    double saoa, arma::uword n_paths, std::uint64_t seed);

struct SchemeOptions {
    double p_d_db = 10.0;
    arma::uword trials = 500;
    std::uint64_t seed = 1;
    arma::uword x_min = 1, x_max = 0; // prediction grid bounds
    arma::uword b_cap = 14;           // materialized-codebook bit cap (MC only)
    CodebookKind conventional_kind = CodebookKind::dft;
};

struct SchemeResult {
    Classification split;              // single-cell
    MulticellClassification mc_split;  // multi-cell
    RateReport rate;
    BoundReport bound;
};

// Proposed scheme: classify (greedy), allocate floor(B_total / K_I) bits to
// each class-I user, quantize on the prediction grid, evaluate by Monte
// Carlo and by the covariance-only predictor.
SchemeResult proposed_scheme(const Drop& drop, arma::uword B_total, const SchemeOptions& opt);

// Conventional baseline: every user class-I with ceil(B_total / K) bits from
// the requested codebook kind.
RateReport conventional_baseline(const Drop& drop, arma::uword B_total,
                                 CodebookKind kind, const SchemeOptions& opt);

// All users with exact direction feedback.
RateReport perfect_csi(const Drop& drop, const SchemeOptions& opt);

// Replayable record of a drop: positions, large-scale gains, every link's
// mean AoA and path angles, and the seeds involved.
void write_drop_manifest(const Drop& drop, std::ostream& os);
void write_drop_manifest(const Drop& drop, const std::string& path);

} // namespace hybridfb
