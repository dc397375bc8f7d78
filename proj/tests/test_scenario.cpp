// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hybridfb/scenario.hpp"

using namespace hybridfb;

namespace {

std::string manifest_of(const Drop& drop) {
    std::stringstream ss;
    write_drop_manifest(drop, ss);
    return ss.str();
}

double wrap_angle(double a) {
    while (a > arma::datum::pi) a -= 2.0 * arma::datum::pi;
    while (a < -arma::datum::pi) a += 2.0 * arma::datum::pi;
    return a;
}

} // namespace

TEST_CASE("triangle topology geometry") {
    const CellTopology topo = make_triangle_topology(3);
    REQUIRE(topo.bs_positions.n_cols == 3);
    const double side = 500.0 * std::sqrt(3.0);
    for (arma::uword b = 0; b < 3; ++b) {
        CHECK(arma::norm(topo.bs_positions.col(b), 2) == doctest::Approx(500.0).epsilon(1e-12));
        // Broadside points back at the centroid.
        const double want = std::atan2(-topo.bs_positions(1, b), -topo.bs_positions(0, b));
        CHECK(wrap_angle(topo.bs_broadside(b) - want) == doctest::Approx(0.0).epsilon(1e-12));
    }
    CHECK(arma::norm(topo.bs_positions.col(0) - topo.bs_positions.col(1), 2) ==
          doctest::Approx(side).epsilon(1e-12));
    CHECK(arma::norm(topo.bs_positions.col(1) - topo.bs_positions.col(2), 2) ==
          doctest::Approx(side).epsilon(1e-12));
    // First BS sits straight up from the centroid.
    CHECK(topo.bs_positions(0, 0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(topo.bs_positions(1, 0) == doctest::Approx(500.0).epsilon(1e-12));

    const CellTopology solo = make_triangle_topology(1);
    CHECK(arma::norm(solo.bs_positions.col(0), 2) == 0.0);
    CHECK(solo.bs_broadside(0) == doctest::Approx(arma::datum::pi / 2).epsilon(1e-15));

    CHECK_THROWS_AS(make_triangle_topology(0), std::invalid_argument);
}

TEST_CASE("synthetic single-cell drops are reproducible") {
    const ArrayConfig array{16, 0.5};
    const double saoa = 10.0 * arma::datum::pi / 180.0;
    const Drop a = drop_single_cell(5, array, saoa, 20, 42);
    const Drop b = drop_single_cell(5, array, saoa, 20, 42);
    const Drop c = drop_single_cell(5, array, saoa, 20, 43);
    CHECK(manifest_of(a) == manifest_of(b));
    CHECK(manifest_of(a) != manifest_of(c));

    CHECK(a.single_cell());
    REQUIRE(a.cell0().size() == 5);
    for (const auto& user : a.cell0()) {
        CHECK(user.gain == 1.0);
        CHECK(user.paths.profile.mean_aoa >= -arma::datum::pi / 2);
        CHECK(user.paths.profile.mean_aoa <= arma::datum::pi / 2);
        CHECK(user.paths.profile.spread == saoa);
        CHECK(user.paths.aoas.n_elem == 20);
        CHECK(user.cov.spatial.n_rows == 16);
        CHECK(user.cov.beam_diag.n_elem == 16);
    }
}

TEST_CASE("geometric drops respect the placement rules") {
    const CellTopology topo = make_triangle_topology(1);
    const LargeScaleModel ls; // 8 dB shadowing, exponent 2.2
    const ArrayConfig array{4, 0.5};
    const arma::uword K = 1000;
    const Drop d = drop_multicell(topo, {K}, ls, array, 10.0 * arma::datum::pi / 180.0, 20, 7);

    REQUIRE(d.positions.size() == 1);
    REQUIRE(d.positions[0].size() == K);

    arma::vec shadow(K);
    for (arma::uword k = 0; k < K; ++k) {
        const arma::vec& pos = d.positions[0][k];
        const double dist = arma::norm(pos, 2);
        CHECK(dist >= 100.0);
        CHECK(dist <= 500.0);
        const double bearing = wrap_angle(std::atan2(pos(1), pos(0)) - topo.bs_broadside(0));
        CHECK(std::abs(bearing) <= arma::datum::pi / 3 + 1e-12);

        const UserChannelModel& link = d.ensemble.link[0][0][k];
        CHECK(link.paths.profile.mean_aoa == doctest::Approx(bearing).epsilon(1e-12));

        // Invert the gain model to recover the shadowing draw.
        shadow(k) = 10.0 * std::log10(link.gain) +
                    ls.pathloss_exponent * 10.0 * std::log10(dist / ls.reference_distance);

        // Covariance scaling carries the whole large-scale gain.
        CHECK(arma::accu(link.cov.beam_diag) ==
              doctest::Approx(link.gain * 4.0).epsilon(1e-9));
    }
    CHECK(std::abs(arma::mean(shadow)) < 0.8);
    CHECK(arma::stddev(shadow) == doctest::Approx(8.0).epsilon(0.05));
}

TEST_CASE("zero shadow variance pins the gain to pathloss") {
    const CellTopology topo = make_triangle_topology(1);
    LargeScaleModel ls;
    ls.shadow_sigma_db = 0.0;
    const Drop d = drop_multicell(topo, {50}, ls, ArrayConfig{4, 0.5},
                                  10.0 * arma::datum::pi / 180.0, 20, 11);
    for (arma::uword k = 0; k < 50; ++k) {
        const double dist = arma::norm(d.positions[0][k], 2);
        const double want = std::pow(dist / 100.0, -2.2);
        CHECK(d.ensemble.link[0][0][k].gain == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("conventional budget rounds up per user") {
    const Drop drop = drop_single_cell(10, ArrayConfig{16, 0.5},
                                       10.0 * arma::datum::pi / 180.0, 20, 3);
    SchemeOptions opt;
    opt.trials = 40;
    opt.seed = 5;
    // 32 and 40 total bits both mean 4 bits per user; 41 pushes to 5.
    const RateReport r32 = conventional_baseline(drop, 32, CodebookKind::dft, opt);
    const RateReport r40 = conventional_baseline(drop, 40, CodebookKind::dft, opt);
    const RateReport r41 = conventional_baseline(drop, 41, CodebookKind::dft, opt);
    CHECK(r32.sum_rate == r40.sum_rate);
    CHECK(r32.sum_rate != r41.sum_rate);
    CHECK(r32.total_bits == 32);
    CHECK(r40.total_bits == 40);
    CHECK(r32.scheme == "conventional-dft");
}

TEST_CASE("a single user makes the proposed scheme collapse to the baseline") {
    const Drop drop = drop_single_cell(1, ArrayConfig{16, 0.5},
                                       10.0 * arma::datum::pi / 180.0, 20, 9);
    SchemeOptions opt;
    opt.trials = 60;
    opt.seed = 21;
    const SchemeResult prop = proposed_scheme(drop, 8, opt);
    const RateReport conv = conventional_baseline(drop, 8, CodebookKind::prediction_grid, opt);

    CHECK(prop.split.chosen_f == 1);
    CHECK(prop.split.bits_per_I_user == 8);
    CHECK(prop.rate.scheme == "proposed");
    CHECK(conv.scheme == "conventional-grid");
    CHECK(prop.rate.sum_rate == conv.sum_rate);
    CHECK(prop.rate.ci95 == conv.ci95);
    CHECK(prop.rate.per_user[0] == conv.per_user[0]);
}

TEST_CASE("more feedback closes the gap to exact feedback") {
    const Drop drop = drop_single_cell(4, ArrayConfig{16, 0.5},
                                       10.0 * arma::datum::pi / 180.0, 20, 13);
    SchemeOptions opt;
    opt.trials = 100;
    opt.seed = 31;
    const SchemeResult tight = proposed_scheme(drop, 4, opt);
    const SchemeResult loose = proposed_scheme(drop, 40, opt);
    const RateReport exact = perfect_csi(drop, opt);
    CHECK(loose.rate.sum_rate > tight.rate.sum_rate);
    CHECK(exact.sum_rate > 0.85 * loose.rate.sum_rate);
    CHECK(exact.total_bits == 0);
}

TEST_CASE("the codebook cap trims evaluation, not prediction") {
    const Drop drop = drop_single_cell(1, ArrayConfig{16, 0.5},
                                       10.0 * arma::datum::pi / 180.0, 20, 17);
    SchemeOptions coarse;
    coarse.trials = 50;
    coarse.seed = 3;
    coarse.b_cap = 2;
    SchemeOptions fine = coarse;
    fine.b_cap = 14;

    const SchemeResult a = proposed_scheme(drop, 28, coarse);
    const SchemeResult b = proposed_scheme(drop, 28, fine);
    // The predictor always sees the full 28-bit budget.
    CHECK(a.bound.value == b.bound.value);
    CHECK(a.split.bits_per_I_user == 28);
    // Monte Carlo materializes 2^2 vs 2^14 codewords.
    CHECK(a.rate.sum_rate != b.rate.sum_rate);
    CHECK(a.rate.sum_rate < b.rate.sum_rate);
}

TEST_CASE("exact-feedback evaluation is single-cell only") {
    const Drop d = drop_multicell(make_triangle_topology(2), {2, 2}, LargeScaleModel{},
                                  ArrayConfig{8, 0.5}, 10.0 * arma::datum::pi / 180.0, 20, 19);
    SchemeOptions opt;
    CHECK_THROWS_AS(perfect_csi(d, opt), std::invalid_argument);
}

TEST_CASE("multi-cell evaluation returns a pooled report") {
    const Drop d = drop_multicell(make_triangle_topology(3), {2, 2, 2}, LargeScaleModel{},
                                  ArrayConfig{8, 0.5}, 10.0 * arma::datum::pi / 180.0, 20, 23);
    SchemeOptions opt;
    opt.trials = 30;
    opt.seed = 8;
    const SchemeResult res = proposed_scheme(d, 18, opt);
    CHECK(res.rate.scheme == "proposed");
    CHECK(res.rate.n_users == 6);
    CHECK(res.rate.total_bits == 18);
    CHECK(res.rate.per_user.size() == 6);
    CHECK(res.mc_split.per_cell.size() == 3);
    CHECK(res.bound.eff_sinr.size() == 6);
    CHECK(res.rate.sum_rate > 0.0);

    const RateReport conv = conventional_baseline(d, 18, CodebookKind::dft, opt);
    CHECK(conv.n_users == 6);
    CHECK(conv.scheme == "conventional-dft");
    CHECK(conv.sum_rate > 0.0);
}

TEST_CASE("drop manifests record the full link structure") {
    const Drop d = drop_multicell(make_triangle_topology(2), {2, 3}, LargeScaleModel{},
                                  ArrayConfig{8, 0.5}, 10.0 * arma::datum::pi / 180.0, 20, 29);
    const std::string text = manifest_of(d);
    CHECK(text.find("seed 29\n") != std::string::npos);
    CHECK(text.find("antennas 8\n") != std::string::npos);
    CHECK(text.find("cells 2\n") != std::string::npos);
    CHECK(text.find("users 2 3\n") != std::string::npos);

    std::size_t bs_lines = 0, user_lines = 0, link_lines = 0, aoa_lines = 0;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind("bs ", 0) == 0) ++bs_lines;
        if (line.rfind("user ", 0) == 0) ++user_lines;
        if (line.rfind("link ", 0) == 0) ++link_lines;
        if (line.rfind("aoas ", 0) == 0) ++aoa_lines;
    }
    CHECK(bs_lines == 2);
    CHECK(user_lines == 5);
    CHECK(link_lines == 10); // every BS sees every user
    CHECK(aoa_lines == 10);
}
