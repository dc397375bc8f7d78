// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "hybridfb/channel.hpp"
#include "hybridfb/numerics.hpp"
#include "hybridfb/precoder.hpp"

using namespace hybridfb;

namespace {

FeedbackState random_state(std::uint64_t seed, arma::uword M, arma::uword n_quant,
                           arma::uword n_stat, double p_d) {
    Engine eng = make_engine(seed);
    FeedbackState state;
    state.p_d = p_d;
    for (arma::uword i = 0; i < n_quant; ++i) {
        arma::cx_vec h = draw_complex_gaussian(eng, M);
        state.quantized.push_back(h / arma::norm(h));
    }
    for (arma::uword n = 0; n < n_stat; ++n) {
        AngularProfile prof{draw_uniform(eng, -1.0, 1.0), 10.0 * arma::datum::pi / 180.0, 20};
        const PathSet paths = draw_paths(prof, eng);
        state.statistical.push_back(
            analytical_beam_covariance(ArrayConfig{M, 0.5}, paths).spatial);
    }
    return state;
}

double gen_quotient(const arma::cx_vec& w, const arma::cx_mat& N, const arma::cx_mat& D) {
    return std::real(arma::cdot(w, N * w)) / std::real(arma::cdot(w, D * w));
}

} // namespace

TEST_CASE("quantized-user precoder solves the closed form") {
    const arma::uword M = 8;
    const FeedbackState state = random_state(3, M, 3, 2, 10.0);
    const PrecoderBank bank = slnr_precoders_hybrid(state);

    REQUIRE(bank.quantized.size() == 3);
    REQUIRE(bank.statistical.size() == 2);
    CHECK(bank.scheme == "slnr-hybrid");

    for (std::size_t i = 0; i < 3; ++i) {
        arma::cx_mat D(M, M, arma::fill::zeros);
        for (std::size_t j = 0; j < 3; ++j)
            if (j != i) D += state.quantized[j] * state.quantized[j].t();
        for (const auto& cov : state.statistical) D += cov;
        D.diag() += 1.0 / state.p_d;
        D = (D + D.t()) / 2.0;

        arma::cx_vec want = arma::solve(D, state.quantized[i]);
        want /= arma::norm(want);
        // Direction match up to a common phase.
        CHECK(std::abs(arma::cdot(want, bank.quantized[i])) ==
              doctest::Approx(1.0).epsilon(1e-10));
        CHECK(arma::norm(bank.quantized[i], 2) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("covariance-user precoder maximizes the generalized quotient") {
    const arma::uword M = 8;
    const FeedbackState state = random_state(7, M, 2, 3, 5.0);
    const PrecoderBank bank = slnr_precoders_hybrid(state);
    REQUIRE(bank.statistical.size() == 3);

    Engine eng = make_engine(11);
    for (std::size_t n = 0; n < 3; ++n) {
        arma::cx_mat D(M, M, arma::fill::zeros);
        for (std::size_t q = 0; q < 3; ++q)
            if (q != n) D += state.statistical[q];
        for (const auto& h : state.quantized) D += h * h.t();
        D.diag() += 1.0 / state.p_d;
        D = (D + D.t()) / 2.0;

        const double achieved = gen_quotient(bank.statistical[n], state.statistical[n], D);
        for (int probe = 0; probe < 2000; ++probe) {
            arma::cx_vec r = draw_complex_gaussian(eng, M);
            CHECK(achieved >= gen_quotient(r, state.statistical[n], D) * (1.0 - 1e-10));
        }
        CHECK(arma::norm(bank.statistical[n], 2) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("covariance precoder aligns with a dominant direction") {
    // A near-rank-one covariance with weak interference pins the answer.
    const arma::uword M = 6;
    Engine eng = make_engine(19);
    arma::cx_vec d = draw_complex_gaussian(eng, M);
    d /= arma::norm(d);

    FeedbackState state;
    state.p_d = 1000.0;
    arma::cx_mat cov = d * d.t();
    cov.diag() += 1e-8;
    state.statistical.push_back((cov + cov.t()) / 2.0);

    const PrecoderBank bank = slnr_precoders_hybrid(state);
    CHECK(std::abs(arma::cdot(d, bank.statistical[0])) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("precoder bank concatenates quantized before statistical") {
    const FeedbackState state = random_state(13, 8, 2, 2, 10.0);
    const PrecoderBank bank = slnr_precoders_hybrid(state);
    const std::vector<arma::cx_vec> all = bank.all();
    REQUIRE(all.size() == 4);
    CHECK(arma::norm(all[0] - bank.quantized[0], 2) == 0.0);
    CHECK(arma::norm(all[1] - bank.quantized[1], 2) == 0.0);
    CHECK(arma::norm(all[2] - bank.statistical[0], 2) == 0.0);
    CHECK(arma::norm(all[3] - bank.statistical[1], 2) == 0.0);
}

TEST_CASE("precoder input validation") {
    FeedbackState empty;
    empty.p_d = 10.0;
    CHECK_THROWS_AS(slnr_precoders_hybrid(empty), std::invalid_argument);

    FeedbackState bad_power = random_state(17, 8, 1, 1, 10.0);
    bad_power.p_d = 0.0;
    CHECK_THROWS_AS(slnr_precoders_hybrid(bad_power), std::invalid_argument);

    FeedbackState mismatch = random_state(21, 8, 1, 1, 10.0);
    mismatch.statistical[0] = arma::cx_mat(4, 4, arma::fill::eye);
    CHECK_THROWS_AS(slnr_precoders_hybrid(mismatch), std::invalid_argument);
}

TEST_CASE("beam-domain approximation picks the least-loaded strong beam") {
    const arma::uword M = 4;
    const double p_d = 2.0; // 1/p_d = 0.5
    const std::vector<arma::uword> predicted = {2, 2};

    // User ratios by hand (other-user profile {1,1,1,1}):
    //   profile {4,8,2,1}: beam 1: 4/(0.5+1+0) = 8/3
    //                      beam 2: 8/(0.5+1+2) = 16/7
    //                      beam 3: 2/(0.5+1+0) = 4/3
    //                      beam 4: 1/(0.5+1+0) = 2/3    -> beam 1
    //   profile {1,1,1,1}: other-user profile {4,8,2,1},
    //                      beam 3 densest-free: 1/(0.5+2+0) = 0.4
    //                      beam 4: 1/(0.5+1+0) = 2/3    -> beam 4
    const std::vector<arma::vec> profiles = {arma::vec{4.0, 8.0, 2.0, 1.0},
                                             arma::vec{1.0, 1.0, 1.0, 1.0}};
    const std::vector<arma::uword> got = approx_precoder_indices(predicted, profiles, M, p_d);
    REQUIRE(got.size() == 4);
    CHECK(got[0] == 2);
    CHECK(got[1] == 2);
    CHECK(got[2] == 1);
    CHECK(got[3] == 4);
}

TEST_CASE("beam-domain approximation breaks ties toward the lowest beam") {
    const std::vector<arma::vec> profiles = {arma::vec{1.0, 1.0, 1.0}};
    const std::vector<arma::uword> got =
        approx_precoder_indices({}, profiles, 3, 1.0);
    REQUIRE(got.size() == 1);
    CHECK(got[0] == 1);
}

TEST_CASE("beam-domain approximation passes predicted beams through") {
    const std::vector<arma::uword> got = approx_precoder_indices({3, 1, 4}, {}, 4, 10.0);
    REQUIRE(got.size() == 3);
    CHECK(got[0] == 3);
    CHECK(got[1] == 1);
    CHECK(got[2] == 4);
}

TEST_CASE("network precoders react to cross-cell covariances") {
    const arma::uword M = 8;
    MulticellFeedback fb;
    fb.cells.push_back(random_state(31, M, 2, 1, 10.0));
    fb.cells.push_back(random_state(37, M, 1, 2, 10.0));
    fb.cross.assign(2, std::vector<std::vector<arma::cx_mat>>(2));

    Engine eng = make_engine(41);
    for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t c = 0; c < 2; ++c) {
            if (b == c) continue;
            const std::size_t users = fb.cells[c].quantized.size() +
                                      fb.cells[c].statistical.size();
            for (std::size_t k = 0; k < users; ++k) {
                AngularProfile prof{draw_uniform(eng, -1.0, 1.0),
                                    10.0 * arma::datum::pi / 180.0, 20};
                fb.cross[b][c].push_back(
                    analytical_beam_covariance(ArrayConfig{M, 0.5}, draw_paths(prof, eng))
                        .spatial);
            }
        }

    const std::vector<PrecoderBank> banks = slnr_precoders_multicell(fb);
    REQUIRE(banks.size() == 2);
    CHECK(banks[0].scheme == "slnr-multicell");
    CHECK(banks[0].quantized.size() == 2);
    CHECK(banks[1].statistical.size() == 2);

    // Zeroing the leakage terms must move the solution.
    MulticellFeedback quiet = fb;
    for (auto& row : quiet.cross)
        for (auto& cell : row)
            for (auto& cov : cell) cov.zeros();
    const std::vector<PrecoderBank> quiet_banks = slnr_precoders_multicell(quiet);
    CHECK(arma::norm(banks[0].quantized[0] - quiet_banks[0].quantized[0], 2) > 1e-6);
}

TEST_CASE("network precoders validate the cross-covariance shape") {
    MulticellFeedback fb;
    fb.cells.push_back(random_state(43, 8, 1, 1, 10.0));
    fb.cells.push_back(random_state(47, 8, 1, 1, 10.0));
    fb.cross.assign(2, std::vector<std::vector<arma::cx_mat>>(1));
    CHECK_THROWS_AS(slnr_precoders_multicell(fb), std::invalid_argument);
}
