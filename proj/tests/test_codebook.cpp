// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hybridfb/channel.hpp"
#include "hybridfb/codebook.hpp"

using namespace hybridfb;

namespace {

arma::cx_mat random_covariance(std::uint64_t seed, arma::uword M) {
    Engine eng = make_engine(seed);
    AngularProfile prof{0.3, 0.2, 20};
    const PathSet paths = draw_paths(prof, eng);
    return analytical_beam_covariance(ArrayConfig{M, 0.5}, paths).spatial;
}

} // namespace

TEST_CASE("codebook kind names round-trip") {
    CHECK(codebook_kind_from_name("dft") == CodebookKind::dft);
    CHECK(codebook_kind_from_name("skewed") == CodebookKind::skewed);
    CHECK(codebook_kind_from_name("grid") == CodebookKind::prediction_grid);
    CHECK(codebook_kind_from_name("prediction-grid") == CodebookKind::prediction_grid);
    CHECK(std::string(codebook_kind_name(CodebookKind::prediction_grid)) == "grid");
    CHECK_THROWS_AS(codebook_kind_from_name("fourier"), std::invalid_argument);
}

TEST_CASE("dft codebook doubles by refinement") {
    // Word u of the B-bit book reappears as word 2u one level up.
    const arma::uword M = 16;
    for (arma::uword b = 1; b < 5; ++b) {
        const Codebook coarse = dft_codebook(M, b);
        const Codebook fine = dft_codebook(M, b + 1);
        for (arma::uword u = 1; u <= coarse.words.n_cols; ++u)
            CHECK(arma::norm(coarse.words.col(u - 1) - fine.words.col(2 * u - 1), 2) == 0.0);
    }
}

TEST_CASE("dft codebook words are unit norm") {
    const Codebook book = dft_codebook(32, 5);
    REQUIRE(book.words.n_cols == 32);
    for (arma::uword u = 0; u < book.words.n_cols; ++u)
        CHECK(arma::norm(book.words.col(u), 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("skewed codebook nests under a fixed seed") {
    const arma::cx_mat cov = random_covariance(4, 8);
    const Codebook small = skewed_codebook(cov, 3, 99);
    const Codebook big = skewed_codebook(cov, 5, 99);
    CHECK(arma::norm(small.words - big.words.cols(0, 7), "fro") == 0.0);
}

TEST_CASE("skewed codebook words are unit norm and covariance-shaped") {
    const arma::cx_mat cov = random_covariance(6, 16);
    const Codebook book = skewed_codebook(cov, 4, 5);
    double shaped = 0.0, isotropic = 0.0;
    Engine eng = make_engine(8);
    for (arma::uword u = 0; u < book.words.n_cols; ++u) {
        CHECK(arma::norm(book.words.col(u), 2) == doctest::Approx(1.0).epsilon(1e-12));
        shaped += std::real(arma::cdot(book.words.col(u), cov * book.words.col(u)));
        arma::cx_vec r = draw_complex_gaussian(eng, 16);
        r /= arma::norm(r);
        isotropic += std::real(arma::cdot(r, cov * r));
    }
    // Skewing concentrates codewords where the covariance has power.
    CHECK(shaped > isotropic);
}

TEST_CASE("prediction grid words follow the documented phase grid") {
    const arma::uword M = 8, bits = 3;
    const Codebook book = prediction_grid_codebook(M, bits); // x_min=1, x_max=M
    REQUIRE(book.words.n_cols == 8);
    CHECK(book.x_min == 1);
    CHECK(book.x_max == 8);

    const double X = 8.0;
    for (arma::uword u = 1; u <= 8; ++u) {
        const double eta = (2.0 * 1.0 / 8.0 - 1.0) + double(u) * 2.0 * (8.0 - 1.0) / (8.0 * X);
        for (arma::uword m = 0; m < M; ++m) {
            const std::complex<double> want =
                std::polar(1.0 / std::sqrt(8.0), arma::datum::pi * double(m) * eta);
            CHECK(std::abs(book.words(m, u - 1) - want) < 1e-15);
        }
    }
    // The last word sits on the upper bound of the support interval.
    const double eta_last = 2.0 * 8.0 / 8.0 - 1.0;
    CHECK(std::abs(book.words(1, 7) -
                   std::polar(1.0 / std::sqrt(8.0), arma::datum::pi * eta_last)) < 1e-15);
}

TEST_CASE("grid bounds are validated") {
    CHECK_THROWS_AS(prediction_grid_codebook(8, 3, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(prediction_grid_codebook(8, 3, 5, 4), std::invalid_argument);
    CHECK_THROWS_AS(prediction_grid_codebook(8, 3, 1, 9), std::invalid_argument);
    CHECK_THROWS_AS(prediction_grid_codebook(8, 0), std::invalid_argument);
    CHECK_THROWS_AS(prediction_grid_codebook(8, 27), std::invalid_argument);
}

TEST_CASE("quantize picks the best-aligned word") {
    const arma::uword M = 16;
    const Codebook book = dft_codebook(M, 4);
    Engine eng = make_engine(12);
    for (int i = 0; i < 20; ++i) {
        const arma::cx_vec h = draw_complex_gaussian(eng, M);
        const QuantizationResult got = quantize(h, book);

        arma::uword best_u = 0;
        double best = -1.0;
        const double hn2 = std::norm(arma::norm(h));
        for (arma::uword u = 0; u < book.words.n_cols; ++u) {
            const double a = std::norm(arma::cdot(book.words.col(u), h)) / hn2;
            if (a > best) {
                best = a;
                best_u = u;
            }
        }
        CHECK(got.index == best_u + 1);
        CHECK(got.alignment == doctest::Approx(best).epsilon(1e-12));
        CHECK(got.alignment >= 0.0);
        CHECK(got.alignment <= 1.0 + 1e-12);
    }
}

TEST_CASE("quantize breaks ties toward the lowest index") {
    Codebook book;
    book.kind = CodebookKind::dft;
    book.bits = 1;
    book.words.set_size(4, 2);
    const arma::cx_vec w = arma::cx_vec(4, arma::fill::ones) / 2.0;
    book.words.col(0) = w;
    book.words.col(1) = w; // identical word duplicated
    const arma::cx_vec h = {{1.0, 0.0}, {0.5, 0.5}, {0.0, 0.0}, {0.25, -1.0}};
    CHECK(quantize(h, book).index == 1);
}

TEST_CASE("quantize validates input") {
    const Codebook book = dft_codebook(8, 2);
    CHECK_THROWS_AS(quantize(arma::cx_vec(4, arma::fill::ones), book), std::invalid_argument);
    CHECK_THROWS_AS(quantize(arma::cx_vec(8, arma::fill::zeros), book), std::invalid_argument);
}

TEST_CASE("predicted feedback matches a brute-force scan") {
    // Oracle: walk every codeword, apply the documented rounding, and take
    // the first maximizer.
    const arma::uword M = 16;
    Engine eng = make_engine(23);
    for (arma::uword bits : {1u, 3u, 7u, 12u}) {
        for (int rep = 0; rep < 5; ++rep) {
            arma::vec profile(M);
            for (arma::uword t = 0; t < M; ++t) profile(t) = draw_uniform(eng, 0.0, 4.0);

            const PredictedFeedback got = predict_feedback(profile, bits);

            const std::uint64_t X = std::uint64_t(1) << bits;
            const double slope = double(M - 1) / double(X);
            std::uint64_t want_u = 0;
            arma::uword want_beam = 0;
            double best = -1.0;
            for (std::uint64_t u = 1; u <= X; ++u) {
                long long v = std::llround(1.0 + slope * double(u));
                if (v < 1) v = 1;
                if (v > 16) v = 16;
                if (profile(v - 1) > best) {
                    best = profile(v - 1);
                    want_u = u;
                    want_beam = arma::uword(v);
                }
            }
            CHECK(got.codeword_index == want_u);
            CHECK(got.beam_index == want_beam);
        }
    }
}

TEST_CASE("predicted feedback closed form agrees with enumeration") {
    // bits > 16 switches to the per-beam closed form; replay the exhaustive
    // scan here as the oracle.
    const arma::uword M = 32, bits = 17;
    Engine eng = make_engine(29);
    arma::vec profile(M);
    for (arma::uword t = 0; t < M; ++t) profile(t) = draw_uniform(eng, 0.0, 4.0);

    const PredictedFeedback got = predict_feedback(profile, bits);

    const std::uint64_t X = std::uint64_t(1) << bits;
    const double slope = double(M - 1) / double(X);
    std::uint64_t want_u = 0;
    arma::uword want_beam = 0;
    double best = -1.0;
    for (std::uint64_t u = 1; u <= X; ++u) {
        long long v = std::llround(1.0 + slope * double(u));
        if (v < 1) v = 1;
        if (v > 32) v = 32;
        if (profile(v - 1) > best) {
            best = profile(v - 1);
            want_u = u;
            want_beam = arma::uword(v);
        }
    }
    CHECK(got.codeword_index == want_u);
    CHECK(got.beam_index == want_beam);
}

TEST_CASE("predicted feedback respects narrowed grid bounds") {
    arma::vec profile = {10.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 9.0};
    // Support restricted to beams 2..6: neither endpoint peak is reachable.
    const PredictedFeedback got = predict_feedback(profile, 4, 2, 6);
    CHECK(got.beam_index >= 2);
    CHECK(got.beam_index <= 6);
}

TEST_CASE("predicted feedback validates bits") {
    const arma::vec profile(8, arma::fill::ones);
    CHECK_THROWS_AS(predict_feedback(profile, 0), std::invalid_argument);
    CHECK_THROWS_AS(predict_feedback(profile, 63), std::invalid_argument);
    CHECK_NOTHROW(predict_feedback(profile, 62));
}

TEST_CASE("codebook words survive a save/load round trip") {
    const Codebook book = skewed_codebook(random_covariance(15, 8), 3, 123);
    std::stringstream ss;
    save_codebook_words(book, ss);
    const arma::cx_mat loaded = load_codebook_words(ss);
    REQUIRE(loaded.n_rows == book.words.n_rows);
    REQUIRE(loaded.n_cols == book.words.n_cols);
    CHECK(arma::norm(loaded - book.words, "fro") == 0.0);
}

TEST_CASE("codebook loader rejects malformed input") {
    std::stringstream missing_sep("1.0,2.0:3.0\n");
    CHECK_THROWS_AS(load_codebook_words(missing_sep), std::runtime_error);
    std::stringstream ragged("1.0:2.0,3.0:4.0\n5.0:6.0\n");
    CHECK_THROWS_AS(load_codebook_words(ragged), std::runtime_error);
    std::stringstream empty("");
    CHECK_THROWS_AS(load_codebook_words(empty), std::runtime_error);
}
