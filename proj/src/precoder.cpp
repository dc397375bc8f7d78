// SPDX-License-Identifier: Apache-2.0

#include "hybridfb/precoder.hpp"

#include <stdexcept>

#include "hybridfb/numerics.hpp"

namespace hybridfb {

std::vector<arma::cx_vec> PrecoderBank::all() const {
    std::vector<arma::cx_vec> w;
    w.reserve(quantized.size() + statistical.size());
    for (const auto& v : quantized) w.push_back(v);
    for (const auto& v : statistical) w.push_back(v);
    return w;
}

namespace {

arma::uword infer_dim(const FeedbackState& state) {
    if (!state.quantized.empty()) return state.quantized.front().n_elem;
    if (!state.statistical.empty()) return state.statistical.front().n_rows;
    throw std::invalid_argument("slnr precoding: no users");
}

void check_state(const FeedbackState& state, arma::uword M) {
    if (!(state.p_d > 0.0))
        throw std::invalid_argument("slnr precoding: p_d must be positive");
    for (const auto& h : state.quantized)
        if (h.n_elem != M) throw std::invalid_argument("slnr precoding: direction dimension mismatch");
    for (const auto& c : state.statistical)
        if (c.n_rows != M || c.n_cols != M)
            throw std::invalid_argument("slnr precoding: covariance dimension mismatch");
}

// Leakage-plus-noise total shared by every user of one BS; per-user
// denominators subtract the own term.
arma::cx_mat leakage_total(const FeedbackState& state, arma::uword M,
                           const arma::cx_mat* extra) {
    arma::cx_mat T(M, M, arma::fill::zeros);
    for (const auto& h : state.quantized) T += h * h.t();
    for (const auto& c : state.statistical) T += c;
    if (extra) T += *extra;
    T.diag() += std::complex<double>(1.0 / state.p_d, 0.0);
    return 0.5 * (T + T.t());
}

arma::cx_vec unit(arma::cx_vec v) {
    const double n = arma::norm(v);
    if (n < 1e-300) throw std::runtime_error("slnr precoding: zero precoder");
    return v / n;
}

// Principal generalized eigenvector of (N, D) by whitening: D = L L^H,
// eigendecompose L^{-1} N L^{-H}, map back through L^{-H}.
arma::cx_vec whitened_principal(const arma::cx_mat& N, const arma::cx_mat& D) {
    arma::cx_mat R;
    if (!arma::chol(R, D))
        throw std::runtime_error("slnr precoding: denominator not positive definite");
    const arma::cx_mat L = R.t();
    const arma::cx_mat Z = arma::solve(arma::trimatl(L), N);
    arma::cx_mat B = arma::solve(arma::trimatl(L), Z.t()).t();
    B = 0.5 * (B + B.t());
    const EigenResult eig = hermitian_eig(B);
    const arma::cx_vec v = eig.vectors.col(0);
    return unit(arma::solve(arma::trimatu(L.t()), v));
}

PrecoderBank hybrid_bank(const FeedbackState& state, const arma::cx_mat* extra,
                         const char* scheme) {
    const arma::uword M = infer_dim(state);
    check_state(state, M);
    const arma::cx_mat T = leakage_total(state, M, extra);

    PrecoderBank bank;
    bank.scheme = scheme;
    bank.quantized.reserve(state.quantized.size());
    for (const auto& h : state.quantized) {
        arma::cx_mat D = T - h * h.t();
        D = 0.5 * (D + D.t());
        // Rank-one numerator: the SLNR maximizer is D^{-1} h renormalized.
        bank.quantized.push_back(unit(solve_hpd(D, h)));
    }
    bank.statistical.reserve(state.statistical.size());
    for (const auto& c : state.statistical) {
        arma::cx_mat D = T - c;
        D = 0.5 * (D + D.t());
        bank.statistical.push_back(whitened_principal(c, D));
    }
    return bank;
}

} // namespace

PrecoderBank slnr_precoders_hybrid(const FeedbackState& state) {
    return hybrid_bank(state, nullptr, "slnr-hybrid");
}

std::vector<arma::uword> approx_precoder_indices(
    const std::vector<arma::uword>& predicted_beams,
    const std::vector<arma::vec>& statistical_profiles, arma::uword M, double p_d) {
    if (!(p_d > 0.0))
        throw std::invalid_argument("approx_precoder_indices: p_d must be positive");
    for (const auto& prof : statistical_profiles)
        if (prof.n_elem != M)
            throw std::invalid_argument("approx_precoder_indices: profile length mismatch");
    for (arma::uword b : predicted_beams)
        if (b < 1 || b > M)
            throw std::invalid_argument("approx_precoder_indices: beam index out of range");

    std::vector<arma::uword> out(predicted_beams.begin(), predicted_beams.end());
    const std::size_t S = statistical_profiles.size();
    for (std::size_t n = 0; n < S; ++n) {
        double best = -1.0;
        arma::uword best_l = 1;
        for (arma::uword l = 1; l <= M; ++l) {
            double den = 1.0 / p_d;
            for (std::size_t q = 0; q < S; ++q)
                if (q != n) den += statistical_profiles[q](l - 1);
            for (arma::uword b : predicted_beams)
                if (b == l) den += 1.0;
            const double val = statistical_profiles[n](l - 1) / den;
            if (val > best) {
                best = val;
                best_l = l;
            }
        }
        out.push_back(best_l);
    }
    return out;
}

std::vector<PrecoderBank> slnr_precoders_multicell(const MulticellFeedback& feedback) {
    const std::size_t L = feedback.cells.size();
    if (L == 0) throw std::invalid_argument("slnr_precoders_multicell: no cells");
    if (feedback.cross.size() != L)
        throw std::invalid_argument("slnr_precoders_multicell: cross covariance shape mismatch");

    std::vector<PrecoderBank> banks;
    banks.reserve(L);
    for (std::size_t l = 0; l < L; ++l) {
        const arma::uword M = infer_dim(feedback.cells[l]);
        arma::cx_mat extra(M, M, arma::fill::zeros);
        bool any_cross = false;
        if (feedback.cross[l].size() != L)
            throw std::invalid_argument("slnr_precoders_multicell: cross covariance shape mismatch");
        for (std::size_t j = 0; j < L; ++j) {
            if (j == l) continue;
            for (const auto& c : feedback.cross[l][j]) {
                if (c.n_rows != M || c.n_cols != M)
                    throw std::invalid_argument(
                        "slnr_precoders_multicell: cross covariance dimension mismatch");
                extra += c;
                any_cross = true;
            }
        }
        banks.push_back(hybrid_bank(feedback.cells[l], any_cross ? &extra : nullptr,
                                    "slnr-multicell"));
    }
    return banks;
}

} // namespace hybridfb
