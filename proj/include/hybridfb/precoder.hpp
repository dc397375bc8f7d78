// SPDX-License-Identifier: Apache-2.0
//
// SLNR precoding from mixed feedback: quantized directions for some users,
// covariance-only knowledge for the rest.

#pragma once

#include <string>
#include <vector>

#include "hybridfb/channel.hpp"

namespace hybridfb {

// What one BS knows about the users it serves. `quantized` holds unit-norm
// reconstructed directions of instantaneous-feedback users, `statistical`
// holds transmit covariances (large-scale scaling included) of the others.
struct FeedbackState {
    std::vector<arma::cx_vec> quantized;
    std::vector<arma::cx_mat> statistical;
    double p_d = 1.0; // downlink power over unit noise, linear
};

struct PrecoderBank {
    std::vector<arma::cx_vec> quantized;   // one per quantized-feedback user
    std::vector<arma::cx_vec> statistical; // one per covariance-only user
    std::string scheme;

    std::vector<arma::cx_vec> all() const; // quantized then statistical
};

// Per-user SLNR maximizers, unit norm.
//
// Quantized user i:  w ~ argmax |h_i^H w|^2 / (w^H D_i w),
//   D_i = sum_{j != i} h_j h_j^H + sum_n Phi_n + (1/p_d) I,
// solved in closed form as D_i^{-1} h_i renormalized.
//
// Covariance user n:  w = principal generalized eigenvector of
//   (Phi_n, D_n),  D_n = sum_{q != n} Phi_q + sum_i h_i h_i^H + (1/p_d) I,
// via Cholesky whitening of D_n and a Hermitian eigendecomposition.
PrecoderBank slnr_precoders_hybrid(const FeedbackState& state);

// Beam-domain approximation of the above used by the rate predictor: each
// quantized user keeps its predicted beam, each covariance-only user n takes
//   l_n = argmax_l profile_n[l] / (sum_{q != n} profile_q[l]
//                                  + #[predicted beams == l] + 1/p_d),
// ties to the lowest beam. Returns 1-based beam indices, quantized users
// first. Vectors are per covariance-only user n in order.
std::vector<arma::uword> approx_precoder_indices(
    const std::vector<arma::uword>& predicted_beams,
    const std::vector<arma::vec>& statistical_profiles, arma::uword M, double p_d);

// Multi-cell feedback: per-cell own-user knowledge plus the covariances of
// every other cell's users as seen from this BS (the leakage terms).
// cross[b][c][k] is the covariance of the link BS b -> user k of cell c;
// entries with b == c are ignored (own-cell knowledge sits in `cells`).
struct MulticellFeedback {
    std::vector<FeedbackState> cells;
    std::vector<std::vector<std::vector<arma::cx_mat>>> cross;
};

// Same SLNR construction per BS with every other cell's user covariances
// added to the leakage denominator. No inter-BS cooperation: each bank is a
// function of that BS's own feedback and covariance knowledge only.
std::vector<PrecoderBank> slnr_precoders_multicell(const MulticellFeedback& feedback);

} // namespace hybridfb
