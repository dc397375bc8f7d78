// SPDX-License-Identifier: Apache-2.0
//
// Rate evaluation: Monte-Carlo ergodic sum rates under SLNR precoding, and
// the covariance-only sum-rate predictor that drives user classification.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hybridfb/channel.hpp"
#include "hybridfb/classifier.hpp"
#include "hybridfb/codebook.hpp"
#include "hybridfb/precoder.hpp"

namespace hybridfb {

struct RateReport {
    std::string scheme;
    double p_d_db = 0.0;
    arma::uword n_users = 0;
    arma::uword total_bits = 0;
    arma::uword n_antennas = 0;
    double sum_rate = 0.0; // bits/s/Hz, mean over trials
    double ci95 = 0.0;     // 1.96 * std(per-trial sum) / sqrt(trials)
    arma::uword trials = 0;
    std::uint64_t seed = 0;
    std::vector<double> per_user; // mean per-user rates
    double sample_variance = 0.0; // of the per-trial sum, for pooling
};

// CSV row `scheme,p_d_dB,K,B_total,M,sum_rate,ci95,trials,seed`.
void write_rate_csv_header(std::ostream& os);
void write_rate_csv_row(std::ostream& os, const RateReport& report);

// Merge reports of the same configuration run on disjoint seeds/drops:
// pooled mean and a half-width from the pooled per-trial variance.
RateReport pool_reports(const std::vector<RateReport>& parts);

struct BoundReport {
    std::vector<double> eff_sinr;         // per user, original indexing
    std::vector<arma::uword> beam_of_user; // 1-based assigned beam per user
    double value = 0.0;                   // sum of log2(1 + eff_sinr)
};

// SINR of user `self` given every user's precoder and the true channel:
// |h^H w_self|^2 / (sum_{o != self} |h^H w_o|^2 + 1/p_d).
double sinr(const arma::cx_vec& h, const std::vector<arma::cx_vec>& precoders,
            std::size_t self, double p_d);

// Ergodic sum rate of a single cell by Monte Carlo. Every user's channel is
// redrawn each trial (trial t uses engine seed derive_seed(seed, t); users
// draw gains in ascending order). Class-I users quantize against
// books[position in class_I]; class-S users expose their covariance only.
RateReport monte_carlo_sum_rate(const std::vector<UserChannelModel>& users,
                                const ArrayConfig& array, const Classification& split,
                                const std::vector<Codebook>& books, double p_d_db,
                                arma::uword trials, std::uint64_t seed,
                                const std::string& scheme);

// Same loop with exact direction feedback (h / ||h||) for every user.
RateReport monte_carlo_perfect(const std::vector<UserChannelModel>& users,
                               const ArrayConfig& array, double p_d_db,
                               arma::uword trials, std::uint64_t seed,
                               const std::string& scheme = "perfect");

// Covariance-only sum-rate predictor. Class-I users take their predicted
// beam for `bits`-bit grid feedback, class-S users the leakage-aware argmax;
// user k's effective SINR reads the per-beam profiles at the assigned beams,
//   profile_k[beam_k] / (sum_{j != k} profile_k[beam_j] + 1/p_d),
// accumulated over users in ascending order.
BoundReport sum_rate_lower_bound(const std::vector<arma::vec>& beam_profiles,
                                 const std::vector<arma::uword>& class_I,
                                 const std::vector<arma::uword>& class_S,
                                 arma::uword bits, double p_d,
                                 arma::uword x_min = 1, arma::uword x_max = 0);

// Multi-cell ergodic network sum rate. Fast fading is independent per link;
// trial engines draw links in (cell, user, serving-BS) order. Class-I users
// quantize their own-cell channel; precoding is per BS with cross-cell
// covariance leakage terms; SINRs use the physical (large-scale scaled)
// channels from every BS.
RateReport monte_carlo_sum_rate_multicell(const MulticellEnsemble& ensemble,
                                          const std::vector<Classification>& per_cell,
                                          const std::vector<std::vector<Codebook>>& books,
                                          double p_d_db, arma::uword trials,
                                          std::uint64_t seed, const std::string& scheme);

// Network predictor: per-user effective SINRs with intra- and inter-cell
// terms read off the link beam profiles at the beams assigned by every BS.
// beam_of_user is pooled in (cell, user) order.
BoundReport multicell_bound(const MulticellEnsemble& ensemble,
                            const std::vector<std::vector<bool>>& is_class_S,
                            arma::uword bits, double p_d,
                            arma::uword x_min = 1, arma::uword x_max = 0);

} // namespace hybridfb
