// SPDX-License-Identifier: Apache-2.0
//
// Greedy user classification: split users between instantaneous (class-I)
// and statistical (class-S) feedback to maximize the covariance-only
// sum-rate predictor under a shared bit budget.

#pragma once

#include <vector>

#include "hybridfb/channel.hpp"

namespace hybridfb {

struct Classification {
    // Users moved to class-S, in selection order (first demoted first).
    std::vector<arma::uword> class_S_ordered;
    // Remaining class-I users, ascending.
    std::vector<arma::uword> class_I;
    // floor(B_total / |class_I|); 0 when class_I is empty.
    arma::uword bits_per_I_user = 0;
    // Predictor value for every candidate class-I count f = K..0,
    // candidate_bounds[j] belongs to f = K - j.
    std::vector<double> candidate_bounds;
    // Selected class-I count.
    arma::uword chosen_f = 0;
};

// One demotion per round, keeping the move that maximizes the predictor;
// ties prefer the lowest user index. Among the K+1 recorded candidates the
// first maximum scanning f = K..0 wins, so exact ties keep more users on
// instantaneous feedback.
Classification greedy_classify(const std::vector<arma::vec>& beam_profiles,
                               arma::uword B_total, double p_d,
                               arma::uword x_min = 1, arma::uword x_max = 0);

// All 2^K partitions evaluated; guard K <= 12. Ties pick the
// lexicographically smallest class-S set. class_S_ordered is ascending.
Classification exhaustive_classify(const std::vector<arma::vec>& beam_profiles,
                                   arma::uword B_total, double p_d,
                                   arma::uword x_min = 1, arma::uword x_max = 0);

// Network-wide classification over all cells' users pooled, driven by the
// multi-cell predictor; the bit budget divides by the network-wide class-I
// count. Users are pooled in (cell, user) order.
struct MulticellClassification {
    std::vector<Classification> per_cell; // per-cell views of the split
    std::vector<double> candidate_bounds; // f = K_total..0
    arma::uword chosen_f = 0;             // network class-I count
    arma::uword bits_per_I_user = 0;
};

MulticellClassification multicell_classify(const MulticellEnsemble& ensemble,
                                           arma::uword B_total, double p_d,
                                           arma::uword x_min = 1, arma::uword x_max = 0);

} // namespace hybridfb
