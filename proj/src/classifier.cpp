// SPDX-License-Identifier: Apache-2.0

#include "hybridfb/classifier.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "hybridfb/rate.hpp"

namespace hybridfb {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Predictor value of a partition, with the per-user budget floor(B_total/f);
// partitions whose class-I users would get zero bits are unusable.
double partition_value(const std::vector<arma::vec>& profiles,
                       const std::vector<arma::uword>& class_I,
                       const std::vector<arma::uword>& class_S, arma::uword B_total,
                       double p_d, arma::uword x_min, arma::uword x_max) {
    const arma::uword f = static_cast<arma::uword>(class_I.size());
    const arma::uword bits = f ? B_total / f : 0;
    if (f && bits == 0) return kNegInf;
    return sum_rate_lower_bound(profiles, class_I, class_S, bits, p_d, x_min, x_max).value;
}

std::vector<arma::uword> erase_value(std::vector<arma::uword> v, arma::uword x) {
    v.erase(std::find(v.begin(), v.end(), x));
    return v;
}

} // namespace

Classification greedy_classify(const std::vector<arma::vec>& beam_profiles,
                               arma::uword B_total, double p_d,
                               arma::uword x_min, arma::uword x_max) {
    const arma::uword K = static_cast<arma::uword>(beam_profiles.size());
    if (K == 0) throw std::invalid_argument("greedy_classify: no users");

    std::vector<arma::uword> I(K);
    for (arma::uword k = 0; k < K; ++k) I[k] = k;
    std::vector<arma::uword> S;

    Classification out;
    out.candidate_bounds.reserve(K + 1);
    out.candidate_bounds.push_back(
        partition_value(beam_profiles, I, S, B_total, p_d, x_min, x_max));

    // One demotion per round; candidates are scanned in ascending user order
    // with a strict comparison, so ties keep the lowest index.
    for (arma::uword step = 1; step <= K; ++step) {
        double best = kNegInf;
        arma::uword best_u = I.front();
        for (arma::uword u : I) {
            std::vector<arma::uword> I2 = erase_value(I, u);
            std::vector<arma::uword> S2 = S;
            S2.push_back(u);
            const double value =
                partition_value(beam_profiles, I2, S2, B_total, p_d, x_min, x_max);
            if (value > best) {
                best = value;
                best_u = u;
            }
        }
        I = erase_value(I, best_u);
        S.push_back(best_u);
        out.candidate_bounds.push_back(best);
    }

    // First maximum scanning f = K..0, so exact ties keep more class-I users.
    std::size_t best_j = 0;
    for (std::size_t j = 1; j < out.candidate_bounds.size(); ++j)
        if (out.candidate_bounds[j] > out.candidate_bounds[best_j]) best_j = j;

    const arma::uword f = K - static_cast<arma::uword>(best_j);
    out.chosen_f = f;
    out.class_S_ordered.assign(S.begin(), S.begin() + best_j);
    out.class_I.clear();
    for (arma::uword k = 0; k < K; ++k)
        if (std::find(out.class_S_ordered.begin(), out.class_S_ordered.end(), k) ==
            out.class_S_ordered.end())
            out.class_I.push_back(k);
    out.bits_per_I_user = f ? B_total / f : 0;
    return out;
}

Classification exhaustive_classify(const std::vector<arma::vec>& beam_profiles,
                                   arma::uword B_total, double p_d,
                                   arma::uword x_min, arma::uword x_max) {
    const arma::uword K = static_cast<arma::uword>(beam_profiles.size());
    if (K == 0) throw std::invalid_argument("exhaustive_classify: no users");
    if (K > 12)
        throw std::invalid_argument("exhaustive_classify: 2^K search guarded at K <= 12");

    Classification out;
    out.candidate_bounds.assign(K + 1, kNegInf);

    double best = kNegInf;
    std::vector<arma::uword> best_S;
    bool have_best = false;

    const arma::uword n_masks = arma::uword(1) << K;
    std::vector<arma::uword> I, S;
    for (arma::uword mask = 0; mask < n_masks; ++mask) {
        I.clear();
        S.clear();
        for (arma::uword k = 0; k < K; ++k) {
            if (mask & (arma::uword(1) << k))
                S.push_back(k);
            else
                I.push_back(k);
        }
        const double value = partition_value(beam_profiles, I, S, B_total, p_d, x_min, x_max);
        const std::size_t j = S.size(); // = K - f
        if (value > out.candidate_bounds[j]) out.candidate_bounds[j] = value;

        if (!have_best || value > best ||
            (value == best && std::lexicographical_compare(S.begin(), S.end(),
                                                           best_S.begin(), best_S.end()))) {
            have_best = true;
            best = value;
            best_S = S;
        }
    }

    out.class_S_ordered = best_S;
    out.class_I.clear();
    for (arma::uword k = 0; k < K; ++k)
        if (std::find(best_S.begin(), best_S.end(), k) == best_S.end())
            out.class_I.push_back(k);
    const arma::uword f = static_cast<arma::uword>(out.class_I.size());
    out.chosen_f = f;
    out.bits_per_I_user = f ? B_total / f : 0;
    return out;
}

namespace {

double multicell_partition_value(const MulticellEnsemble& e,
                                 const std::vector<std::vector<bool>>& mask, arma::uword f,
                                 arma::uword B_total, double p_d, arma::uword x_min,
                                 arma::uword x_max) {
    const arma::uword bits = f ? B_total / f : 0;
    if (f && bits == 0) return kNegInf;
    return multicell_bound(e, mask, bits, p_d, x_min, x_max).value;
}

} // namespace

MulticellClassification multicell_classify(const MulticellEnsemble& e, arma::uword B_total,
                                           double p_d, arma::uword x_min, arma::uword x_max) {
    const arma::uword L = e.n_cells();
    if (L == 0) throw std::invalid_argument("multicell_classify: no cells");
    const arma::uword N = e.total_users();
    if (N == 0) throw std::invalid_argument("multicell_classify: no users");

    // Pooled ids walk cells in order, users ascending inside each cell.
    std::vector<std::pair<arma::uword, arma::uword>> pool;
    pool.reserve(N);
    for (arma::uword l = 0; l < L; ++l)
        for (arma::uword k = 0; k < e.n_users[l]; ++k) pool.emplace_back(l, k);

    std::vector<std::vector<bool>> mask(L);
    for (arma::uword l = 0; l < L; ++l) mask[l].assign(e.n_users[l], false);
    std::vector<bool> demoted(N, false);

    MulticellClassification out;
    out.candidate_bounds.reserve(N + 1);
    out.candidate_bounds.push_back(
        multicell_partition_value(e, mask, N, B_total, p_d, x_min, x_max));

    std::vector<arma::uword> order; // pooled ids in demotion order
    for (arma::uword step = 1; step <= N; ++step) {
        const arma::uword f = N - step;
        double best = kNegInf;
        arma::uword best_p = 0;
        bool found = false;
        for (arma::uword p = 0; p < N; ++p) {
            if (demoted[p]) continue;
            if (!found) {
                best_p = p;
                found = true;
            }
            const auto [l, k] = pool[p];
            mask[l][k] = true;
            const double value =
                multicell_partition_value(e, mask, f, B_total, p_d, x_min, x_max);
            mask[l][k] = false;
            if (value > best) {
                best = value;
                best_p = p;
            }
        }
        const auto [l, k] = pool[best_p];
        mask[l][k] = true;
        demoted[best_p] = true;
        order.push_back(best_p);
        out.candidate_bounds.push_back(best);
    }

    std::size_t best_j = 0;
    for (std::size_t j = 1; j < out.candidate_bounds.size(); ++j)
        if (out.candidate_bounds[j] > out.candidate_bounds[best_j]) best_j = j;

    out.chosen_f = N - static_cast<arma::uword>(best_j);
    out.bits_per_I_user = out.chosen_f ? B_total / out.chosen_f : 0;

    out.per_cell.assign(L, Classification{});
    for (arma::uword l = 0; l < L; ++l) {
        out.per_cell[l].bits_per_I_user = out.bits_per_I_user;
    }
    std::vector<bool> final_S(N, false);
    for (std::size_t j = 0; j < best_j; ++j) {
        final_S[order[j]] = true;
        const auto [l, k] = pool[order[j]];
        out.per_cell[l].class_S_ordered.push_back(k);
    }
    for (arma::uword p = 0; p < N; ++p) {
        if (final_S[p]) continue;
        const auto [l, k] = pool[p];
        out.per_cell[l].class_I.push_back(k);
    }
    for (arma::uword l = 0; l < L; ++l)
        out.per_cell[l].chosen_f = static_cast<arma::uword>(out.per_cell[l].class_I.size());
    return out;
}

} // namespace hybridfb
