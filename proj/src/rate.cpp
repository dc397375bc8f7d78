// SPDX-License-Identifier: Apache-2.0

#include "hybridfb/rate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "hybridfb/csv.hpp"

namespace hybridfb {

void write_rate_csv_header(std::ostream& os) {
    os << "scheme,p_d_dB,K,B_total,M,sum_rate,ci95,trials,seed\n";
}

void write_rate_csv_row(std::ostream& os, const RateReport& r) {
    os << r.scheme << ',' << csv_num(r.p_d_db) << ',' << r.n_users << ',' << r.total_bits << ','
       << r.n_antennas << ',' << csv_num(r.sum_rate) << ',' << csv_num(r.ci95) << ',' << r.trials
       << ',' << r.seed << '\n';
}

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct MeanVar {
    double mean = 0.0;
    double var = 0.0; // population variance
};

MeanVar mean_var(const std::vector<double>& xs) {
    MeanVar mv;
    const double n = static_cast<double>(xs.size());
    for (double x : xs) mv.mean += x;
    mv.mean /= n;
    for (double x : xs) mv.var += (x - mv.mean) * (x - mv.mean);
    mv.var /= n;
    return mv;
}

double half_width(double var, arma::uword n) {
    return n ? 1.96 * std::sqrt(var / static_cast<double>(n)) : 0.0;
}

} // namespace

RateReport pool_reports(const std::vector<RateReport>& parts) {
    if (parts.empty()) throw std::invalid_argument("pool_reports: nothing to pool");
    RateReport out = parts.front();
    double n_total = 0.0, mean = 0.0, second = 0.0;
    arma::uword trials = 0;
    for (const auto& p : parts) {
        const double n = static_cast<double>(p.trials);
        n_total += n;
        mean += n * p.sum_rate;
        second += n * (p.sample_variance + p.sum_rate * p.sum_rate);
        trials += p.trials;
        if (p.per_user.size() != out.per_user.size())
            throw std::invalid_argument("pool_reports: user count mismatch");
    }
    mean /= n_total;
    out.sum_rate = mean;
    out.sample_variance = second / n_total - mean * mean;
    if (out.sample_variance < 0.0) out.sample_variance = 0.0;
    out.trials = trials;
    out.ci95 = half_width(out.sample_variance, trials);
    for (std::size_t k = 0; k < out.per_user.size(); ++k) {
        double acc = 0.0;
        for (const auto& p : parts) acc += static_cast<double>(p.trials) * p.per_user[k];
        out.per_user[k] = acc / n_total;
    }
    return out;
}

double sinr(const arma::cx_vec& h, const std::vector<arma::cx_vec>& precoders,
            std::size_t self, double p_d) {
    if (self >= precoders.size()) throw std::invalid_argument("sinr: self index out of range");
    if (!(p_d > 0.0)) throw std::invalid_argument("sinr: p_d must be positive");
    double num = 0.0, den = 1.0 / p_d;
    for (std::size_t o = 0; o < precoders.size(); ++o) {
        const double gain = std::norm(arma::cdot(precoders[o], h));
        if (o == self)
            num = gain;
        else
            den += gain;
    }
    return num / den;
}

namespace {

struct SplitView {
    std::vector<arma::uword> class_I;         // ascending user ids
    std::vector<arma::uword> class_S;         // stored order
    std::vector<std::size_t> position;        // user id -> slot in (I then S)
};

SplitView make_view(const Classification& split, std::size_t K) {
    SplitView v;
    v.class_I = split.class_I;
    v.class_S = split.class_S_ordered;
    if (v.class_I.size() + v.class_S.size() != K)
        throw std::invalid_argument("classification does not cover every user");
    v.position.assign(K, SIZE_MAX);
    std::size_t slot = 0;
    for (arma::uword u : v.class_I) v.position.at(u) = slot++;
    for (arma::uword u : v.class_S) {
        if (v.position.at(u) != SIZE_MAX)
            throw std::invalid_argument("classification assigns a user twice");
        v.position.at(u) = slot++;
    }
    return v;
}

} // namespace

RateReport monte_carlo_sum_rate(const std::vector<UserChannelModel>& users,
                                const ArrayConfig& array, const Classification& split,
                                const std::vector<Codebook>& books, double p_d_db,
                                arma::uword trials, std::uint64_t seed,
                                const std::string& scheme) {
    const std::size_t K = users.size();
    if (K == 0) throw std::invalid_argument("monte_carlo_sum_rate: no users");
    if (trials == 0) throw std::invalid_argument("monte_carlo_sum_rate: trials must be positive");
    const SplitView view = make_view(split, K);
    if (books.size() != view.class_I.size())
        throw std::invalid_argument("monte_carlo_sum_rate: one codebook per class-I user required");
    const double p_d = db_to_linear(p_d_db);

    std::vector<double> trial_sum(trials, 0.0);
    std::vector<double> user_acc(K, 0.0);

    std::vector<arma::cx_vec> h(K);
    for (arma::uword t = 0; t < trials; ++t) {
        Engine eng = make_engine(derive_seed(seed, t));
        for (std::size_t k = 0; k < K; ++k) {
            h[k] = std::sqrt(users[k].gain) *
                   draw_channel(array, users[k].paths, eng);
        }

        FeedbackState state;
        state.p_d = p_d;
        state.quantized.reserve(view.class_I.size());
        for (std::size_t i = 0; i < view.class_I.size(); ++i)
            state.quantized.push_back(quantize(h[view.class_I[i]], books[i]).word);
        state.statistical.reserve(view.class_S.size());
        for (arma::uword n : view.class_S) state.statistical.push_back(users[n].cov.spatial);

        const std::vector<arma::cx_vec> w = slnr_precoders_hybrid(state).all();
        double sum = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double r = std::log2(1.0 + sinr(h[k], w, view.position[k], p_d));
            user_acc[k] += r;
            sum += r;
        }
        trial_sum[t] = sum;
    }

    RateReport rep;
    rep.scheme = scheme;
    rep.p_d_db = p_d_db;
    rep.n_users = static_cast<arma::uword>(K);
    rep.n_antennas = array.n_antennas;
    rep.trials = trials;
    rep.seed = seed;
    const MeanVar mv = mean_var(trial_sum);
    rep.sum_rate = mv.mean;
    rep.sample_variance = mv.var;
    rep.ci95 = half_width(mv.var, trials);
    rep.per_user.resize(K);
    for (std::size_t k = 0; k < K; ++k) rep.per_user[k] = user_acc[k] / static_cast<double>(trials);
    return rep;
}

RateReport monte_carlo_perfect(const std::vector<UserChannelModel>& users,
                               const ArrayConfig& array, double p_d_db, arma::uword trials,
                               std::uint64_t seed, const std::string& scheme) {
    const std::size_t K = users.size();
    if (K == 0) throw std::invalid_argument("monte_carlo_perfect: no users");
    if (trials == 0) throw std::invalid_argument("monte_carlo_perfect: trials must be positive");
    const double p_d = db_to_linear(p_d_db);

    std::vector<double> trial_sum(trials, 0.0);
    std::vector<double> user_acc(K, 0.0);
    std::vector<arma::cx_vec> h(K);
    for (arma::uword t = 0; t < trials; ++t) {
        Engine eng = make_engine(derive_seed(seed, t));
        for (std::size_t k = 0; k < K; ++k)
            h[k] = std::sqrt(users[k].gain) * draw_channel(array, users[k].paths, eng);

        FeedbackState state;
        state.p_d = p_d;
        for (std::size_t k = 0; k < K; ++k) state.quantized.push_back(h[k] / arma::norm(h[k]));
        const std::vector<arma::cx_vec> w = slnr_precoders_hybrid(state).all();

        double sum = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double r = std::log2(1.0 + sinr(h[k], w, k, p_d));
            user_acc[k] += r;
            sum += r;
        }
        trial_sum[t] = sum;
    }

    RateReport rep;
    rep.scheme = scheme;
    rep.p_d_db = p_d_db;
    rep.n_users = static_cast<arma::uword>(K);
    rep.n_antennas = array.n_antennas;
    rep.trials = trials;
    rep.seed = seed;
    const MeanVar mv = mean_var(trial_sum);
    rep.sum_rate = mv.mean;
    rep.sample_variance = mv.var;
    rep.ci95 = half_width(mv.var, trials);
    rep.per_user.resize(K);
    for (std::size_t k = 0; k < K; ++k) rep.per_user[k] = user_acc[k] / static_cast<double>(trials);
    return rep;
}

BoundReport sum_rate_lower_bound(const std::vector<arma::vec>& beam_profiles,
                                 const std::vector<arma::uword>& class_I,
                                 const std::vector<arma::uword>& class_S,
                                 arma::uword bits, double p_d,
                                 arma::uword x_min, arma::uword x_max) {
    const std::size_t K = beam_profiles.size();
    if (K == 0) throw std::invalid_argument("sum_rate_lower_bound: no users");
    if (class_I.size() + class_S.size() != K)
        throw std::invalid_argument("sum_rate_lower_bound: classification does not cover every user");
    if (!class_I.empty() && bits == 0)
        throw std::invalid_argument("sum_rate_lower_bound: class-I users need bits > 0");
    if (!(p_d > 0.0)) throw std::invalid_argument("sum_rate_lower_bound: p_d must be positive");
    const arma::uword M = beam_profiles.front().n_elem;
    for (const auto& prof : beam_profiles)
        if (prof.n_elem != M)
            throw std::invalid_argument("sum_rate_lower_bound: profile length mismatch");

    std::vector<arma::uword> predicted;
    predicted.reserve(class_I.size());
    for (arma::uword u : class_I)
        predicted.push_back(predict_feedback(beam_profiles.at(u), bits, x_min, x_max).beam_index);

    // Accumulate class-S leakage in ascending user order so the result does
    // not depend on the order the caller lists the class-S set in.
    std::vector<arma::uword> s_sorted(class_S.begin(), class_S.end());
    std::sort(s_sorted.begin(), s_sorted.end());
    std::vector<arma::vec> s_profiles;
    s_profiles.reserve(s_sorted.size());
    for (arma::uword u : s_sorted) s_profiles.push_back(beam_profiles.at(u));

    const std::vector<arma::uword> beams =
        approx_precoder_indices(predicted, s_profiles, M, p_d);

    BoundReport rep;
    rep.beam_of_user.assign(K, 0);
    for (std::size_t i = 0; i < class_I.size(); ++i) rep.beam_of_user.at(class_I[i]) = beams[i];
    for (std::size_t n = 0; n < s_sorted.size(); ++n)
        rep.beam_of_user.at(s_sorted[n]) = beams[class_I.size() + n];

    rep.eff_sinr.resize(K);
    rep.value = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const double num = beam_profiles[k](rep.beam_of_user[k] - 1);
        double den = 1.0 / p_d;
        for (std::size_t j = 0; j < K; ++j)
            if (j != k) den += beam_profiles[k](rep.beam_of_user[j] - 1);
        rep.eff_sinr[k] = num / den;
        rep.value += std::log2(1.0 + rep.eff_sinr[k]);
    }
    return rep;
}

namespace {

void check_ensemble(const MulticellEnsemble& e) {
    const arma::uword L = e.n_cells();
    if (L == 0) throw std::invalid_argument("multicell: no cells");
    if (e.link.size() != L) throw std::invalid_argument("multicell: link tensor shape mismatch");
    for (arma::uword b = 0; b < L; ++b) {
        if (e.link[b].size() != L)
            throw std::invalid_argument("multicell: link tensor shape mismatch");
        for (arma::uword c = 0; c < L; ++c)
            if (e.link[b][c].size() != e.n_users[c])
                throw std::invalid_argument("multicell: link tensor shape mismatch");
    }
}

} // namespace

BoundReport multicell_bound(const MulticellEnsemble& e,
                            const std::vector<std::vector<bool>>& is_class_S,
                            arma::uword bits, double p_d,
                            arma::uword x_min, arma::uword x_max) {
    check_ensemble(e);
    const arma::uword L = e.n_cells();
    const arma::uword M = e.array.n_antennas;
    if (is_class_S.size() != L)
        throw std::invalid_argument("multicell_bound: class mask shape mismatch");
    if (!(p_d > 0.0)) throw std::invalid_argument("multicell_bound: p_d must be positive");

    bool any_I = false;
    for (arma::uword l = 0; l < L; ++l) {
        if (is_class_S[l].size() != e.n_users[l])
            throw std::invalid_argument("multicell_bound: class mask shape mismatch");
        for (bool s : is_class_S[l]) any_I = any_I || !s;
    }
    if (any_I && bits == 0)
        throw std::invalid_argument("multicell_bound: class-I users need bits > 0");

    // Beam assignment per (cell, user): class-I from own-link prediction,
    // class-S from the leakage-aware ratio over the serving BS's links.
    std::vector<std::vector<arma::uword>> beam(L);
    for (arma::uword l = 0; l < L; ++l) {
        beam[l].assign(e.n_users[l], 0);
        for (arma::uword i = 0; i < e.n_users[l]; ++i)
            if (!is_class_S[l][i])
                beam[l][i] =
                    predict_feedback(e.link[l][l][i].cov.beam_diag, bits, x_min, x_max).beam_index;
        for (arma::uword n = 0; n < e.n_users[l]; ++n) {
            if (!is_class_S[l][n]) continue;
            double best = -1.0;
            arma::uword best_x = 1;
            for (arma::uword x = 1; x <= M; ++x) {
                double den = 1.0 / p_d;
                for (arma::uword q = 0; q < e.n_users[l]; ++q)
                    if (q != n && is_class_S[l][q]) den += e.link[l][l][q].cov.beam_diag(x - 1);
                for (arma::uword i = 0; i < e.n_users[l]; ++i)
                    if (!is_class_S[l][i] && beam[l][i] == x) den += 1.0;
                for (arma::uword j = 0; j < L; ++j) {
                    if (j == l) continue;
                    for (arma::uword k = 0; k < e.n_users[j]; ++k)
                        den += e.link[l][j][k].cov.beam_diag(x - 1);
                }
                const double val = e.link[l][l][n].cov.beam_diag(x - 1) / den;
                if (val > best) {
                    best = val;
                    best_x = x;
                }
            }
            beam[l][n] = best_x;
        }
    }

    BoundReport rep;
    rep.value = 0.0;
    for (arma::uword l = 0; l < L; ++l) {
        for (arma::uword i = 0; i < e.n_users[l]; ++i) {
            const double num = e.link[l][l][i].cov.beam_diag(beam[l][i] - 1);
            double den = 1.0 / p_d;
            for (arma::uword j = 0; j < L; ++j)
                for (arma::uword t = 0; t < e.n_users[j]; ++t) {
                    if (j == l && t == i) continue;
                    den += e.link[j][l][i].cov.beam_diag(beam[j][t] - 1);
                }
            const double s = num / den;
            rep.eff_sinr.push_back(s);
            rep.beam_of_user.push_back(beam[l][i]);
            rep.value += std::log2(1.0 + s);
        }
    }
    return rep;
}

RateReport monte_carlo_sum_rate_multicell(const MulticellEnsemble& e,
                                          const std::vector<Classification>& per_cell,
                                          const std::vector<std::vector<Codebook>>& books,
                                          double p_d_db, arma::uword trials,
                                          std::uint64_t seed, const std::string& scheme) {
    check_ensemble(e);
    const arma::uword L = e.n_cells();
    if (per_cell.size() != L || books.size() != L)
        throw std::invalid_argument("monte_carlo_sum_rate_multicell: per-cell argument mismatch");
    if (trials == 0)
        throw std::invalid_argument("monte_carlo_sum_rate_multicell: trials must be positive");
    const double p_d = db_to_linear(p_d_db);

    std::vector<SplitView> views;
    views.reserve(L);
    for (arma::uword l = 0; l < L; ++l) {
        views.push_back(make_view(per_cell[l], e.n_users[l]));
        if (books[l].size() != views[l].class_I.size())
            throw std::invalid_argument(
                "monte_carlo_sum_rate_multicell: one codebook per class-I user required");
    }

    const arma::uword total = e.total_users();
    std::vector<double> trial_sum(trials, 0.0);
    std::vector<double> user_acc(total, 0.0);

    // g[j][l][k]: physical channel from BS j to user k of cell l.
    std::vector<std::vector<std::vector<arma::cx_vec>>> g(
        L, std::vector<std::vector<arma::cx_vec>>(L));

    for (arma::uword t = 0; t < trials; ++t) {
        Engine eng = make_engine(derive_seed(seed, t));
        for (arma::uword l = 0; l < L; ++l)
            for (arma::uword j = 0; j < L; ++j) g[j][l].assign(e.n_users[l], arma::cx_vec());
        for (arma::uword l = 0; l < L; ++l)
            for (arma::uword k = 0; k < e.n_users[l]; ++k)
                for (arma::uword j = 0; j < L; ++j)
                    g[j][l][k] = std::sqrt(e.link[j][l][k].gain) *
                                 draw_channel(e.array, e.link[j][l][k].paths, eng);

        MulticellFeedback fb;
        fb.cells.resize(L);
        fb.cross.assign(L, std::vector<std::vector<arma::cx_mat>>(L));
        for (arma::uword l = 0; l < L; ++l) {
            fb.cells[l].p_d = p_d;
            for (std::size_t i = 0; i < views[l].class_I.size(); ++i) {
                const arma::uword u = views[l].class_I[i];
                fb.cells[l].quantized.push_back(quantize(g[l][l][u], books[l][i]).word);
            }
            for (arma::uword n : views[l].class_S)
                fb.cells[l].statistical.push_back(e.link[l][l][n].cov.spatial);
            for (arma::uword j = 0; j < L; ++j) {
                if (j == l) continue;
                for (arma::uword k = 0; k < e.n_users[j]; ++k)
                    fb.cross[l][j].push_back(e.link[l][j][k].cov.spatial);
            }
        }

        const std::vector<PrecoderBank> banks = slnr_precoders_multicell(fb);
        std::vector<std::vector<arma::cx_vec>> w(L);
        for (arma::uword l = 0; l < L; ++l) w[l] = banks[l].all();

        double sum = 0.0;
        arma::uword pooled = 0;
        for (arma::uword l = 0; l < L; ++l) {
            for (arma::uword k = 0; k < e.n_users[l]; ++k, ++pooled) {
                const std::size_t self = views[l].position[k];
                double num = 0.0, den = 1.0 / p_d;
                for (arma::uword j = 0; j < L; ++j) {
                    const arma::cx_vec& gj = g[j][l][k];
                    for (std::size_t o = 0; o < w[j].size(); ++o) {
                        const double gain = std::norm(arma::cdot(w[j][o], gj));
                        if (j == l && o == self)
                            num = gain;
                        else
                            den += gain;
                    }
                }
                const double r = std::log2(1.0 + num / den);
                user_acc[pooled] += r;
                sum += r;
            }
        }
        trial_sum[t] = sum;
    }

    RateReport rep;
    rep.scheme = scheme;
    rep.p_d_db = p_d_db;
    rep.n_users = total;
    rep.n_antennas = e.array.n_antennas;
    rep.trials = trials;
    rep.seed = seed;
    const MeanVar mv = mean_var(trial_sum);
    rep.sum_rate = mv.mean;
    rep.sample_variance = mv.var;
    rep.ci95 = half_width(mv.var, trials);
    rep.per_user.resize(total);
    for (arma::uword k = 0; k < total; ++k)
        rep.per_user[k] = user_acc[k] / static_cast<double>(trials);
    return rep;
}

} // namespace hybridfb
