// SPDX-License-Identifier: Apache-2.0

#include "hybridfb/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <stdexcept>

#include "hybridfb/csv.hpp"
#include "hybridfb/parallel.hpp"
#include "hybridfb/scenario.hpp"
#include "hybridfb/validation.hpp"

namespace hybridfb {

namespace {

namespace fs = std::filesystem;

std::string timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double deg_to_rad(double deg) { return deg * arma::datum::pi / 180.0; }

// One result row: a rate report (or a predictor value dressed as one) plus
// the context columns.
struct Row {
    RateReport rep;
    bool is_bound = false;
    arma::uword drop = 0;
    arma::uword class_I_count = 0;
    double saoa_deg = 10.0;
    std::string codebook = "none";
};

struct ClassRow {
    arma::uword cell = 0;
    arma::uword user = 0;
    bool is_S = false;
    arma::uword bits = 0;
    arma::uword chosen_f = 0;
    double bound_value = 0.0;
    arma::uword drop = 0;
    double p_d_db = 0.0;
    arma::uword B_total = 0;
    double saoa_deg = 10.0;
};

struct GridPoint {
    double p_d_db;
    arma::uword n_users; // single-cell user count (total for multicell)
    arma::uword B_total;
    double saoa_deg;
};

// Scheme slots for seed derivation; fixed so runs are comparable across
// configurations.
enum SchemeSlot : std::uint64_t {
    slot_proposed = 0,
    slot_perfect = 1,
    slot_conv_dft = 2,
    slot_conv_skewed = 3,
    slot_conv_grid = 4,
    slot_solo = 5,
};

SchemeSlot conv_slot(CodebookKind kind) {
    switch (kind) {
        case CodebookKind::dft: return slot_conv_dft;
        case CodebookKind::skewed: return slot_conv_skewed;
        case CodebookKind::prediction_grid: return slot_conv_grid;
    }
    return slot_conv_dft;
}

std::uint64_t mc_seed(std::uint64_t drop_seed, std::size_t grid_index, SchemeSlot slot) {
    return derive_seed(derive_seed(drop_seed, 2), grid_index * 16 + slot);
}

RateReport bound_as_report(const BoundReport& bound, const GridPoint& gp, arma::uword M) {
    RateReport rep;
    rep.scheme = "bound";
    rep.p_d_db = gp.p_d_db;
    rep.n_users = gp.n_users;
    rep.total_bits = gp.B_total;
    rep.n_antennas = M;
    rep.sum_rate = bound.value;
    return rep;
}

// Interaction-blind baseline: rank users by their own predicted-beam power
// and try every class-I prefix size, scoring each resulting partition with
// the usual predictor.
Classification solo_ranking_classify(const std::vector<arma::vec>& profiles,
                                     arma::uword B_total, double p_d, arma::uword x_min,
                                     arma::uword x_max) {
    const arma::uword K = static_cast<arma::uword>(profiles.size());
    Classification best;
    double best_value = -std::numeric_limits<double>::infinity();
    bool have = false;

    for (arma::uword f = K; f + 1 > 0; --f) {
        const arma::uword bits = f ? B_total / f : 0;
        if (f && bits == 0) continue;

        std::vector<arma::uword> order(K);
        for (arma::uword k = 0; k < K; ++k) order[k] = k;
        if (f) {
            std::vector<double> score(K);
            for (arma::uword k = 0; k < K; ++k) {
                const auto pred = predict_feedback(profiles[k], bits, x_min, x_max);
                score[k] = profiles[k](pred.beam_index - 1);
            }
            std::stable_sort(order.begin(), order.end(),
                             [&](arma::uword a, arma::uword b) { return score[a] > score[b]; });
        }
        Classification cand;
        cand.class_I.assign(order.begin(), order.begin() + f);
        std::sort(cand.class_I.begin(), cand.class_I.end());
        cand.class_S_ordered.assign(order.begin() + f, order.end());
        cand.chosen_f = f;
        cand.bits_per_I_user = bits;
        const double value = sum_rate_lower_bound(profiles, cand.class_I, cand.class_S_ordered,
                                                  bits, p_d, x_min, x_max)
                                 .value;
        cand.candidate_bounds.push_back(value);
        if (!have || value > best_value) {
            have = true;
            best_value = value;
            best = cand;
        }
        if (f == 0) break;
    }
    return best;
}

struct Outputs {
    std::vector<std::vector<Row>> rows;            // [job]
    std::vector<std::vector<ClassRow>> class_rows; // [job]
};

class Driver {
  public:
    explicit Driver(const ExperimentConfig& cfg) : cfg_(cfg) {
        array_.n_antennas = cfg.n_antennas;
        array_.spacing = cfg.spacing;
        if (cfg.trials == 0) throw std::runtime_error("trials must be positive");
        if (cfg.drops == 0) throw std::runtime_error("drops must be positive");
    }

    int run() {
        const std::string& ex = cfg_.experiment;
        const bool multicell = ex == "multicell-power-sweep";

        std::vector<GridPoint> grid;
        if (ex == "power-sweep" || ex == "bound-vs-mc" || ex == "multicell-power-sweep") {
            for (double p : cfg_.p_d_db)
                grid.push_back({p, first_users(multicell), cfg_.bit_budget.front(),
                                cfg_.saoa_deg.front()});
        } else if (ex == "user-sweep") {
            for (arma::uword k : cfg_.n_users)
                grid.push_back({cfg_.p_d_db.front(), k, cfg_.bit_budget.front(),
                                cfg_.saoa_deg.front()});
        } else if (ex == "budget-sweep" || ex == "bit-allocation-compare") {
            for (arma::uword b : cfg_.bit_budget)
                grid.push_back({cfg_.p_d_db.front(), first_users(false), b,
                                cfg_.saoa_deg.front()});
        } else if (ex == "saoa-sweep") {
            for (double s : cfg_.saoa_deg)
                grid.push_back({cfg_.p_d_db.front(), first_users(false),
                                cfg_.bit_budget.front(), s});
        } else {
            throw std::runtime_error("experiment not driven here: " + ex);
        }

        const std::size_t n_jobs = grid.size() * cfg_.drops;
        Outputs out;
        out.rows.resize(n_jobs);
        out.class_rows.resize(n_jobs);

        parallel_for(n_jobs, static_cast<unsigned>(cfg_.threads), [&](std::size_t job) {
            const std::size_t g = job / cfg_.drops;
            const arma::uword d = static_cast<arma::uword>(job % cfg_.drops);
            if (multicell)
                run_multicell_job(grid[g], g, d, out.rows[job], out.class_rows[job]);
            else
                run_single_job(grid[g], g, d, out.rows[job], out.class_rows[job]);
        });

        write_outputs(grid, out, multicell);
        write_manifests(grid, multicell);
        return 0;
    }

  private:
    arma::uword first_users(bool multicell) const {
        return multicell ? cfg_.cells * cfg_.users_per_cell : cfg_.n_users.front();
    }

    std::uint64_t drop_seed(arma::uword d) const {
        return derive_seed(derive_seed(cfg_.seed, 1), d);
    }

    Drop make_single_drop(const GridPoint& gp, arma::uword d) const {
        return drop_single_cell(gp.n_users, array_, deg_to_rad(gp.saoa_deg), cfg_.n_paths,
                                drop_seed(d));
    }

    Drop make_multi_drop(const GridPoint& gp, arma::uword d) const {
        CellTopology topo = make_triangle_topology(cfg_.cells);
        topo.cell_radius = cfg_.cell_radius;
        topo.min_distance = cfg_.min_distance;
        LargeScaleModel ls;
        ls.shadow_sigma_db = cfg_.shadow_sigma_db;
        ls.pathloss_exponent = cfg_.pathloss_exponent;
        ls.reference_distance = cfg_.min_distance;
        std::vector<arma::uword> users(cfg_.cells, cfg_.users_per_cell);
        return drop_multicell(topo, users, ls, array_, deg_to_rad(gp.saoa_deg), cfg_.n_paths,
                              drop_seed(d));
    }

    SchemeOptions options(const GridPoint& gp, arma::uword d, std::size_t g,
                          SchemeSlot slot) const {
        SchemeOptions opt;
        opt.p_d_db = gp.p_d_db;
        opt.trials = cfg_.trials;
        opt.seed = mc_seed(drop_seed(d), g, slot);
        opt.x_min = cfg_.x_min;
        opt.x_max = cfg_.x_max;
        opt.b_cap = cfg_.b_cap;
        return opt;
    }

    Row make_row(RateReport rep, const GridPoint& gp, arma::uword d, arma::uword class_I_count,
                 const std::string& codebook) const {
        Row row;
        row.rep = std::move(rep);
        row.drop = d;
        row.class_I_count = class_I_count;
        row.saoa_deg = gp.saoa_deg;
        row.codebook = codebook;
        return row;
    }

    void push_classification(std::vector<ClassRow>& out, const GridPoint& gp, arma::uword d,
                             arma::uword cell, const Classification& cls,
                             double bound_value) const {
        for (arma::uword u : cls.class_I)
            out.push_back({cell, u, false, cls.bits_per_I_user, cls.chosen_f, bound_value, d,
                           gp.p_d_db, gp.B_total, gp.saoa_deg});
        for (arma::uword u : cls.class_S_ordered)
            out.push_back({cell, u, true, 0, cls.chosen_f, bound_value, d, gp.p_d_db,
                           gp.B_total, gp.saoa_deg});
        std::sort(out.end() - static_cast<long>(cls.class_I.size() + cls.class_S_ordered.size()),
                  out.end(), [](const ClassRow& a, const ClassRow& b) {
                      return a.cell != b.cell ? a.cell < b.cell : a.user < b.user;
                  });
    }

    void run_single_job(const GridPoint& gp, std::size_t g, arma::uword d,
                        std::vector<Row>& rows, std::vector<ClassRow>& class_rows) const {
        const Drop drop = make_single_drop(gp, d);
        const std::string& ex = cfg_.experiment;

        SchemeOptions popt = options(gp, d, g, slot_proposed);
        const SchemeResult proposed = proposed_scheme(drop, gp.B_total, popt);
        rows.push_back(make_row(proposed.rate, gp, d, proposed.split.chosen_f, "grid"));

        RateReport bound_rep = bound_as_report(proposed.bound, gp, array_.n_antennas);
        rows.push_back(make_row(bound_rep, gp, d, proposed.split.chosen_f, "none"));
        rows.back().is_bound = true;

        push_classification(class_rows, gp, d, 0, proposed.split, proposed.bound.value);

        if (ex == "bit-allocation-compare") {
            std::vector<arma::vec> profiles;
            for (const auto& u : drop.cell0()) profiles.push_back(u.cov.beam_diag);
            const Classification solo = solo_ranking_classify(
                profiles, gp.B_total, db_to_linear(gp.p_d_db), cfg_.x_min, cfg_.x_max);
            std::vector<Codebook> books;
            if (!solo.class_I.empty()) {
                const Codebook shared = prediction_grid_codebook(
                    array_.n_antennas, std::min<arma::uword>(solo.bits_per_I_user, cfg_.b_cap),
                    cfg_.x_min, cfg_.x_max);
                books.assign(solo.class_I.size(), shared);
            }
            RateReport solo_rep = monte_carlo_sum_rate(
                drop.cell0(), array_, solo, books, gp.p_d_db, cfg_.trials,
                mc_seed(drop_seed(d), g, slot_solo), "solo-ranking");
            solo_rep.total_bits = gp.B_total;
            rows.push_back(make_row(solo_rep, gp, d, solo.chosen_f, "grid"));
            return;
        }

        if (ex == "bound-vs-mc" || ex == "power-sweep" || ex == "user-sweep" ||
            ex == "budget-sweep" || ex == "saoa-sweep") {
            const RateReport perfect =
                perfect_csi(drop, options(gp, d, g, slot_perfect));
            rows.push_back(make_row(perfect, gp, d, gp.n_users, "none"));
        }
        if (ex != "bound-vs-mc") {
            for (const auto& name : cfg_.codebooks) {
                const CodebookKind kind = codebook_kind_from_name(name);
                const RateReport conv = conventional_baseline(
                    drop, gp.B_total, kind, options(gp, d, g, conv_slot(kind)));
                rows.push_back(make_row(conv, gp, d, gp.n_users, name));
            }
        }
    }

    void run_multicell_job(const GridPoint& gp, std::size_t g, arma::uword d,
                           std::vector<Row>& rows, std::vector<ClassRow>& class_rows) const {
        const Drop drop = make_multi_drop(gp, d);

        SchemeOptions popt = options(gp, d, g, slot_proposed);
        const SchemeResult proposed = proposed_scheme(drop, gp.B_total, popt);
        rows.push_back(make_row(proposed.rate, gp, d, proposed.mc_split.chosen_f, "grid"));

        RateReport bound_rep = bound_as_report(proposed.bound, gp, array_.n_antennas);
        rows.push_back(make_row(bound_rep, gp, d, proposed.mc_split.chosen_f, "none"));
        rows.back().is_bound = true;

        for (arma::uword l = 0; l < drop.n_cells(); ++l)
            push_classification(class_rows, gp, d, l, proposed.mc_split.per_cell[l],
                                proposed.bound.value);

        for (const auto& name : cfg_.codebooks) {
            const CodebookKind kind = codebook_kind_from_name(name);
            const RateReport conv = conventional_baseline(drop, gp.B_total, kind,
                                                          options(gp, d, g, conv_slot(kind)));
            rows.push_back(make_row(conv, gp, d, gp.n_users, name));
        }
    }

    void write_outputs(const std::vector<GridPoint>& grid, const Outputs& out,
                       bool multicell) const {
        fs::create_directories(cfg_.out_dir);
        const std::string stamp = timestamp_utc();

        CsvWriter results(cfg_.out_dir + "/results.csv");
        results.comment("generated " + stamp);
        results.header({"scheme", "p_d_dB", "K", "B_total", "M", "sum_rate", "ci95", "trials",
                        "seed", "drop", "K_I", "SAoA_deg", "codebook"});
        for (std::size_t job = 0; job < out.rows.size(); ++job) {
            for (const Row& row : out.rows[job]) {
                const RateReport& r = row.rep;
                results.row({r.scheme, csv_num(r.p_d_db), csv_uint(r.n_users),
                             csv_uint(r.total_bits), csv_uint(r.n_antennas), csv_num(r.sum_rate),
                             csv_num(r.ci95), csv_uint(r.trials), csv_uint(r.seed),
                             csv_uint(row.drop), csv_uint(row.class_I_count),
                             csv_num(row.saoa_deg), row.codebook});
            }
        }

        // Aggregate over drops per (grid point, scheme), preserving first
        // appearance order of schemes.
        CsvWriter agg(cfg_.out_dir + "/aggregate.csv");
        agg.comment("generated " + stamp);
        agg.header({"scheme", "p_d_dB", "K", "B_total", "M", "sum_rate", "ci95", "trials",
                    "seed", "drops", "SAoA_deg", "codebook"});
        for (std::size_t g = 0; g < grid.size(); ++g) {
            std::vector<std::string> order;
            for (arma::uword d = 0; d < cfg_.drops; ++d)
                for (const Row& row : out.rows[g * cfg_.drops + d])
                    if (std::find(order.begin(), order.end(), row.rep.scheme) == order.end())
                        order.push_back(row.rep.scheme);
            for (const auto& scheme : order) {
                std::vector<RateReport> parts;
                std::vector<double> bound_values;
                std::string codebook = "none";
                for (arma::uword d = 0; d < cfg_.drops; ++d)
                    for (const Row& row : out.rows[g * cfg_.drops + d]) {
                        if (row.rep.scheme != scheme) continue;
                        codebook = row.codebook;
                        if (row.is_bound)
                            bound_values.push_back(row.rep.sum_rate);
                        else
                            parts.push_back(row.rep);
                    }
                RateReport merged;
                if (!parts.empty()) {
                    merged = pool_reports(parts);
                } else {
                    // predictor rows: mean over drops, spread across drops
                    merged = bound_as_report(BoundReport{}, grid[g], cfg_.n_antennas);
                    double mean = 0.0, var = 0.0;
                    for (double v : bound_values) mean += v;
                    mean /= static_cast<double>(bound_values.size());
                    for (double v : bound_values) var += (v - mean) * (v - mean);
                    var /= static_cast<double>(bound_values.size());
                    merged.sum_rate = mean;
                    merged.ci95 = bound_values.size() > 1
                                      ? 1.96 * std::sqrt(var / static_cast<double>(bound_values.size()))
                                      : 0.0;
                    merged.n_users = grid[g].n_users;
                }
                agg.row({scheme, csv_num(grid[g].p_d_db), csv_uint(merged.n_users),
                         csv_uint(grid[g].B_total), csv_uint(cfg_.n_antennas),
                         csv_num(merged.sum_rate), csv_num(merged.ci95), csv_uint(merged.trials),
                         csv_uint(cfg_.seed), csv_uint(cfg_.drops), csv_num(grid[g].saoa_deg),
                         codebook});
            }
        }

        CsvWriter cls(cfg_.out_dir + "/classification.csv");
        cls.comment("generated " + stamp);
        cls.header({"user_id", "class", "B_bits", "chosen_f", "bound_value", "cell", "drop",
                    "p_d_dB", "B_total", "SAoA_deg"});
        for (std::size_t job = 0; job < out.class_rows.size(); ++job) {
            for (const ClassRow& c : out.class_rows[job]) {
                cls.row({csv_uint(c.user), c.is_S ? "S" : "I", csv_uint(c.bits),
                         csv_uint(c.chosen_f), csv_num(c.bound_value), csv_uint(c.cell),
                         csv_uint(c.drop), csv_num(c.p_d_db), csv_uint(c.B_total),
                         csv_num(c.saoa_deg)});
            }
        }
        (void)multicell;
    }

    void write_manifests(const std::vector<GridPoint>& grid, bool multicell) const {
        fs::create_directories(cfg_.out_dir + "/drops");
        // Drop content varies only with the grid axes that enter geometry;
        // record the first grid point's version of every drop.
        for (arma::uword d = 0; d < cfg_.drops; ++d) {
            const Drop drop =
                multicell ? make_multi_drop(grid.front(), d) : make_single_drop(grid.front(), d);
            write_drop_manifest(drop, cfg_.out_dir + "/drops/drop_" + std::to_string(d) + ".txt");
        }
    }

    ExperimentConfig cfg_;
    ArrayConfig array_;
};

} // namespace

void seed_note(const ExperimentConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::ofstream os(out_dir + "/seeds.txt");
    os << "root seed: " << cfg.seed << "\n";
    os << "derivation: child(parent, index) = splitmix64(parent + 0x9E3779B97F4A7C15 * (index + 1))\n";
    os << "drop d:           child(child(root, 1), d)\n";
    os << "trial t of an MC: child(mc_seed, t)\n";
    os << "mc_seed:          child(child(drop_seed, 2), 16 * grid_index + scheme_slot)\n";
    os << "scheme slots:     proposed=0 perfect=1 conventional-dft=2 conventional-skewed=3 "
          "conventional-grid=4 solo-ranking=5\n";
}

int run_experiment(const ExperimentConfig& cfg) {
    pin_blas_single_thread();
    if (cfg.experiment == "validate") {
        const auto results = run_validation_suite(std::cout, static_cast<unsigned>(cfg.threads));
        return all_passed(results) ? 0 : 2;
    }
    Driver driver(cfg);
    const int rc = driver.run();
    seed_note(cfg, cfg.out_dir);
    return rc;
}

} // namespace hybridfb
