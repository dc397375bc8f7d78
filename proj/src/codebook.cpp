// SPDX-License-Identifier: Apache-2.0

#include "hybridfb/codebook.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hybridfb/numerics.hpp"

namespace hybridfb {

const char* codebook_kind_name(CodebookKind kind) {
    switch (kind) {
        case CodebookKind::dft: return "dft";
        case CodebookKind::skewed: return "skewed";
        case CodebookKind::prediction_grid: return "grid";
    }
    return "?";
}

CodebookKind codebook_kind_from_name(const std::string& name) {
    if (name == "dft") return CodebookKind::dft;
    if (name == "skewed") return CodebookKind::skewed;
    if (name == "grid" || name == "prediction-grid") return CodebookKind::prediction_grid;
    throw std::invalid_argument("unknown codebook kind: " + name);
}

namespace {

arma::uword checked_size(arma::uword bits, const char* who) {
    if (bits == 0 || bits > 26)
        throw std::invalid_argument(std::string(who) + ": bits must be in [1, 26]");
    return arma::uword(1) << bits;
}

void resolve_grid_bounds(arma::uword M, arma::uword& x_min, arma::uword& x_max, const char* who) {
    if (x_max == 0) x_max = M;
    if (x_min < 1 || x_max > M || x_min > x_max)
        throw std::invalid_argument(std::string(who) + ": need 1 <= x_min <= x_max <= M");
}

} // namespace

Codebook dft_codebook(arma::uword M, arma::uword bits) {
    const arma::uword X = checked_size(bits, "dft_codebook");
    if (M == 0) throw std::invalid_argument("dft_codebook: M must be positive");
    Codebook book;
    book.kind = CodebookKind::dft;
    book.bits = bits;
    book.words.set_size(M, X);
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    for (arma::uword u = 1; u <= X; ++u) {
        const double phase = 2.0 * static_cast<double>(u) / static_cast<double>(X) - 1.0;
        for (arma::uword m = 0; m < M; ++m)
            book.words(m, u - 1) = std::polar(scale, arma::datum::pi * static_cast<double>(m) * phase);
    }
    return book;
}

Codebook skewed_codebook(const arma::cx_mat& cov, arma::uword bits, std::uint64_t seed) {
    const arma::uword X = checked_size(bits, "skewed_codebook");
    if (cov.n_rows == 0 || cov.n_rows != cov.n_cols)
        throw std::invalid_argument("skewed_codebook: covariance must be square");
    const arma::uword M = cov.n_rows;

    EigenResult eig = hermitian_eig(cov);
    arma::vec lam = eig.values;
    for (arma::uword i = 0; i < lam.n_elem; ++i)
        if (lam(i) < 0.0) lam(i) = 0.0; // roundoff guard
    const arma::cx_mat root =
        eig.vectors * arma::diagmat(arma::conv_to<arma::cx_vec>::from(arma::sqrt(lam))) * eig.vectors.t();

    Codebook book;
    book.kind = CodebookKind::skewed;
    book.bits = bits;
    book.words.set_size(M, X);
    Engine eng = make_engine(seed);
    for (arma::uword u = 0; u < X; ++u) {
        arma::cx_vec f = draw_complex_gaussian(eng, M);
        f /= arma::norm(f);
        arma::cx_vec w = root * f;
        const double n = arma::norm(w);
        if (n < 1e-300)
            throw std::runtime_error("skewed_codebook: covariance annihilated a direction");
        book.words.col(u) = w / n;
    }
    return book;
}

Codebook prediction_grid_codebook(arma::uword M, arma::uword bits, arma::uword x_min,
                                  arma::uword x_max) {
    const arma::uword X = checked_size(bits, "prediction_grid_codebook");
    if (M == 0) throw std::invalid_argument("prediction_grid_codebook: M must be positive");
    resolve_grid_bounds(M, x_min, x_max, "prediction_grid_codebook");

    Codebook book;
    book.kind = CodebookKind::prediction_grid;
    book.bits = bits;
    book.x_min = x_min;
    book.x_max = x_max;
    book.words.set_size(M, X);
    const double Md = static_cast<double>(M);
    const double span = 2.0 * static_cast<double>(x_max - x_min) / (Md * static_cast<double>(X));
    const double base = 2.0 * static_cast<double>(x_min) / Md - 1.0;
    const double scale = 1.0 / std::sqrt(Md);
    for (arma::uword u = 1; u <= X; ++u) {
        const double eta = base + static_cast<double>(u) * span;
        for (arma::uword m = 0; m < M; ++m)
            book.words(m, u - 1) = std::polar(scale, arma::datum::pi * static_cast<double>(m) * eta);
    }
    return book;
}

QuantizationResult quantize(const arma::cx_vec& h, const Codebook& book) {
    if (h.n_elem != book.words.n_rows)
        throw std::invalid_argument("quantize: channel/codebook dimension mismatch");
    const double hn2 = std::norm(arma::norm(h));
    if (hn2 == 0.0) throw std::invalid_argument("quantize: zero channel");

    QuantizationResult out;
    const arma::cx_rowvec proj = h.t() * book.words;
    double best = -1.0;
    arma::uword best_u = 0;
    for (arma::uword u = 0; u < proj.n_elem; ++u) {
        const double gain = std::norm(proj(u));
        if (gain > best) {
            best = gain;
            best_u = u;
        }
    }
    out.index = best_u + 1;
    out.word = book.words.col(best_u);
    out.alignment = best / hn2;
    return out;
}

namespace {

// Both the exhaustive and the closed-form path round the same expression
//   pos(u) = x_min + (x_max - x_min) * u / X
// half away from zero and clamp to [1, M].
inline arma::uword beam_of_codeword(double x_min, double slope, std::uint64_t u, arma::uword M) {
    const double pos = x_min + slope * static_cast<double>(u);
    long long v = std::llround(pos);
    if (v < 1) v = 1;
    if (v > static_cast<long long>(M)) v = static_cast<long long>(M);
    return static_cast<arma::uword>(v);
}

} // namespace

PredictedFeedback predict_feedback(const arma::vec& beam_diag, arma::uword bits,
                                   arma::uword x_min, arma::uword x_max) {
    const arma::uword M = beam_diag.n_elem;
    if (M == 0) throw std::invalid_argument("predict_feedback: empty beam profile");
    if (bits == 0 || bits > 62)
        throw std::invalid_argument("predict_feedback: bits must be in [1, 62]");
    resolve_grid_bounds(M, x_min, x_max, "predict_feedback");

    const std::uint64_t X = std::uint64_t(1) << bits;
    const double slope = static_cast<double>(x_max - x_min) / static_cast<double>(X);

    PredictedFeedback out;
    if (bits <= 16) {
        double best = -1.0;
        for (std::uint64_t u = 1; u <= X; ++u) {
            const arma::uword v = beam_of_codeword(static_cast<double>(x_min), slope, u, M);
            const double val = beam_diag(v - 1);
            if (val > best) {
                best = val;
                out.codeword_index = u;
                out.beam_index = v;
            }
        }
        return out;
    }

    // Huge grids: pos(u) is non-decreasing in u, so the lowest codeword
    // index attaining the best reachable beam is the lowest index mapping to
    // the lowest such beam. Enumerate beams, find the minimal u rounding to
    // each (closed form plus a small verification window evaluated with the
    // exact same rounding expression).
    double best = -1.0;
    for (arma::uword v = 1; v <= M; ++v) {
        const double lo = (static_cast<double>(v) - 0.5) - static_cast<double>(x_min);
        std::uint64_t u0 = 1;
        if (lo > 0.0) {
            const double guess = std::ceil(lo / slope);
            if (guess >= static_cast<double>(X) + 16.0) continue;
            u0 = guess < 1.0 ? 1 : static_cast<std::uint64_t>(guess);
        }
        std::uint64_t found = 0;
        for (std::uint64_t u = (u0 > 2 ? u0 - 2 : 1); u <= u0 + 2 && u <= X; ++u) {
            if (beam_of_codeword(static_cast<double>(x_min), slope, u, M) == v) {
                found = u;
                break;
            }
        }
        if (!found) continue; // beam not reachable from the grid
        const double val = beam_diag(v - 1);
        if (val > best) {
            best = val;
            out.codeword_index = found;
            out.beam_index = v;
        }
    }
    return out;
}

void save_codebook_words(const Codebook& book, std::ostream& os) {
    char buf[64];
    for (arma::uword u = 0; u < book.words.n_cols; ++u) {
        for (arma::uword m = 0; m < book.words.n_rows; ++m) {
            const std::complex<double> w = book.words(m, u);
            std::snprintf(buf, sizeof buf, "%.17g:%.17g", w.real(), w.imag());
            if (m) os << ',';
            os << buf;
        }
        os << '\n';
    }
}

void save_codebook_words(const Codebook& book, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    save_codebook_words(book, os);
}

arma::cx_mat load_codebook_words(std::istream& is) {
    std::vector<std::vector<std::complex<double>>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::complex<double>> word;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const auto sep = cell.find(':');
            if (sep == std::string::npos)
                throw std::runtime_error("codebook parse error: missing ':' in \"" + cell + "\"");
            word.emplace_back(std::stod(cell.substr(0, sep)), std::stod(cell.substr(sep + 1)));
        }
        if (!rows.empty() && word.size() != rows.front().size())
            throw std::runtime_error("codebook parse error: ragged word lengths");
        rows.push_back(std::move(word));
    }
    if (rows.empty()) throw std::runtime_error("codebook parse error: no words");
    arma::cx_mat words(rows.front().size(), rows.size());
    for (arma::uword u = 0; u < words.n_cols; ++u)
        for (arma::uword m = 0; m < words.n_rows; ++m) words(m, u) = rows[u][m];
    return words;
}

arma::cx_mat load_codebook_words(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return load_codebook_words(is);
}

} // namespace hybridfb
