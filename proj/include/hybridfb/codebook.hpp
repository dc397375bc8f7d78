// SPDX-License-Identifier: Apache-2.0
//
// Quantization codebooks and statistics-only codeword prediction.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "hybridfb/channel.hpp"

namespace hybridfb {

enum class CodebookKind { dft, skewed, prediction_grid };

const char* codebook_kind_name(CodebookKind kind);
CodebookKind codebook_kind_from_name(const std::string& name);

struct Codebook {
    CodebookKind kind = CodebookKind::dft;
    arma::uword bits = 0;
    arma::cx_mat words; // M x 2^bits, one codeword per column, unit norm
    arma::uword x_min = 1, x_max = 0; // prediction_grid only
};

// DFT-type book: word u (1-based) has entries
//   exp(i pi m (2 u / 2^bits - 1)) / sqrt(M).
// Books of dyadic sizes are nested: every word of a (bits-1)-bit book appears
// in the bits-bit book.
Codebook dft_codebook(arma::uword M, arma::uword bits);

// Statistics-skewed random book: i.i.d. CN(0,1) directions pushed through
// cov^{1/2} and renormalized. Nested across bits for a fixed seed. Negative
// eigenvalues of `cov` (roundoff) are clamped to zero for the square root.
Codebook skewed_codebook(const arma::cx_mat& cov, arma::uword bits, std::uint64_t seed);

// Oversampled angular grid between beam positions x_min..x_max (1-based,
// x_max = 0 means M): word u = 1..2^bits has entries
//   exp(i pi m eta(u)) / sqrt(M),
//   eta(u) = (2 x_min / M - 1) + u * 2 (x_max - x_min) / (M 2^bits).
Codebook prediction_grid_codebook(arma::uword M, arma::uword bits,
                                  arma::uword x_min = 1, arma::uword x_max = 0);

struct QuantizationResult {
    arma::uword index = 0; // 1-based codeword index
    arma::cx_vec word;
    double alignment = 0.0; // |h^H c|^2 / ||h||^2
};

// argmax_u |h^H c_u|^2, ties resolved to the lowest index.
QuantizationResult quantize(const arma::cx_vec& h, const Codebook& book);

struct PredictedFeedback {
    std::uint64_t codeword_index = 0; // 1-based index into the grid book
    arma::uword beam_index = 0;       // 1-based DFT beam the codeword rounds to
};

// Statistics-only feedback prediction: pick the grid codeword whose rounded
// beam position carries the largest per-beam power,
//   u* = argmax_u beam_diag[round(x_min + (x_max - x_min) u / 2^bits)],
// rounding half away from zero, result clamped to [1, M], ties to the lowest
// u. Exact for any `bits`; no codebook is materialized.
PredictedFeedback predict_feedback(const arma::vec& beam_diag, arma::uword bits,
                                   arma::uword x_min = 1, arma::uword x_max = 0);

// Text serialization: one codeword per line, entries "re:im" separated by
// commas. Kind and grid bounds are not stored.
void save_codebook_words(const Codebook& book, std::ostream& os);
void save_codebook_words(const Codebook& book, const std::string& path);
arma::cx_mat load_codebook_words(std::istream& is);
arma::cx_mat load_codebook_words(const std::string& path);

} // namespace hybridfb
