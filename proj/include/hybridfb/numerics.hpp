// SPDX-License-Identifier: Apache-2.0
//
// Deterministic Hermitian linear algebra used everywhere else: full
// eigendecomposition with fixed ordering and phase, HPD solves, and the
// unitary DFT matrix that defines the beam domain.

#pragma once

#include <armadillo>

namespace hybridfb {

struct EigenResult {
    arma::vec values;     // descending
    arma::cx_mat vectors; // columns, unit norm, phase-fixed
};

// Full eigendecomposition of a Hermitian matrix.
//  - eigenvalues in descending order; exact ties keep ascending backend
//    output position
//  - each eigenvector is rotated so its largest-magnitude entry (first index
//    on magnitude ties) is real and non-negative
// Throws std::invalid_argument for empty, non-square, or grossly
// non-Hermitian input.
EigenResult hermitian_eig(const arma::cx_mat& A);

// Solve A X = B for Hermitian positive definite A via Cholesky.
// Throws std::runtime_error when a pivot falls below the singularity
// threshold (|L_ii|^2 < 1e-14 * ||A||_F).
arma::cx_mat solve_hpd(const arma::cx_mat& A, const arma::cx_mat& B);
arma::cx_vec solve_hpd(const arma::cx_mat& A, const arma::cx_vec& b);

// Unitary M x M DFT matrix; column t (1-based), row m (0-based):
//   [V]_{m,t} = exp(i pi m (2 t / M - 1)) / sqrt(M)
arma::cx_mat dft_matrix(arma::uword M);

} // namespace hybridfb
