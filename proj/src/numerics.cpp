// SPDX-License-Identifier: Apache-2.0

#include "hybridfb/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace hybridfb {

namespace {

void check_square(const arma::cx_mat& A, const char* who) {
    if (A.n_rows == 0 || A.n_rows != A.n_cols)
        throw std::invalid_argument(std::string(who) + ": matrix must be square and non-empty");
}

void check_hermitian(const arma::cx_mat& A, const char* who) {
    const double scale = std::max(1.0, arma::norm(A, "fro"));
    if (arma::norm(A - A.t(), "fro") > 1e-8 * scale)
        throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian");
}

} // namespace

EigenResult hermitian_eig(const arma::cx_mat& A) {
    check_square(A, "hermitian_eig");
    check_hermitian(A, "hermitian_eig");

    const arma::cx_mat H = 0.5 * (A + A.t());
    arma::vec val;
    arma::cx_mat vec;
    if (!arma::eig_sym(val, vec, H))
        throw std::runtime_error("hermitian_eig: eigendecomposition failed to converge");

    const arma::uword n = H.n_rows;
    // Backend order is ascending; reorder to descending, exact ties keeping
    // ascending backend position.
    std::vector<arma::uword> idx(n);
    std::iota(idx.begin(), idx.end(), arma::uword(0));
    std::stable_sort(idx.begin(), idx.end(),
                     [&](arma::uword a, arma::uword b) { return val(a) > val(b); });

    EigenResult out;
    out.values.set_size(n);
    out.vectors.set_size(n, n);
    for (arma::uword c = 0; c < n; ++c) {
        out.values(c) = val(idx[c]);
        arma::cx_vec v = vec.col(idx[c]);
        // Phase convention: largest-magnitude entry (first index on exact
        // magnitude ties) is made real and non-negative.
        arma::uword pivot = 0;
        double best = -1.0;
        for (arma::uword r = 0; r < n; ++r) {
            const double mag = std::abs(v(r));
            if (mag > best) {
                best = mag;
                pivot = r;
            }
        }
        if (best > 0.0) v *= std::conj(v(pivot)) / std::abs(v(pivot));
        v /= arma::norm(v);
        out.vectors.col(c) = v;
    }
    return out;
}

namespace {

arma::cx_mat chol_lower_checked(const arma::cx_mat& A, const char* who) {
    check_square(A, who);
    check_hermitian(A, who);
    arma::cx_mat R;
    const double scale = arma::norm(A, "fro");
    if (!arma::chol(R, 0.5 * (A + A.t())))
        throw std::runtime_error(std::string(who) + ": matrix is not positive definite");
    arma::cx_mat L = R.t();
    for (arma::uword i = 0; i < L.n_rows; ++i) {
        const double piv = std::norm(L(i, i));
        if (piv < 1e-14 * scale)
            throw std::runtime_error(std::string(who) + ": matrix is numerically singular");
    }
    return L;
}

} // namespace

arma::cx_mat solve_hpd(const arma::cx_mat& A, const arma::cx_mat& B) {
    if (A.n_rows != B.n_rows)
        throw std::invalid_argument("solve_hpd: dimension mismatch");
    const arma::cx_mat L = chol_lower_checked(A, "solve_hpd");
    arma::cx_mat Y = arma::solve(arma::trimatl(L), B);
    return arma::solve(arma::trimatu(L.t()), Y);
}

arma::cx_vec solve_hpd(const arma::cx_mat& A, const arma::cx_vec& b) {
    arma::cx_mat X = solve_hpd(A, arma::cx_mat(b));
    return X.col(0);
}

arma::cx_mat dft_matrix(arma::uword M) {
    if (M == 0) throw std::invalid_argument("dft_matrix: M must be positive");
    arma::cx_mat V(M, M);
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    for (arma::uword t = 1; t <= M; ++t) {
        const double phase = 2.0 * static_cast<double>(t) / static_cast<double>(M) - 1.0;
        for (arma::uword m = 0; m < M; ++m) {
            const double arg = arma::datum::pi * static_cast<double>(m) * phase;
            V(m, t - 1) = std::polar(scale, arg);
        }
    }
    return V;
}

} // namespace hybridfb
