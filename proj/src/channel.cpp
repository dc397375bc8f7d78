// SPDX-License-Identifier: Apache-2.0

#include "hybridfb/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "hybridfb/numerics.hpp"

namespace hybridfb {

namespace {

void require_half_wavelength(const ArrayConfig& array, const char* who) {
    // The beam grid 2t/M - 1 parameterizes sin(theta) only at spacing 1/2;
    // any other spacing silently invalidates every beam-domain quantity.
    if (array.spacing != 0.5)
        throw std::invalid_argument(std::string(who) +
                                    ": beam-domain operations require spacing = 0.5 wavelengths");
}

} // namespace

arma::cx_vec steering_vector(const ArrayConfig& array, double theta) {
    const arma::uword M = array.n_antennas;
    if (M == 0) throw std::invalid_argument("steering_vector: empty array");
    arma::cx_vec a(M);
    const double step = 2.0 * arma::datum::pi * array.spacing * std::sin(theta);
    for (arma::uword m = 0; m < M; ++m)
        a(m) = std::polar(1.0, step * static_cast<double>(m));
    return a;
}

PathSet draw_paths(const AngularProfile& profile, Engine& eng) {
    PathSet out;
    out.profile = profile;
    out.aoas.set_size(profile.n_paths);
    const double lo = profile.mean_aoa - 0.5 * profile.spread;
    const double hi = profile.mean_aoa + 0.5 * profile.spread;
    for (arma::uword p = 0; p < profile.n_paths; ++p)
        out.aoas(p) = draw_uniform(eng, lo, hi);
    return out;
}

arma::cx_vec channel_from_gains(const ArrayConfig& array, const PathSet& paths,
                                const arma::cx_vec& gains) {
    const arma::uword P = paths.aoas.n_elem;
    if (gains.n_elem != P)
        throw std::invalid_argument("channel_from_gains: one gain per path required");
    if (P == 0) throw std::invalid_argument("channel_from_gains: empty path set");
    arma::cx_vec h(array.n_antennas, arma::fill::zeros);
    for (arma::uword p = 0; p < P; ++p)
        h += gains(p) * steering_vector(array, paths.aoas(p));
    return h / std::sqrt(static_cast<double>(P));
}

arma::cx_vec draw_channel(const ArrayConfig& array, const PathSet& paths, Engine& eng) {
    return channel_from_gains(array, paths, draw_complex_gaussian(eng, paths.aoas.n_elem));
}

arma::vec analytical_beam_diagonal(const ArrayConfig& array, const PathSet& paths) {
    require_half_wavelength(array, "analytical_beam_diagonal");
    const arma::uword M = array.n_antennas;
    const arma::uword P = paths.aoas.n_elem;
    if (P == 0) throw std::invalid_argument("analytical_beam_diagonal: empty path set");

    arma::vec d(M, arma::fill::zeros);
    const double Md = static_cast<double>(M);
    for (arma::uword t = 1; t <= M; ++t) {
        const double grid = 2.0 * static_cast<double>(t) / Md - 1.0;
        double acc = 0.0;
        for (arma::uword p = 0; p < P; ++p) {
            const double b = std::sin(paths.aoas(p)) - grid;
            const double den = std::sin(0.5 * arma::datum::pi * b);
            double ratio;
            if (std::abs(den) < 1e-9) {
                // b -> 0 (or +-2): the Dirichlet kernel peaks at exactly M.
                ratio = Md;
            } else {
                ratio = std::sin(0.5 * Md * arma::datum::pi * b) / den;
            }
            acc += ratio * ratio;
        }
        d(t - 1) = acc / (Md * static_cast<double>(P));
    }
    return d;
}

CovariancePair analytical_beam_covariance(const ArrayConfig& array, const PathSet& paths) {
    CovariancePair out;
    out.beam_diag = analytical_beam_diagonal(array, paths);
    const arma::cx_mat V = dft_matrix(array.n_antennas);
    const arma::cx_vec d = arma::conv_to<arma::cx_vec>::from(out.beam_diag);
    const arma::cx_mat S = V * arma::diagmat(d) * V.t();
    out.spatial = 0.5 * (S + S.t());
    return out;
}

arma::cx_mat empirical_covariance(const ArrayConfig& array, const PathSet& paths,
                                  arma::uword n_samples, std::uint64_t seed) {
    if (n_samples == 0)
        throw std::invalid_argument("empirical_covariance: need at least one sample");
    arma::cx_mat acc(array.n_antennas, array.n_antennas, arma::fill::zeros);
    Engine eng = make_engine(seed);
    for (arma::uword s = 0; s < n_samples; ++s) {
        const arma::cx_vec h = draw_channel(array, paths, eng);
        acc += h * h.t();
    }
    return acc / static_cast<double>(n_samples);
}

arma::uword MulticellEnsemble::total_users() const {
    arma::uword total = 0;
    for (arma::uword k : n_users) total += k;
    return total;
}

} // namespace hybridfb
