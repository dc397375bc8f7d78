// SPDX-License-Identifier: Apache-2.0
//
// One-ring multipath channel model for a half-wavelength ULA.
//
// A user is described by a mean angle of arrival and an angular spread; each
// realization superposes P planar wavefronts with i.i.d. complex Gaussian
// gains. The beam domain is the column space of the unitary DFT matrix, and
// the per-beam power profile has a closed form (Dirichlet kernel) that the
// rest of the library consumes.

#pragma once

#include <cstdint>
#include <vector>

#include "hybridfb/rng.hpp"

namespace hybridfb {

struct ArrayConfig {
    arma::uword n_antennas = 32;
    double spacing = 0.5; // element spacing in wavelengths
};

struct AngularProfile {
    double mean_aoa = 0.0; // radians
    double spread = 0.0;   // full width, radians
    arma::uword n_paths = 20;
};

struct PathSet {
    AngularProfile profile;
    arma::vec aoas; // one angle per path, radians
};

struct CovariancePair {
    arma::cx_mat spatial; // V diag(beam_diag) V^H, Hermitian
    arma::vec beam_diag;  // per-beam powers, 1-based beam t stored at [t-1]
};

// ULA steering vector, entries exp(i 2 pi spacing m sin(theta)), m = 0..M-1.
arma::cx_vec steering_vector(const ArrayConfig& array, double theta);

// P angles uniform on [mean - spread/2, mean + spread/2], in draw order.
PathSet draw_paths(const AngularProfile& profile, Engine& eng);

// h = (1/sqrt(P)) sum_p gains[p] a(theta_p); draw_channel samples the gains
// as i.i.d. CN(0,1) from `eng`, channel_from_gains takes them as given.
arma::cx_vec channel_from_gains(const ArrayConfig& array, const PathSet& paths,
                                const arma::cx_vec& gains);
arma::cx_vec draw_channel(const ArrayConfig& array, const PathSet& paths, Engine& eng);

// Closed-form per-beam power profile. Beam t (1-based) collects
//   (1/(M P)) sum_p | sin((M/2) pi b) / sin((1/2) pi b) |^2,
//   b = sin(theta_p) - 2 t / M + 1,
// with the removable singularity sin((1/2) pi b) -> 0 evaluated as M.
// Requires spacing == 0.5 (the beam grid is tied to it); throws otherwise.
arma::vec analytical_beam_diagonal(const ArrayConfig& array, const PathSet& paths);

// Beam profile plus the spatial reconstruction V diag V^H.
CovariancePair analytical_beam_covariance(const ArrayConfig& array, const PathSet& paths);

// (1/n) sum h h^H over fresh gain draws with the paths held fixed.
arma::cx_mat empirical_covariance(const ArrayConfig& array, const PathSet& paths,
                                  arma::uword n_samples, std::uint64_t seed);

// One downlink: geometry-fixed paths, second-order statistics, and the
// large-scale power gain (1 in single-cell use).
struct UserChannelModel {
    PathSet paths;
    CovariancePair cov; // scaled by `gain`
    double gain = 1.0;
};

// All links of a multi-cell layout. link[b][c][k] describes the channel from
// BS b to user k of cell c; own-cell links sit at b == c.
struct MulticellEnsemble {
    ArrayConfig array;
    std::vector<arma::uword> n_users; // per cell
    std::vector<std::vector<std::vector<UserChannelModel>>> link;

    arma::uword n_cells() const { return static_cast<arma::uword>(n_users.size()); }
    arma::uword total_users() const;
};

} // namespace hybridfb
