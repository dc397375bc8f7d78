// SPDX-License-Identifier: Apache-2.0

#include "hybridfb/rng.hpp"

namespace hybridfb {

arma::cx_vec draw_complex_gaussian(Engine& eng, arma::uword n) {
    arma::cx_vec v(n);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    for (arma::uword i = 0; i < n; ++i) {
        const double re = gauss(eng);
        const double im = gauss(eng);
        v(i) = std::complex<double>(re, im);
    }
    return v;
}

double draw_uniform(Engine& eng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(eng);
}

double draw_normal(Engine& eng, double mean, double stddev) {
    std::normal_distribution<double> dist(mean, stddev);
    return dist(eng);
}

} // namespace hybridfb
