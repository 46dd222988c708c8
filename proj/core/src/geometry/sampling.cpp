#include "steinkit/geometry/sampling.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace steinkit::geometry {
namespace {

std::complex<double> complex_normal(Rng& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

}  // namespace

std::vector<Point> sample_poisson_rect(double x0, double x1, double y0, double y1, double intensity, Rng& rng) {
    if (!(intensity > 0.0)) throw std::invalid_argument("intensity must be positive");
    if (!(x1 >= x0 && y1 >= y0)) throw std::invalid_argument("empty rectangle");
    const double mean = intensity * (x1 - x0) * (y1 - y0);
    std::vector<Point> pts;
    if (mean <= 0.0) return pts;
    std::poisson_distribution<long long> count(mean);
    const long long k = count(rng);
    pts.reserve(static_cast<std::size_t>(k));
    for (long long i = 0; i < k; ++i) {
        const double x = x0 + (x1 - x0) * rng.uniform();
        const double y = y0 + (y1 - y0) * rng.uniform();
        pts.push_back({x, y});
    }
    return pts;
}

std::vector<Point> sample_poisson(const WindowConfig& window, double intensity, Rng& rng) {
    window.validate();
    const double h = window.region_half_side();
    return sample_poisson_rect(-h, h, -h, h, intensity, rng);
}

std::vector<Point> sample_ginibre(std::size_t n_matrix, Rng& rng) {
    if (n_matrix == 0) throw std::invalid_argument("n_matrix must be >= 1");
    const auto n = static_cast<lapack_int>(n_matrix);
    // Column-major upper Hessenberg: i.i.d. entries on and above the
    // diagonal, |h_{j+1,j}|^2 ~ Gamma(n - 1 - j, 1) below it.
    std::vector<lapack_complex_double> h(n_matrix * n_matrix, lapack_complex_double{0.0, 0.0});
    for (std::size_t j = 0; j < n_matrix; ++j) {
        for (std::size_t i = 0; i <= j; ++i) h[j * n_matrix + i] = complex_normal(rng);
        if (j + 1 < n_matrix) {
            std::gamma_distribution<double> gamma(static_cast<double>(n_matrix - 1 - j), 1.0);
            h[j * n_matrix + j + 1] = std::sqrt(gamma(rng));
        }
    }
    std::vector<lapack_complex_double> w(n_matrix);
    lapack_complex_double z_dummy{0.0, 0.0};
    const lapack_int info =
        LAPACKE_zhseqr(LAPACK_COL_MAJOR, 'E', 'N', n, 1, n, h.data(), n, w.data(), &z_dummy, 1);
    if (info != 0) throw std::runtime_error("Hessenberg eigen-solver failed (info " + std::to_string(info) + ")");
    std::vector<Point> pts(n_matrix);
    for (std::size_t i = 0; i < n_matrix; ++i) pts[i] = {w[i].real(), w[i].imag()};
    return pts;
}

std::vector<Point> sample_ginibre_dense(std::size_t n_matrix, Rng& rng) {
    if (n_matrix == 0) throw std::invalid_argument("n_matrix must be >= 1");
    const auto n = static_cast<lapack_int>(n_matrix);
    std::vector<lapack_complex_double> a(n_matrix * n_matrix);
    for (auto& x : a) x = complex_normal(rng);
    std::vector<lapack_complex_double> w(n_matrix);
    lapack_complex_double dummy{0.0, 0.0};
    const lapack_int info =
        LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(), &dummy, 1, &dummy, 1);
    if (info != 0) throw std::runtime_error("eigen-solver failed (info " + std::to_string(info) + ")");
    std::vector<Point> pts(n_matrix);
    for (std::size_t i = 0; i < n_matrix; ++i) pts[i] = {w[i].real(), w[i].imag()};
    return pts;
}

}  // namespace steinkit::geometry
