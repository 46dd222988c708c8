#pragma once

#include <cstddef>
#include <vector>

#include "steinkit/geometry/point.hpp"
#include "steinkit/rng.hpp"

namespace steinkit::geometry {

/// Homogeneous Poisson process of the given intensity on the padded region
/// of `window`.
std::vector<Point> sample_poisson(const WindowConfig& window, double intensity, Rng& rng);

/// Homogeneous Poisson process on the rectangle [x0, x1] x [y0, y1].
std::vector<Point> sample_poisson_rect(double x0, double x1, double y0, double y1, double intensity, Rng& rng);

/// Eigenvalues of an n x n matrix with i.i.d. standard complex Gaussian
/// entries. Samples the unitarily equivalent Hessenberg form directly and
/// runs the Hessenberg QR eigen-solver, so the cost is O(n^2) per sweep.
std::vector<Point> sample_ginibre(std::size_t n_matrix, Rng& rng);

/// Same law via a dense matrix and a general eigen-solver.
std::vector<Point> sample_ginibre_dense(std::size_t n_matrix, Rng& rng);

}  // namespace steinkit::geometry
