#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "experiment/config.hpp"
#include "steinkit/geometry/point.hpp"
#include "steinkit/models/crm.hpp"
#include "steinkit/models/excursion.hpp"
#include "steinkit/models/iid.hpp"
#include "steinkit/models/kruns.hpp"
#include "steinkit/models/occupancy.hpp"
#include "steinkit/rng.hpp"

namespace steinkit::experiment {

struct VoronoiDraw {
    double total = 0.0;  ///< L(lambda)
    double count = 0.0;  ///< generators inside Q_lambda
};

/// Total Voronoi edge length of an intensity-`intensity` Poisson process
/// over Q_lambda, cells taken with respect to the whole padded sample.
class PoissonVoronoiModel {
public:
    PoissonVoronoiModel(geometry::WindowConfig window, double intensity);

    VoronoiDraw draw(Rng& rng) const;
    const geometry::WindowConfig& window() const noexcept { return window_; }
    double intensity() const noexcept { return intensity_; }

private:
    geometry::WindowConfig window_;
    double intensity_;
};

struct GinibreDraw {
    std::vector<double> counts;  ///< points in the centered disk of each area
};

/// Ginibre-ensemble eigenvalues counted in centered disks of given areas.
class GinibreModel {
public:
    GinibreModel(std::size_t n_matrix, std::vector<double> areas);

    GinibreDraw draw(Rng& rng) const;
    std::size_t n_matrix() const noexcept { return n_matrix_; }
    const std::vector<double>& areas() const noexcept { return areas_; }

private:
    std::size_t n_matrix_;
    std::vector<double> areas_;
    std::vector<double> radius2_;
};

using AnyModel = std::variant<models::IidSumModel, models::KRunsModel, models::CrmModel, models::ExcursionModel,
                              models::OccupancyModel, PoissonVoronoiModel, GinibreModel>;

/// Builds the configured model. `scale`, when set, replaces the model's
/// size parameter (n for iid and kruns, m = n for occupancy, lambda for
/// poisson_voronoi, horizon or n for excursion). Model-level pilots are
/// seeded from `pilot_seed`.
AnyModel build_model(const std::string& id, const json& params, std::optional<double> scale,
                     std::uint64_t pilot_seed);

/// Parses one atom law entry of a crm model.
models::AtomLaw parse_atom_law(const json& j);

/// Parses a functional given as an id string or an object with "id".
models::Functional parse_functional(const json& j);

}  // namespace steinkit::experiment
