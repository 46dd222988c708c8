#include "experiment/models.hpp"

#include <cmath>
#include <numbers>

#include "steinkit/geometry/sampling.hpp"
#include "steinkit/geometry/tessellation.hpp"

namespace steinkit::experiment {
namespace {

const json& param(const json& p, const char* key) {
    if (!p.contains(key)) throw ConfigError(std::string("model parameter '") + key + "' is required");
    return p.at(key);
}

template <class T>
T get(const json& p, const char* key) {
    try {
        return param(p, key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad model parameter '") + key + "': " + e.what());
    }
}

template <class T>
T get_or(const json& p, const char* key, T fallback) {
    return p.contains(key) ? get<T>(p, key) : fallback;
}

std::size_t scaled_size(std::optional<double> scale, const json& p, const char* key) {
    if (!scale) return get<std::size_t>(p, key);
    if (*scale != std::floor(*scale) || *scale < 1.0) {
        throw ConfigError(std::string("scale for '") + key + "' must be a positive integer");
    }
    return static_cast<std::size_t>(*scale);
}

}  // namespace

PoissonVoronoiModel::PoissonVoronoiModel(geometry::WindowConfig window, double intensity)
    : window_(window), intensity_(intensity) {
    window_.validate();
    if (!(intensity > 0.0)) throw std::invalid_argument("intensity must be positive");
}

VoronoiDraw PoissonVoronoiModel::draw(Rng& rng) const {
    thread_local std::vector<geometry::Point> pts;
    pts = geometry::sample_poisson(window_, intensity_, rng);
    VoronoiDraw d;
    for (const auto& p : pts) d.count += window_.in_window(p) ? 1.0 : 0.0;
    if (pts.empty()) return d;
    const auto t = geometry::build_tessellation(pts, window_.region_half_side());
    d.total = geometry::total_edge_statistic(t, window_);
    return d;
}

GinibreModel::GinibreModel(std::size_t n_matrix, std::vector<double> areas)
    : n_matrix_(n_matrix), areas_(std::move(areas)) {
    if (n_matrix_ == 0) throw std::invalid_argument("n_matrix must be >= 1");
    for (double a : areas_) {
        if (!(a > 0.0)) throw std::invalid_argument("disk areas must be positive");
        radius2_.push_back(a / std::numbers::pi);
    }
}

GinibreDraw GinibreModel::draw(Rng& rng) const {
    const auto pts = geometry::sample_ginibre(n_matrix_, rng);
    GinibreDraw d;
    d.counts.assign(radius2_.size(), 0.0);
    for (const auto& p : pts) {
        const double r2 = p.x * p.x + p.y * p.y;
        for (std::size_t i = 0; i < radius2_.size(); ++i) {
            if (r2 <= radius2_[i]) d.counts[i] += 1.0;
        }
    }
    return d;
}

models::AtomLaw parse_atom_law(const json& j) {
    if (!j.is_object()) throw ConfigError("atom law must be an object");
    const auto law = get<std::string>(j, "law");
    if (law == "pmf") return models::AtomLaw::from_pmf(get<std::vector<double>>(j, "pmf"));
    if (law == "point") return models::AtomLaw::point_mass(get<unsigned>(j, "c"));
    if (law == "uniform") {
        const auto values = get<std::vector<unsigned>>(j, "values");
        return models::AtomLaw::uniform_on(values);
    }
    if (law == "poisson") return models::AtomLaw::truncated_poisson(get<double>(j, "mu"), get_or<unsigned>(j, "cut", 50));
    throw ConfigError("unknown atom law '" + law + "'");
}

models::Functional parse_functional(const json& j) {
    if (j.is_string()) return models::Functional::parse(j.get<std::string>());
    if (!j.is_object()) throw ConfigError("functional must be an id or an object");
    auto f = models::Functional::parse(get<std::string>(j, "id"));
    f.c = get_or<double>(j, "c", f.c);
    f.degree = get_or<double>(j, "degree", f.degree);
    f.cap = get_or<double>(j, "cap", f.cap);
    return f;
}

AnyModel build_model(const std::string& id, const json& p, std::optional<double> scale, std::uint64_t pilot_seed) {
    if (id == "iid") {
        const auto spec = models::SummandSpec::parse(get_or<std::string>(p, "law", "rademacher"), get_or<double>(p, "p", 0.5));
        return models::IidSumModel(spec, scaled_size(scale, p, "n"));
    }
    if (id == "kruns") {
        return models::KRunsModel(scaled_size(scale, p, "n"), get<std::size_t>(p, "k"), get<double>(p, "p"));
    }
    if (id == "excursion") {
        const auto set = models::parse_excursion_set(get_or<std::string>(p, "set", "above"));
        const auto pilot = get_or<std::uint64_t>(p, "pilot_reps", 100000);
        models::ExcursionConfig c;
        if (set == models::ExcursionSet::kruns) {
            c = models::ExcursionConfig::kruns_embedding(scaled_size(scale, p, "n"), get<std::size_t>(p, "k"),
                                                         get<double>(p, "p"));
        } else {
            c.set = set;
            c.l = get<double>(p, "l");
            c.horizon = scale ? *scale : get<double>(p, "horizon");
            c.level = get_or<double>(p, "level", 0.0);
        }
        return models::ExcursionModel(c, pilot, pilot_seed);
    }
    if (id == "crm") {
        const json& atoms = param(p, "atoms");
        if (!atoms.is_array() || atoms.empty()) throw ConfigError("crm needs a nonempty 'atoms' array");
        std::vector<models::AtomLaw> laws;
        for (const auto& a : atoms) {
            const auto repeat = get_or<std::size_t>(a, "repeat", 1);
            const auto law = parse_atom_law(a);
            for (std::size_t r = 0; r < repeat; ++r) laws.push_back(law);
        }
        return models::CrmModel(std::move(laws));
    }
    if (id == "occupancy") {
        models::OccupancyConfig c;
        if (scale) {
            c.m = c.n = scaled_size(scale, p, "n");
        } else {
            c.m = get<std::size_t>(p, "m");
            c.n = get<std::size_t>(p, "n");
        }
        c.p = get_or<std::vector<double>>(p, "p", {});
        const json phi = p.value("phi", json("empty"));
        if (phi.is_array()) {
            for (const auto& f : phi) c.phi.push_back(parse_functional(f));
        } else {
            c.phi.push_back(parse_functional(phi));
        }
        c.k2 = get_or<double>(p, "k2", c.k2);
        c.pilot_reps = get_or<std::uint64_t>(p, "pilot_reps", c.pilot_reps);
        c.pilot_seed = pilot_seed;
        return models::OccupancyModel(std::move(c));
    }
    if (id == "poisson_voronoi") {
        geometry::WindowConfig w;
        w.lambda = scale ? *scale : get<double>(p, "lambda");
        w.padding = get_or<double>(p, "padding", w.padding);
        return PoissonVoronoiModel(w, get_or<double>(p, "intensity", 1.0));
    }
    if (id == "ginibre") {
        std::vector<double> areas{std::numbers::pi};
        for (double a : get_or<std::vector<double>>(p, "void_areas", {1.0, 2.0, 4.0})) areas.push_back(a);
        return GinibreModel(scale ? scaled_size(scale, p, "n_matrix") : get_or<std::size_t>(p, "n_matrix", 256),
                            std::move(areas));
    }
    throw ConfigError("unknown model id '" + id + "'");
}

}  // namespace steinkit::experiment
