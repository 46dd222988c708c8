#include "experiment/config.hpp"

#include <cstdio>
#include <fstream>

#include "experiment/report.hpp"

namespace steinkit::experiment {
namespace {

const char* const kKindNames[] = {"simulate", "identity", "kdist", "bound", "rate", "fixture"};

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

std::optional<double> get_opt(const json& obj, const char* key) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    if (!obj.at(key).is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    return obj.at(key).get<double>();
}

void require_object(const json& j, const char* what) {
    if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
}

}  // namespace

CheckKind parse_check_kind(std::string_view id) {
    for (int i = 0; i < 6; ++i) {
        if (id == kKindNames[i]) return static_cast<CheckKind>(i);
    }
    if (id == "identity-check") return CheckKind::identity;
    throw ConfigError("unknown check kind '" + std::string(id) + "'");
}

std::string to_string(CheckKind k) { return kKindNames[static_cast<int>(k)]; }

ExperimentConfig parse_config(const json& doc, const Overrides& over) {
    require_object(doc, "config");
    ExperimentConfig cfg;

    if (over.kind) {
        cfg.kind = *over.kind;
    } else if (doc.contains("kind")) {
        cfg.kind = parse_check_kind(get_or<std::string>(doc, "kind", ""));
    } else {
        throw ConfigError("config needs a 'kind' or a subcommand");
    }

    if (!doc.contains("model")) throw ConfigError("config needs a 'model' object");
    const json& model = doc.at("model");
    require_object(model, "model");
    cfg.model = get_or<std::string>(model, "id", "");
    if (cfg.model.empty()) throw ConfigError("model.id is required");
    cfg.params = model;
    cfg.params.erase("id");

    const json reps = doc.value("replicates", json::object());
    require_object(reps, "replicates");
    cfg.reps.n_reps = get_or<std::uint64_t>(reps, "n_reps", 100000);
    cfg.reps.workers = get_or<unsigned>(reps, "workers", 1);
    const bool has_seed = reps.contains("seed") || doc.contains("seed");
    if (over.seed) {
        cfg.reps.master_seed = *over.seed;
    } else if (has_seed) {
        cfg.reps.master_seed = reps.contains("seed") ? get_or<std::uint64_t>(reps, "seed", 0)
                                                     : get_or<std::uint64_t>(doc, "seed", 0);
    } else {
        throw ConfigError("a seed is mandatory (replicates.seed or --seed)");
    }
    if (over.workers) cfg.reps.workers = *over.workers;
    if (cfg.reps.n_reps < 2) throw ConfigError("replicates.n_reps must be >= 2");
    if (cfg.reps.workers == 0) throw ConfigError("workers must be >= 1");

    cfg.scales = get_or<std::vector<double>>(doc, "scales", {});
    cfg.scale_reps = get_or<std::vector<std::uint64_t>>(doc, "reps_per_scale", {});
    if (cfg.kind == CheckKind::rate) {
        if (cfg.scales.size() < 3) throw ConfigError("rate checks need a scale ladder of at least 3 entries");
        for (std::size_t i = 0; i < cfg.scales.size(); ++i) {
            if (!(cfg.scales[i] > 0.0)) throw ConfigError("scales must be positive");
            if (i > 0 && !(cfg.scales[i] > cfg.scales[i - 1])) {
                throw ConfigError("scale ladder must be strictly increasing");
            }
        }
        if (!cfg.scale_reps.empty() && cfg.scale_reps.size() != cfg.scales.size()) {
            throw ConfigError("reps_per_scale must match the scale ladder");
        }
        for (auto r : cfg.scale_reps) {
            if (r < 2) throw ConfigError("reps_per_scale entries must be >= 2");
        }
    }

    cfg.test_functions = get_or<std::vector<std::string>>(doc, "test_functions", {});

    const json th = doc.value("thresholds", json::object());
    require_object(th, "thresholds");
    auto& t = cfg.thresholds;
    t.se_band = get_or<double>(th, "se_band", t.se_band);
    t.dkw_delta = get_or<double>(th, "dkw_delta", t.dkw_delta);
    t.slope_min = get_opt(th, "slope_min");
    t.slope_max = get_opt(th, "slope_max");
    t.ratio_tol = get_or<double>(th, "ratio_tol", t.ratio_tol);
    t.reference = get_opt(th, "reference");
    t.reference_tol = get_or<double>(th, "reference_tol", t.reference_tol);
    t.void_se_band = get_or<double>(th, "void_se_band", t.void_se_band);
    t.exact_tol = get_or<double>(th, "exact_tol", t.exact_tol);
    if (!(t.se_band > 0.0)) throw ConfigError("thresholds.se_band must be positive");
    if (!(t.dkw_delta > 0.0 && t.dkw_delta < 1.0)) throw ConfigError("thresholds.dkw_delta must lie in (0, 1)");

    const json out = doc.value("output", json::object());
    require_object(out, "output");
    cfg.out_dir = get_or<std::string>(out, "dir", cfg.out_dir);
    cfg.write_replicates = get_or<bool>(out, "replicates", true);
    if (over.out_dir) cfg.out_dir = *over.out_dir;
    return cfg;
}

ExperimentConfig load_config(const std::string& path, const Overrides& over) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc, over);
}

json canonical_config(const ExperimentConfig& cfg) {
    json model = cfg.params;
    model["id"] = cfg.model;
    json th = {
        {"se_band", cfg.thresholds.se_band},
        {"dkw_delta", cfg.thresholds.dkw_delta},
        {"ratio_tol", cfg.thresholds.ratio_tol},
        {"reference_tol", cfg.thresholds.reference_tol},
        {"void_se_band", cfg.thresholds.void_se_band},
        {"exact_tol", cfg.thresholds.exact_tol},
    };
    if (cfg.thresholds.slope_min) th["slope_min"] = *cfg.thresholds.slope_min;
    if (cfg.thresholds.slope_max) th["slope_max"] = *cfg.thresholds.slope_max;
    if (cfg.thresholds.reference) th["reference"] = *cfg.thresholds.reference;
    return {
        {"kind", to_string(cfg.kind)},
        {"model", model},
        {"n_reps", cfg.reps.n_reps},
        {"seed", cfg.reps.master_seed},
        {"scales", cfg.scales},
        {"reps_per_scale", cfg.scale_reps},
        {"test_functions", cfg.test_functions},
        {"thresholds", th},
    };
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string text = format_json(canonical_config(cfg));
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace steinkit::experiment
