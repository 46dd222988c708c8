#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "steinkit/replicate.hpp"

namespace steinkit::experiment {

using json = nlohmann::json;

/// Malformed or unsupported configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CheckKind { simulate, identity, kdist, bound, rate, fixture };

CheckKind parse_check_kind(std::string_view id);
std::string to_string(CheckKind k);

/// Assertion thresholds; defaults are the acceptance defaults.
struct Thresholds {
    double se_band = 4.0;               ///< |residual| <= se_band * SE
    double dkw_delta = 0.01;            ///< DKW confidence level
    std::optional<double> slope_min;    ///< rate: slope window
    std::optional<double> slope_max;
    double ratio_tol = 0.15;            ///< rate: relative change between the two largest scales
    std::optional<double> reference;    ///< rate: extrapolated limit of the scale ratio
    double reference_tol = 0.03;
    double void_se_band = 3.0;          ///< ginibre one-sided void band
    double exact_tol = 1e-9;            ///< fixture tolerance
};

struct ExperimentConfig {
    CheckKind kind = CheckKind::simulate;
    std::string model;                  ///< model id
    json params = json::object();       ///< model parameters
    ReplicateSpec reps;
    std::vector<double> scales;         ///< rate ladder
    std::vector<std::uint64_t> scale_reps;  ///< per-scale n_reps, optional
    std::vector<std::string> test_functions;
    Thresholds thresholds;
    std::string out_dir = ".";
    bool write_replicates = true;
};

/// Command-line values that take precedence over the file.
struct Overrides {
    std::optional<CheckKind> kind;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::string> out_dir;
};

/// Validates and fills defaults. The seed is mandatory, from the file or
/// the overrides. Throws ConfigError.
ExperimentConfig parse_config(const json& doc, const Overrides& over = {});

ExperimentConfig load_config(const std::string& path, const Overrides& over = {});

/// Canonical form of everything that determines the results (worker count
/// and output paths excluded).
json canonical_config(const ExperimentConfig& cfg);

/// 64-bit FNV-1a of the canonical config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace steinkit::experiment
