#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace steinkit::experiment {

using json = nlohmann::json;

/// Numeric table written as CSV, every value at 12 significant digits.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// One declared assertion: `value` compared against `limit`.
struct Assertion {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool pass = false;
};

struct Report {
    json summary = json::object();
    std::vector<Assertion> assertions;
    Table replicates;
    Table rate;
    double wall_seconds = 0.0;

    bool pass() const;
    void check(std::string name, double value, double limit, bool pass);
    /// value <= limit
    void check_le(std::string name, double value, double limit);
};

/// Doubles at 12 significant digits, integers verbatim, keys sorted,
/// non-finite values as null, ASCII only, two-space indent.
std::string format_json(const json& j);

/// %.12g; "nan", "inf" and "-inf" for non-finite values.
std::string format_number(double x);

void write_csv(std::ostream& os, const Table& t);

/// Writes summary.json, replicates.csv, rate.csv and timing.json into
/// `dir`, creating it if needed. summary.json holds only deterministic
/// content; the wall time goes to timing.json.
void emit_report(const Report& report, const json& header, const std::string& dir);

}  // namespace steinkit::experiment
