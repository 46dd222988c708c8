#include "experiment/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace steinkit::experiment {
namespace {

void append_string(std::string& out, const std::string& s) {
    out += json(s).dump(-1, ' ', true, json::error_handler_t::replace);
}

void append(std::string& out, const json& j, int depth) {
    const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
    const std::string close(2 * static_cast<std::size_t>(depth), ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad;
            append_string(out, it.key());
            out += ": ";
            append(out, it.value(), depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i > 0) out += ",\n";
            out += pad;
            append(out, j[i], depth + 1);
        }
        out += "\n" + close + "]";
        return;
    }
    case json::value_t::string: append_string(out, j.get<std::string>()); return;
    case json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; return;
    case json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); return;
    case json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); return;
    case json::value_t::number_float: {
        const double x = j.get<double>();
        out += std::isfinite(x) ? format_number(x) : "null";
        return;
    }
    default: out += "null"; return;
    }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

bool Report::pass() const {
    for (const auto& a : assertions) {
        if (!a.pass) return false;
    }
    return true;
}

void Report::check(std::string name, double value, double limit, bool ok) {
    assertions.push_back({std::move(name), value, limit, ok});
}

void Report::check_le(std::string name, double value, double limit) {
    const bool ok = value <= limit;
    check(std::move(name), value, limit, ok);
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string format_json(const json& j) {
    std::string out;
    append(out, j, 0);
    out += '\n';
    return out;
}

void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << '\n';
    }
}

void emit_report(const Report& report, const json& header, const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path root(dir);
    fs::create_directories(root);

    json summary = report.summary;
    for (auto it = header.begin(); it != header.end(); ++it) summary[it.key()] = it.value();
    json assertions = json::array();
    for (const auto& a : report.assertions) {
        assertions.push_back({{"name", a.name}, {"value", a.value}, {"limit", a.limit}, {"pass", a.pass}});
    }
    summary["assertions"] = assertions;
    summary["pass"] = report.pass();
    write_file(root / "summary.json", format_json(summary));

    std::ostringstream reps;
    write_csv(reps, report.replicates);
    write_file(root / "replicates.csv", reps.str());

    std::ostringstream rate;
    write_csv(rate, report.rate);
    write_file(root / "rate.csv", rate.str());

    write_file(root / "timing.json", format_json({{"wall_seconds", report.wall_seconds}}));
}

}  // namespace steinkit::experiment
