#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "experiment/config.hpp"
#include "experiment/report.hpp"
#include "experiment/run.hpp"
#include "steinkit/bounds.hpp"

namespace ex = steinkit::experiment;
namespace fs = std::filesystem;
using namespace steinkit;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

const fs::path kConfigs = STEINKIT_CONFIG_DIR;
const fs::path kOut = STEINKIT_ACCEPTANCE_OUT;

ex::Report run_config(const std::string& name, unsigned workers = 0, const std::string& tag = "") {
    ex::Overrides over;
    over.workers = workers > 0 ? workers : std::max(1u, std::thread::hardware_concurrency());
    over.out_dir = (kOut / (name + tag)).string();
    const auto cfg = ex::load_config((kConfigs / (name + ".json")).string(), over);
    auto report = ex::run_experiment(cfg);
    ex::emit_report(report, ex::report_header(cfg), cfg.out_dir);
    return report;
}

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

// Failing assertion names, or the assertion count when none fail.
Outcome judge(const ex::Report& r, const std::function<bool(const std::string&)>& keep = {}) {
    Outcome o{true, ""};
    std::size_t n = 0;
    for (const auto& a : r.assertions) {
        if (keep && !keep(a.name)) continue;
        ++n;
        if (!a.pass) {
            o.pass = false;
            o.detail += (o.detail.empty() ? "failed: " : ", ") + a.name + "=" + ex::format_number(a.value) +
                        " (limit " + ex::format_number(a.limit) + ")";
        }
    }
    if (n == 0) return {false, "no assertions"};
    if (o.pass) o.detail = std::to_string(n) + " assertions";
    return o;
}

Outcome both(Outcome a, const Outcome& b) {
    a.pass = a.pass && b.pass;
    a.detail += "; " + b.detail;
    return a;
}

Outcome constants() {
    struct Case {
        const char* name;
        double got;
        double want;
    };
    BoundTerms ones;
    ones.r = {1, 1, 1, 1, 1};
    const Case cases[] = {
        {"theorem1", combine_theorem1(ones), 35.0},
        {"theorem2", combine_theorem2(ones), 29.5},
        {"corollary1", combine_corollary1(1, 1, 1), 22.5},
        {"theorem5", combine_theorem5(1, 1, 1, 1), 35.0},
        {"excursion", bound_excursion(1, 1, 1), 14.0 * std::sqrt(2.0) + 110.0},
        {"local_dependence", bound_local_dependence({1, 1.0, 3.0, 1}), 111.0},
    };
    Outcome o{true, "6 constants"};
    for (const auto& c : cases) {
        if (std::abs(c.got - c.want) > 1e-12) {
            o.pass = false;
            o.detail = std::string(c.name) + " = " + ex::format_number(c.got);
        }
    }
    return o;
}

Outcome lemma5_suite() {
    std::mt19937_64 gen(20240611);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 1000000; ++i) {
        const auto r = lemma5_check(u(gen), u(gen), u(gen), u(gen), u(gen));
        for (double s : r.slack) worst = std::min(worst, s);
    }
    return {worst >= -1e-12, "10^6 tuples, min slack " + ex::format_number(worst)};
}

Outcome occupancy_identity(bool residuals) {
    const auto r = run_config("occupancy_identity");
    return judge(r, [residuals](const std::string& n) { return starts_with(n, "residual_") == residuals; });
}

Outcome reproducibility() {
    // Reruns the CRM Palm check and the k-runs enumeration check with
    // different worker counts.
    Outcome o{true, ""};
    for (const char* name : {"crm_identity", "kruns_small"}) {
        run_config(name, 1, "_w1");
        run_config(name, 4, "_w4");
        std::ifstream a(kOut / (std::string(name) + "_w1") / "summary.json", std::ios::binary);
        std::ifstream b(kOut / (std::string(name) + "_w4") / "summary.json", std::ios::binary);
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        const bool same = !sa.str().empty() && sa.str() == sb.str();
        o.pass = o.pass && same;
        o.detail += std::string(o.detail.empty() ? "" : ", ") + name + (same ? " identical" : " differs");
    }
    return o;
}

Outcome criterion(int id) {
    switch (id) {
    case 1: return constants();
    case 2: return lemma5_suite();
    case 3: return occupancy_identity(true);
    case 4: return occupancy_identity(false);
    case 5: return judge(run_config("crm_identity"));
    case 6: return judge(run_config("iid_rate"));
    case 7: return both(judge(run_config("kruns_rate")), judge(run_config("kruns_small")));
    case 8: return judge(run_config("occupancy_rate"));
    case 9: return judge(run_config("voronoi_rate"));
    case 10: return judge(run_config("geometry_fixture"));
    case 11: return judge(run_config("ginibre"));
    case 12: return reproducibility();
    default: return {false, "unknown criterion"};
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> ids;
    for (int i = 1; i < argc; ++i) ids.insert(std::atoi(argv[i]));
    if (ids.empty())
        for (int i = 1; i <= 12; ++i) ids.insert(i);

    bool all = true;
    for (int id : ids) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criterion(id);
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d: %s  %s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
