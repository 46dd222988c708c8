#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "experiment/config.hpp"
#include "experiment/report.hpp"
#include "experiment/run.hpp"

namespace ex = steinkit::experiment;

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::string> out;
};

void add_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "master seed; overrides the config");
    cmd->add_option("--workers", f.workers, "worker threads; results do not depend on it")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", f.out, "output directory; overrides the config");
}

int run(const Flags& f, std::optional<ex::CheckKind> kind) {
    ex::Overrides over{kind, f.seed, f.workers, f.out};
    const auto cfg = ex::load_config(f.config, over);
    const auto report = ex::run_experiment(cfg);
    ex::emit_report(report, ex::report_header(cfg), cfg.out_dir);
    for (const auto& a : report.assertions) {
        std::printf("%-4s %s value=%s limit=%s\n", a.pass ? "ok" : "FAIL", a.name.c_str(),
                    ex::format_number(a.value).c_str(), ex::format_number(a.limit).c_str());
    }
    std::printf("%s: %s (%.1f s) -> %s\n", ex::to_string(cfg.kind).c_str(), report.pass() ? "pass" : "fail",
                report.wall_seconds, cfg.out_dir.c_str());
    return ex::exit_status(report);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"steinkit: Stein-method bounds and Monte Carlo checks"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        std::optional<ex::CheckKind> kind;
    };
    const Sub subs[] = {
        {"simulate", "draw replicates and summarize the statistic", ex::CheckKind::simulate},
        {"identity-check", "Stein or Palm identity residuals", ex::CheckKind::identity},
        {"kdist", "empirical Kolmogorov distance to N(0, 1)", ex::CheckKind::kdist},
        {"bound", "closed-form or estimated bound against the empirical distance", ex::CheckKind::bound},
        {"rate", "log-log rate fit over a scale ladder", ex::CheckKind::rate},
        {"fixture", "deterministic geometry fixtures", ex::CheckKind::fixture},
    };
    Flags flags;
    std::vector<std::pair<CLI::App*, std::optional<ex::CheckKind>>> cmds;
    for (const auto& s : subs) {
        auto* cmd = app.add_subcommand(s.name, s.help);
        add_flags(cmd, flags);
        cmds.emplace_back(cmd, s.kind);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        for (auto& [cmd, kind] : cmds) {
            if (!cmd->parsed()) continue;
            return run(flags, kind);
        }
    } catch (const ex::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kConfigError;
}
