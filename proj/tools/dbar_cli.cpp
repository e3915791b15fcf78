#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dbar/harness.hpp"

namespace {

struct Options
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> tol;
    std::optional<std::string> out;
    std::optional<int> nr, ntheta, degree;
    std::string golden;
    bool bless = false;
};

dbar::RunConfig build_config(const Options& o)
{
    dbar::RunConfig c = o.config.empty() ? dbar::RunConfig{} : dbar::parse_run_config(dbar::read_json_file(o.config));
    if (o.seed)
        c.seed = *o.seed;
    for (const auto& t : o.tol)
        c.set_tolerance(t);
    if (o.out)
        c.out = *o.out;
    if (o.nr)
        c.domain.grid.nr = *o.nr;
    if (o.ntheta)
        c.domain.grid.ntheta = *o.ntheta;
    if (o.degree)
        c.domain.degree = *o.degree;
    if (c.domain.grid.nr < 2 || c.domain.grid.ntheta < 4)
        throw dbar::ConfigError("need nr >= 2 and ntheta >= 4");
    if (c.domain.degree < 0)
        throw dbar::ConfigError("degree must be nonnegative");
    if (o.bless && o.golden.empty())
        throw dbar::ConfigError("--bless needs --golden DIR");
    return c;
}

int run(const std::vector<std::string>& suites, const Options& o)
{
    const dbar::RunConfig cfg = build_config(o);
    int status = dbar::exit_code::pass;
    for (const auto& name : suites) {
        dbar::SuiteResult r;
        try {
            r = dbar::run_suite(name, cfg);
        } catch (const dbar::ConfigError&) {
            throw;
        } catch (const dbar::IoError&) {
            throw;
        } catch (const dbar::Error& e) {
            // a numerical precondition failed inside the suite: report it as a failed check
            r.suite = name;
            r.seed = cfg.seed;
            r.flag(std::string("aborted: ") + e.what(), false);
        }
        if (!o.golden.empty()) {
            if (o.bless)
                dbar::bless_golden(r, o.golden);
            else
                dbar::compare_golden(r, o.golden, cfg.tol("golden_rtol"));
        }
        dbar::emit_report(r, cfg.out);
        std::printf("%-17s %s  max_residual=%s  runtime_ms=%.0f\n", name.c_str(), r.pass() ? "PASS" : "FAIL",
                    dbar::format_double(r.max_residual()).c_str(), r.runtime_ms);
        for (const auto& c : r.checks)
            if (!c.pass())
                std::printf("  failed %s: value=%s threshold=%s\n", c.name.c_str(), dbar::format_double(c.value).c_str(),
                            dbar::format_double(c.threshold).c_str());
        if (!r.pass())
            status = dbar::exit_code::assertion;
    }
    return status;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"dbar: canonical dbar solutions and Bergman projections on product domains"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", o.seed, "master seed");
    app.add_option("--tol", o.tol, "tolerance override NAME=VALUE (repeatable)");
    app.add_option("--out", o.out, "output directory");
    app.add_option("--nr", o.nr, "radial nodes per slice");
    app.add_option("--ntheta", o.ntheta, "angular nodes per slice");
    app.add_option("--degree", o.degree, "maximum polynomial degree of test families");
    app.add_option("--golden", o.golden, "golden directory to compare against");
    app.add_flag("--bless", o.bless, "write goldens instead of comparing");

    std::vector<std::string> selected;
    for (const auto& name : dbar::suite_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " suite");
        sub->fallthrough();
        sub->callback([&selected, name] { selected = {name}; });
    }
    auto* all = app.add_subcommand("all", "run every suite in order");
    all->fallthrough();
    all->callback([&selected] { selected = dbar::suite_names(); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : dbar::exit_code::config;
    }

    try {
        return run(selected, o);
    } catch (const dbar::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return dbar::exit_code::io;
    } catch (const dbar::Error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return dbar::exit_code::config;
    }
}
