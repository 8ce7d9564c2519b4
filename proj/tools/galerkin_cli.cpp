// galerkin_cli: run a trapping scenario, certify its constants, or run the
// oracle suites.
//
// Exit status: 0 PASS, 1 FAIL verdict or failed oracle trial, 2 usage or
// configuration error, 3 runtime error (divergence, I/O, infeasible estimates).

#include "galerkin/oracle_suite.hpp"
#include "galerkin/scenario.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

struct Options {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool reproducible = false;
    bool fast = false;
    int spot_check_interval = 0;
};

galerkin::ScenarioConfig load(const Options& o) {
    auto c = galerkin::load_config(o.config);
    if (!o.out.empty()) c.output.dir = o.out;
    if (o.seed_set) c.initial.seed = o.seed;
    if (o.reproducible) c.reproducible = true;
    if (o.fast) c.fast_nonlinearity = true;
    if (o.spot_check_interval > 0) c.spot_check_interval = o.spot_check_interval;
    galerkin::validate(c);
    return c;
}

int exit_code(const galerkin::Error& e) {
    switch (e.code()) {
    case galerkin::ErrorCode::Configuration:
    case galerkin::ErrorCode::Precondition: return 2;
    default: return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Galerkin truncations of the periodic vorticity equation: trapping-region scenarios"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", o.out, "output directory (overrides output.dir)");
        sub->add_flag("--reproducible", o.reproducible, "sequential runs, no timing output");
    };

    auto* run = app.add_subcommand("run", "simulate a scenario on both truncations and write the verdict");
    run->add_option("--config", o.config, "scenario JSON")->required()->check(CLI::ExistingFile);
    add_common(run);
    run->add_option("--seed", o.seed, "initial-phase seed (overrides initial.seed)")->each([&](const std::string&) {
        o.seed_set = true;
    });
    run->add_flag("--fast-nonlinearity", o.fast, "FFT nonlinearity with direct spot checks");
    run->add_option("--spot-check-interval", o.spot_check_interval, "steps between spot checks (default 100)")
        ->check(CLI::PositiveNumber);

    auto* cert = app.add_subcommand("certify", "estimates only: E*, K_crit, K0, D', gamma'");
    cert->add_option("--config", o.config, "scenario JSON")->required()->check(CLI::ExistingFile);
    add_common(cert);

    auto* orc = app.add_subcommand("oracle", "randomized oracle suites, logged to oracle.csv");
    orc->add_option("--out", o.out, "output directory")->default_val("out/oracle");
    orc->add_option("--seed", o.seed, "base seed")->default_val(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const auto c = load(o);
            const auto res = galerkin::run_scenario(c);
            std::cout << res.verdict << "\n";
            return res.pass ? 0 : 1;
        }
        if (*cert) {
            const auto c = load(o);
            const auto est = galerkin::certify(c);
            std::cout << est.to_json();
            return 0;
        }
        auto opts = galerkin::default_oracle_options();
        opts.seed = o.seed;
        const auto sum = galerkin::run_oracle_suites(opts);
        std::filesystem::create_directories(o.out);
        galerkin::write_text_file((std::filesystem::path(o.out) / "oracle.csv").string(), galerkin::oracle_csv(sum.rows));
        for (const auto& [suite, n] : sum.trials)
            std::cout << suite << " " << n - sum.failures.at(suite) << "/" << n << "\n";
        std::cout << (sum.all_pass() ? "PASS" : "FAIL") << "\n";
        return sum.all_pass() ? 0 : 1;
    } catch (const galerkin::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
