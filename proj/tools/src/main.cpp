#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "pilotfeas/errors.hpp"
#include "pilotfeas/parallel.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 infeasible hypotheses, 4 numeric
// guard tripped; 1 for anything else (I/O and internal failures).
int run(const std::string& command, const std::string& config_path,
        const std::optional<std::uint64_t>& seed,
        const std::optional<std::string>& out_dir, pilotfeas::cli::Options& opt) {
    using namespace pilotfeas::cli;
    const DesignConfig cfg = load_config(config_path);
    opt.seed = seed.value_or(cfg.moo.seed);
    opt.out_dir = out_dir.value_or(cfg.output);
    std::filesystem::create_directories(opt.out_dir);

    if (command == "boundary") {
        cmd_boundary(cfg, opt);
    } else if (command == "ocs") {
        cmd_ocs(cfg, opt);
    } else if (command == "compare") {
        cmd_compare(cfg, opt);
    } else if (command == "sweep") {
        cmd_sweep(cfg, opt);
    } else if (command == "scenarios") {
        cmd_scenarios(cfg, opt);
    } else if (command == "decide") {
        cmd_decide(cfg, opt);
    } else {
        cmd_mc_check(cfg, opt);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"external pilot trials as hypothesis tests of definitive-trial "
                 "feasibility: operating characteristics, frontiers, and decisions"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::size_t threads = 0;
    app.add_option("--config", config_path, "JSON design configuration")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "override the config's optimizer/simulation seed");
    app.add_option("--out", out_dir, "output directory (default: config's output)");
    app.add_option("--threads", threads,
                   "worker thread budget (default: all cores; never changes results)");
    app.fallthrough();

    pilotfeas::cli::Options opt;

    app.add_subcommand("boundary", "emit the null/alternative hypothesis boundary "
                                   "surfaces (one CSV per p0)");
    app.add_subcommand("ocs", "Pareto frontier of certified (alpha, beta) per pilot "
                              "size (one CSV per p0)");
    app.add_subcommand("compare", "conventional progression-criteria frontier per "
                                  "pilot size (one CSV per p0)");
    CLI::App* sweep = app.add_subcommand(
        "sweep", "hold beta at a target and sweep the null parameter p0");
    sweep->add_option("--beta", opt.beta_target,
                      "type II error target for the critical value")
        ->capture_default_str();
    app.add_subcommand("scenarios",
                       "frontiers for both methods over the definitive-target ladder "
                       "{468, 514, 562} x config p0 grid x pilot sizes");
    CLI::App* decide = app.add_subcommand(
        "decide", "apply the go/stop rule to observed pilot counts");
    decide->add_option("--s", opt.counts.s, "non-consenting screens")->required();
    decide->add_option("--f0", opt.counts.f0, "control-arm follow-ups")->required();
    decide->add_option("--n11", opt.counts.n11, "intervention followed-up adherent")
        ->required();
    decide->add_option("--n01", opt.counts.n01, "intervention followed-up non-adherent")
        ->required();
    decide->add_option("--n00", opt.counts.n00, "intervention lost non-adherent")
        ->required();
    decide->add_option("--n10", opt.counts.n10, "intervention lost adherent")
        ->required();
    decide->add_option("--c", opt.c, "critical value on the x scale")->required();
    decide->add_option("--sigma-hat", opt.sigma_hat,
                       "observed pilot standard deviation (estimate mode only)");
    CLI::App* mc = app.add_subcommand(
        "mc-check", "Monte Carlo validation battery for the analytic probabilities");
    mc->add_option("--replicates", opt.replicates, "simulation replicates per row")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    mc->add_option("--c", opt.check_c, "critical value used by the pilot-power rows")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (threads > 0) pilotfeas::set_max_threads(threads);

    try {
        return run(app.get_subcommands().front()->get_name(), config_path, seed,
                   out_dir, opt);
    } catch (const pilotfeas::cli::config_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const pilotfeas::unattainable_target_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const pilotfeas::infeasible_hypotheses_error& e) {
        std::cerr << "infeasible hypotheses: " << e.what() << "\n";
        return 3;
    } catch (const pilotfeas::numeric_guard_error& e) {
        std::cerr << "numeric guard: " << e.what() << "\n";
        return 4;
    } catch (const pilotfeas::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
