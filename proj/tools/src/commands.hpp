#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "config.hpp"
#include "pilotfeas/pilot_test.hpp"

namespace pilotfeas::cli {

// Resolved command-line options shared across subcommands. seed and out_dir
// already incorporate the config defaults.
struct Options {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    double beta_target = 0.1;            // sweep
    PilotOutcome counts;                 // decide
    double c = 0.0;                      // decide
    std::optional<double> sigma_hat;     // decide, estimate mode
    std::int64_t replicates = 100000;    // mc-check
    double check_c = 2.46;               // mc-check
};

void cmd_boundary(const DesignConfig& cfg, const Options& opt);
void cmd_ocs(const DesignConfig& cfg, const Options& opt);
void cmd_compare(const DesignConfig& cfg, const Options& opt);
void cmd_sweep(const DesignConfig& cfg, const Options& opt);
void cmd_scenarios(const DesignConfig& cfg, const Options& opt);
void cmd_decide(const DesignConfig& cfg, const Options& opt);
void cmd_mc_check(const DesignConfig& cfg, const Options& opt);

} // namespace pilotfeas::cli
