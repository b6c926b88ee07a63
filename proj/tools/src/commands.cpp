#include "commands.hpp"

#include <array>
#include <iostream>
#include <vector>

#include "csv.hpp"
#include "pilotfeas/hypotheses.hpp"
#include "pilotfeas/mc_oracle.hpp"
#include "pilotfeas/moo.hpp"
#include "pilotfeas/pc_comparator.hpp"
#include "pilotfeas/stats.hpp"
#include "pilotfeas/variance_extension.hpp"

namespace pilotfeas::cli {

namespace {

constexpr double kBoundaryStep = 0.005;

// The scenario sweep varies the definitive target size over the standard
// 80/90/95-percent-power ladder for the base design; everything else (eligible
// pool, effect, alpha, sigma) comes from the config.
constexpr std::array<std::int64_t, 3> kScenarioTargets{468, 514, 562};

std::string join(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

void require_independent(const DesignConfig& cfg, const std::string& cmd) {
    if (cfg.correlation.mode != CorrelationMode::independent)
        throw config_error(cmd +
                           " evaluates worst-case operating characteristics, which "
                           "are defined for independent follow-up and adherence; set "
                           "correlation.mode = \"independent\"");
}

void require_fixed_sigma(const DesignConfig& cfg, const std::string& cmd) {
    if (cfg.sigma.mode != SigmaMode::fixed)
        throw config_error(cmd + " is defined for known variance only; set "
                                 "sigma.mode = \"fixed\"");
}

std::vector<std::string> frontier_header(bool with_sigma) {
    std::vector<std::string> h{"n_p", "c", "alpha", "beta", "phi0_r", "phi0_f",
                               "phi0_a"};
    if (with_sigma) h.push_back("sigma0");
    h.insert(h.end(), {"phi1_r", "phi1_f", "phi1_a"});
    if (with_sigma) h.push_back("sigma1");
    return h;
}

std::vector<std::string> frontier_row(const DesignConfig& cfg, std::int64_t n_p,
                                      const ErrorRatePoint& pt, bool with_sigma) {
    std::vector<std::string> row{fmt(n_p),
                                 fmt(pt.c),
                                 fmt(static_cast<double>(pt.alpha)),
                                 fmt(static_cast<double>(pt.beta)),
                                 fmt(pt.phi0_witness.phi_r),
                                 fmt(pt.phi0_witness.phi_f),
                                 fmt(pt.phi0_witness.phi_a)};
    if (with_sigma)
        row.push_back(fmt(pt.phi0_witness.sigma.value_or(cfg.definitive.sigma0)));
    row.insert(row.end(), {fmt(pt.phi1_witness.phi_r), fmt(pt.phi1_witness.phi_f),
                           fmt(pt.phi1_witness.phi_a)});
    if (with_sigma)
        row.push_back(fmt(pt.phi1_witness.sigma.value_or(cfg.definitive.sigma0)));
    return row;
}

void write_pc_rows(CsvFile& out, std::int64_t n_p,
                   const std::vector<PcFrontierPoint>& frontier,
                   const std::vector<std::string>& prefix) {
    for (const PcFrontierPoint& pt : frontier) {
        std::vector<std::string> row = prefix;
        row.insert(row.end(),
                   {fmt(n_p), fmt(pt.thresholds.c_f), fmt(pt.thresholds.c_a),
                    fmt(pt.thresholds.c_r), fmt(static_cast<double>(pt.alpha)),
                    fmt(static_cast<double>(pt.beta))});
        out.row(row);
    }
}

} // namespace

void cmd_boundary(const DesignConfig& cfg, const Options& opt) {
    for (const double p0 : cfg.p0) {
        const HypothesisPair h = hypotheses_for(cfg, p0);
        CsvFile out(join(opt.out_dir, "boundary_p0_" + fmt(p0) + ".csv"),
                    {"phi_r", "phi_a", "phi_f", "which"}, cfg.hash, opt.seed);
        for (const auto& [which, name] :
             {std::pair{Membership::null, "null"},
              std::pair{Membership::alternative, "alternative"}}) {
            for (const BoundaryPoint& pt :
                 boundary_surface(h, cfg.definitive, kBoundaryStep, which))
                out.row({fmt(pt.phi_r), fmt(pt.phi_a), fmt(pt.phi_f), name});
        }
    }
}

void cmd_ocs(const DesignConfig& cfg, const Options& opt) {
    require_independent(cfg, "ocs");
    const bool with_sigma = cfg.sigma.mode == SigmaMode::estimate;
    MooSettings settings = cfg.moo;
    settings.seed = opt.seed;
    for (const double p0 : cfg.p0) {
        const HypothesisPair h = hypotheses_for(cfg, p0);
        CsvFile out(join(opt.out_dir, "ocs_p0_" + fmt(p0) + ".csv"),
                    frontier_header(with_sigma), cfg.hash, opt.seed);
        for (const std::int64_t n_p : cfg.pilot) {
            for (const ErrorRatePoint& pt :
                 pareto_frontier(cfg.definitive, h, n_p, settings))
                out.row(frontier_row(cfg, n_p, pt, with_sigma));
        }
    }
}

void cmd_compare(const DesignConfig& cfg, const Options& opt) {
    require_independent(cfg, "compare");
    require_fixed_sigma(cfg, "compare");
    for (const double p0 : cfg.p0) {
        const HypothesisPair h = hypotheses_for(cfg, p0);
        CsvFile out(join(opt.out_dir, "compare_p0_" + fmt(p0) + ".csv"),
                    {"n_p", "c_f", "c_a", "c_r", "alpha", "beta"}, cfg.hash, opt.seed);
        for (const std::int64_t n_p : cfg.pilot)
            write_pc_rows(out, n_p, pc_frontier(cfg.definitive, h, n_p), {});
    }
}

void cmd_sweep(const DesignConfig& cfg, const Options& opt) {
    require_independent(cfg, "sweep");
    require_fixed_sigma(cfg, "sweep");
    CsvFile out(join(opt.out_dir, "sweep.csv"),
                {"n_p", "c", "p0", "alpha", "phi0_r", "phi0_f", "phi0_a"}, cfg.hash,
                opt.seed);
    for (const std::int64_t n_p : cfg.pilot) {
        const HypothesisPair h = hypotheses_for(cfg, cfg.p0.front());
        const double c = solve_c_for_beta(cfg.definitive, h, n_p, opt.beta_target);
        for (const SweepPoint& pt : sweep_p0(cfg.definitive, cfg.p1, n_p, c, cfg.p0)) {
            out.row({fmt(n_p), fmt(c), fmt(pt.p0), fmt(static_cast<double>(pt.alpha)),
                     fmt(pt.phi0_witness.phi_r), fmt(pt.phi0_witness.phi_f),
                     fmt(pt.phi0_witness.phi_a)});
        }
    }
}

void cmd_scenarios(const DesignConfig& cfg, const Options& opt) {
    require_independent(cfg, "scenarios");
    require_fixed_sigma(cfg, "scenarios");
    MooSettings settings = cfg.moo;
    settings.seed = opt.seed;

    std::vector<std::string> ocs_header{"n_t", "p0"};
    const auto base = frontier_header(false);
    ocs_header.insert(ocs_header.end(), base.begin(), base.end());
    CsvFile ocs(join(opt.out_dir, "scenarios_ocs.csv"), ocs_header, cfg.hash, opt.seed);
    CsvFile pc(join(opt.out_dir, "scenarios_pc.csv"),
               {"n_t", "p0", "n_p", "c_f", "c_a", "c_r", "alpha", "beta"}, cfg.hash,
               opt.seed);

    for (const std::int64_t n_t : kScenarioTargets) {
        DefinitiveDesign design = cfg.definitive;
        design.n_t = n_t;
        for (const double p0 : cfg.p0) {
            const HypothesisPair h = make_hypotheses(design, p0, cfg.p1);
            for (const std::int64_t n_p : cfg.pilot) {
                for (const ErrorRatePoint& pt : pareto_frontier(design, h, n_p, settings)) {
                    std::vector<std::string> row{fmt(n_t), fmt(p0)};
                    const auto tail = frontier_row(cfg, n_p, pt, false);
                    row.insert(row.end(), tail.begin(), tail.end());
                    ocs.row(row);
                }
                write_pc_rows(pc, n_p, pc_frontier(design, h, n_p), {fmt(n_t), fmt(p0)});
            }
        }
    }
}

void cmd_decide(const DesignConfig& cfg, const Options& opt) {
    const PilotOutcome& counts = opt.counts;
    const std::int64_t n_p = counts.n11 + counts.n01 + counts.n00 + counts.n10;
    if (n_p < 1)
        throw config_error("decide: intervention cell counts must total n_p >= 1");
    const PilotDesign pilot{n_p, opt.c, cfg.correlation.mode,
                            cfg.correlation.adherence_estimator};
    validate(pilot);
    validate(counts, pilot);
    if (cfg.sigma.mode == SigmaMode::estimate) {
        if (!opt.sigma_hat)
            throw config_error(
                "decide: estimated-variance mode needs --sigma-hat (the observed "
                "pilot standard deviation)");
        if (!(*opt.sigma_hat > 0.0))
            throw config_error("decide: --sigma-hat must be > 0");
    } else if (opt.sigma_hat) {
        throw config_error(
            "decide: --sigma-hat only applies when sigma.mode = \"estimate\"");
    }

    const Decision d = decide(cfg.definitive, pilot, counts, opt.sigma_hat);
    const double threshold = static_cast<double>(
        stats::std_normal_cdf(opt.c - cfg.definitive.z_alpha()));
    std::cout << "decision: " << (d.go ? "go" : "stop") << "\n"
              << "predicted_power: " << fmt(d.predicted_power) << "\n"
              << "power_threshold: " << fmt(threshold) << "\n"
              << "phi_r_hat: " << fmt(d.estimates.phi_r_hat) << "\n"
              << "phi_f_hat: " << fmt(d.estimates.phi_f_hat) << "\n"
              << "phi_a_hat: " << fmt(d.estimates.phi_a_hat) << "\n";
}

void cmd_mc_check(const DesignConfig& cfg, const Options& opt) {
    CsvFile out(join(opt.out_dir, "mc_check.csv"),
                {"quantity", "analytic", "empirical", "se", "z"}, cfg.hash, opt.seed);
    std::uint64_t stream = 0;
    const auto emit = [&](const std::string& quantity, double analytic,
                          const SimResult& sim) {
        const double z =
            sim.std_error > 0.0 ? (sim.estimate - analytic) / sim.std_error : 0.0;
        out.row({quantity, fmt(analytic), fmt(sim.estimate), fmt(sim.std_error),
                 fmt(z)});
    };
    const auto next = [&] { return SimSettings{opt.replicates, opt.seed + stream++}; };

    const std::array<Rates, 2> battery{
        Rates{0.5, 0.8, 0.7, cfg.correlation.phi_or, std::nullopt},
        Rates{0.9, 0.95, 0.85, cfg.correlation.phi_or, std::nullopt}};

    for (const std::int64_t n_p : cfg.pilot) {
        const PilotDesign pilot{n_p, opt.check_c, cfg.correlation.mode,
                                cfg.correlation.adherence_estimator};
        const std::string tag = " n_p=" + fmt(n_p) + " c=" + fmt(opt.check_c);
        for (const Rates& rates : battery) {
            const std::string phi = " phi=" + fmt(rates.phi_r) + "/" +
                                    fmt(rates.phi_f) + "/" + fmt(rates.phi_a);
            emit("pilot_power" + tag + phi,
                 static_cast<double>(pilot_power(cfg.definitive, pilot, rates)),
                 simulate_pilot(cfg.definitive, pilot, rates, next()));
        }
        if (cfg.correlation.phi_or == 1.0 && cfg.sigma.mode == SigmaMode::fixed) {
            const ThresholdTriple thresholds{0.5, 0.5, 0.5};
            const Rates& rates = battery[0];
            emit("go_probability n_p=" + fmt(n_p) + " thresholds=0.5/0.5/0.5",
                 static_cast<double>(
                     go_probability(cfg.definitive, n_p, thresholds, rates)),
                 simulate_pc(cfg.definitive, n_p, thresholds.c_f, thresholds.c_a,
                             thresholds.c_r, rates, next()));
        }
        if (cfg.sigma.mode == SigmaMode::estimate) {
            Rates rates = battery[0];
            rates.sigma = 1.25 * *cfg.sigma.floor;
            emit("pilot_power_unknown_sigma" + tag + " sigma=" + fmt(*rates.sigma),
                 static_cast<double>(pilot_power_unknown_sigma(
                     cfg.definitive, pilot, rates, VarianceConfig{*cfg.sigma.floor})),
                 simulate_pilot(cfg.definitive, pilot, rates, next(), true));
        }
    }

    const Rates definitive_rates{1.0, 0.9, 1.0, 1.0, std::nullopt};
    emit("definitive_power phi=1/0.9/1",
         static_cast<double>(definitive_power(cfg.definitive, definitive_rates)),
         simulate_definitive(cfg.definitive, definitive_rates, next()));
}

} // namespace pilotfeas::cli
