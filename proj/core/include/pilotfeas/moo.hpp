#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pilotfeas/hypotheses.hpp"
#include "pilotfeas/stats.hpp"
#include "pilotfeas/trial_model.hpp"

namespace pilotfeas {

// One operating point of the single-statistic pilot test: threshold c with its
// certified worst-case error rates and the boundary points attaining them.
struct ErrorRatePoint {
    double c = 0.0;
    Probability alpha{0.0};
    Probability beta{1.0};
    Rates phi0_witness;
    Rates phi1_witness;
};

struct MooSettings {
    std::int64_t population = 100;
    std::int64_t generations = 200;
    double crossover_prob = 0.9;
    double crossover_eta = 15.0;
    std::optional<double> mutation_prob; // default: 1 / dimension count
    double mutation_eta = 20.0;
    std::uint64_t seed = 42;
};

void validate(const MooSettings& settings);

// Worst-case error rates at threshold c: deterministic maximization over the
// 0.005-step hypothesis-boundary grids (alpha over the null, beta over the
// alternative), sweeping sigma on a 25-point log grid from the floor to 2.5x
// the floor when the hypotheses carry one. Independent follow-up/adherence.
ErrorRatePoint error_rates_at(const DefinitiveDesign& design, const HypothesisPair& h,
                              std::int64_t n_p, double c);

// Constrained bi-objective NSGA-II over (c, phi0, phi1) — witnesses play the
// adversarial role, jointly maximizing both error rates subject to membership
// constraints — followed by a certification pass: every surviving c is
// re-evaluated by the deterministic grid maximization of error_rates_at, the
// reported rates and witnesses are the certified ones, and the emitted set is
// mutually nondominated. Sorted by ascending c. Identical seed and settings
// give an identical frontier.
std::vector<ErrorRatePoint> pareto_frontier(const DefinitiveDesign& design,
                                            const HypothesisPair& h, std::int64_t n_p,
                                            const MooSettings& settings = {});

// Smallest c whose certified beta meets beta_target (to 1e-4), by bisection on
// the monotone beta(c). Throws unattainable_target_error when beta at c = 0
// already exceeds the target.
double solve_c_for_beta(const DefinitiveDesign& design, const HypothesisPair& h,
                        std::int64_t n_p, double beta_target);

struct SweepPoint {
    double p0 = 0.0;
    Probability alpha{0.0};
    Rates phi0_witness;
};

// Type I error as a function of the null parameter p0, holding c and the
// alternative fixed: each grid point redefines Phi_0 and re-runs the boundary
// maximization. Known-variance mode only.
std::vector<SweepPoint> sweep_p0(const DefinitiveDesign& design, double p1,
                                 std::int64_t n_p, double c,
                                 const std::vector<double>& p0_grid);

} // namespace pilotfeas
