#pragma once

#include <cstdint>
#include <vector>

#include "pilotfeas/hypotheses.hpp"
#include "pilotfeas/stats.hpp"
#include "pilotfeas/trial_model.hpp"

namespace pilotfeas {

// Progression-criteria comparator: the conventional rule that declares "go"
// when every observed rate strictly exceeds its own fixed threshold. Serves as
// the baseline the single-statistic test is judged against. Only defined for
// independent follow-up and adherence (odds ratio 1) with known variance.

struct ThresholdTriple {
    double c_f = 0.0; // follow-up threshold, in [0, 1]
    double c_a = 0.0; // adherence threshold, in [0, 1]
    double c_r = 0.0; // recruitment threshold, in [0, 1]
};

void validate(const ThresholdTriple& t);

struct PcErrorRates {
    ThresholdTriple thresholds;
    Probability alpha{0.0};
    Probability beta{1.0};
    Rates phi0_witness; // boundary point attaining alpha
    Rates phi1_witness; // boundary point attaining beta
};

struct PcFrontierPoint {
    ThresholdTriple thresholds;
    Probability alpha{0.0};
    Probability beta{1.0};
};

// Probability that a pilot of size n_p run at the given rates passes all three
// thresholds. Requires rates.phi_or == 1 and no rates.sigma override.
Probability go_probability(const DefinitiveDesign& design, std::int64_t n_p,
                           const ThresholdTriple& thresholds, const Rates& rates);

// Worst-case error rates of a threshold rule over the hypothesis boundaries,
// evaluated on the standard 0.005-step certification grid.
PcErrorRates pc_error_rates(const DefinitiveDesign& design, const HypothesisPair& h,
                            std::int64_t n_p, const ThresholdTriple& thresholds);

// Pareto frontier of (alpha, beta) over the lattice of threshold rules that
// are distinguishable at pilot size n_p: every achievable follow-up and
// adherence cut, and every recruitment cut up to the 0.999 quantile of screens
// at the weakest boundary recruitment rate. Sorted by ascending alpha.
std::vector<PcFrontierPoint> pc_frontier(const DefinitiveDesign& design,
                                         const HypothesisPair& h, std::int64_t n_p);

} // namespace pilotfeas
