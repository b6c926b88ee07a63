#pragma once

#include <cstdint>

#include "pilotfeas/pilot_test.hpp"

namespace pilotfeas {

struct SimSettings {
    std::int64_t replicates = 0;
    std::uint64_t seed = 0;
};

void validate(const SimSettings& sim);

struct SimResult {
    double estimate = 0.0;
    double std_error = 0.0; // sqrt(p(1-p)/R)
};

// Empirical go-rate from the generative model: sequential Bernoulli screening
// until 2 n_p consents (S = failures), per-participant intervention
// (follow-up, adherence) cells, control follow-ups, then the decide rule.
// With estimate_sigma, sigma-hat^2 ~ sigma^2 chi^2_{f-1}/(f-1) feeds the rule
// and f < 2 never goes. Replicates are split into fixed partitions with
// seed-derived substreams, so results do not depend on the thread count.
SimResult simulate_pilot(const DefinitiveDesign& design, const PilotDesign& pilot,
                         const Rates& rates, const SimSettings& sim,
                         bool estimate_sigma = false);

// Empirical go-rate under independent conventional progression criteria
// (see pc_comparator): pass iff phi_f-hat > c_f, phi_a-hat > c_a,
// phi_r-hat > c_r, all strict.
SimResult simulate_pc(const DefinitiveDesign& design, std::int64_t n_p,
                      double c_f, double c_a, double c_r, const Rates& rates,
                      const SimSettings& sim);

// Empirical definitive-trial power: recruitment Bin(n_e, phi_r) truncated at
// n_t, split with the larger half to control, complete-case one-sided z-test.
SimResult simulate_definitive(const DefinitiveDesign& design, const Rates& rates,
                              const SimSettings& sim);

} // namespace pilotfeas
