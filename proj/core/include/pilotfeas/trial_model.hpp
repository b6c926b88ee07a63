#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "pilotfeas/stats.hpp"

namespace pilotfeas {

// Feasibility parameters of the definitive trial. sigma overrides the design
// standard deviation when set (unknown-variance mode); phi_or couples the
// follow-up and adherence outcomes at participant level.
struct Rates {
    double phi_r = 1.0;
    double phi_f = 1.0;
    double phi_a = 1.0;
    double phi_or = 1.0;
    std::optional<double> sigma;
};

// Planned two-arm definitive trial with a normally distributed primary endpoint.
struct DefinitiveDesign {
    std::int64_t n_t = 0;          // target total sample size (even)
    std::int64_t n_e = 0;          // eligible pool size
    double mu = 0.0;               // difference in means
    double sigma0 = 1.0;           // design standard deviation
    double alpha_one_sided = 0.025;

    // z_{1-alpha} for the final analysis.
    double z_alpha() const;

    // true when n_t/2 < 30, where the normal approximation is shaky; callers
    // surface this as a warning rather than an error.
    bool small_arm_warning() const { return n_t / 2 < 30; }
};

// Throws domain_error / invalid_parametrization_error on violated invariants.
void validate(const Rates& rates);
void validate(const DefinitiveDesign& design);

// (p11, p01, p00, p10): joint follow-up/adherence cell probabilities for the
// intervention arm. phi_f is the marginal follow-up rate, phi_a the adherence
// rate conditional on follow-up, and phi_or the odds ratio coupling the two
// outcomes (it fixes how adherence extends to the non-followed-up mass).
std::array<double, 4> cell_probabilities(const Rates& rates);

// E[min(C, n_t)] with C ~ Bin(n_e, phi_r): expected definitive-trial accrual.
double expected_recruited(const DefinitiveDesign& design, double phi_r);

// x(phi) = phi_a mu sqrt(phi_f E[N|phi_r]) / sqrt(4 sigma^2 + 2 mu^2 phi_a (1-phi_a)).
// Returns 0 when phi_a * mu = 0. Uses rates.sigma if set, else design.sigma0.
double x_statistic(const DefinitiveDesign& design, const Rates& rates);

// g(phi) = Phi(x(phi) - z_{1-alpha}).
Probability definitive_power(const DefinitiveDesign& design, const Rates& rates);

} // namespace pilotfeas
