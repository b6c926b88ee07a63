#include "pilotfeas/trial_model.hpp"

#include <cmath>
#include <string>

namespace pilotfeas {

double DefinitiveDesign::z_alpha() const {
    return stats::std_normal_quantile(1.0 - alpha_one_sided);
}

void validate(const Rates& rates) {
    Probability r(rates.phi_r);
    Probability f(rates.phi_f);
    Probability a(rates.phi_a);
    if (!(rates.phi_or > 0.0)) {
        throw domain_error("Rates: phi_or must be positive");
    }
    if (rates.sigma && !(*rates.sigma > 0.0)) {
        throw domain_error("Rates: sigma must be positive");
    }
    cell_probabilities(rates); // raises invalid_parametrization_error when a cell escapes [0,1]
}

void validate(const DefinitiveDesign& design) {
    if (design.n_t <= 0 || design.n_e <= 0) {
        throw domain_error("DefinitiveDesign: n_t and n_e must be positive");
    }
    if (design.n_t > design.n_e) {
        throw domain_error("DefinitiveDesign: n_t must not exceed n_e");
    }
    if (design.n_t % 2 != 0) {
        throw domain_error("DefinitiveDesign: n_t must be even (equal randomisation)");
    }
    if (design.mu == 0.0) {
        throw domain_error("DefinitiveDesign: mu must be nonzero");
    }
    if (!(design.sigma0 > 0.0)) {
        throw domain_error("DefinitiveDesign: sigma0 must be positive");
    }
    Probability a(design.alpha_one_sided);
    if (!(design.alpha_one_sided > 0.0 && design.alpha_one_sided < 1.0)) {
        throw domain_error("DefinitiveDesign: alpha_one_sided must lie inside (0,1)");
    }
}

std::array<double, 4> cell_probabilities(const Rates& rates) {
    const double pf = rates.phi_f;
    const double pa = rates.phi_a;
    const double orr = rates.phi_or;
    const double p11 = pa * pf;
    const double p01 = pf - p11;
    double p00;
    if (p11 + orr * p01 == 0.0) {
        // phi_f = 0: the display is 0/0; its limit splits the unfollowed mass
        // by the odds-ratio-weighted adherence margin.
        p00 = orr * (1.0 - pa) / (pa + orr * (1.0 - pa));
    } else {
        p00 = orr * p01 * (1.0 - p11 - p01) / (p11 + orr * p01);
    }
    const double p10 = 1.0 - p11 - p01 - p00;
    const std::array<double, 4> cells{p11, p01, p00, p10};
    for (double c : cells) {
        if (c < -1e-12 || c > 1.0 + 1e-12) {
            throw invalid_parametrization_error(
                "cell_probabilities: cell outside [0,1] for phi_or = " + std::to_string(orr));
        }
    }
    return {std::min(std::max(p11, 0.0), 1.0), std::min(std::max(p01, 0.0), 1.0),
            std::min(std::max(p00, 0.0), 1.0), std::min(std::max(p10, 0.0), 1.0)};
}

double expected_recruited(const DefinitiveDesign& design, double phi_r) {
    Probability pr(phi_r);
    if (pr == 0.0) return 0.0;
    if (pr == 1.0) return static_cast<double>(design.n_t);
    // E[min(C, n_t)] = sum_{k < n_t} k pmf(k) + n_t Pr(C >= n_t)
    double below = 0.0;
    double cdf_below = 0.0;
    for (std::int64_t k = 0; k < design.n_t; ++k) {
        const double pmf = stats::binomial_pmf(k, design.n_e, pr);
        below += static_cast<double>(k) * pmf;
        cdf_below += pmf;
    }
    const double tail = std::max(0.0, 1.0 - cdf_below);
    return below + static_cast<double>(design.n_t) * tail;
}

double x_statistic(const DefinitiveDesign& design, const Rates& rates) {
    const double sigma = rates.sigma.value_or(design.sigma0);
    const double pa = rates.phi_a;
    if (pa * design.mu == 0.0) return 0.0;
    const double en = expected_recruited(design, rates.phi_r);
    const double num = pa * design.mu * std::sqrt(rates.phi_f * en);
    const double den =
        std::sqrt(4.0 * sigma * sigma + 2.0 * design.mu * design.mu * pa * (1.0 - pa));
    return num / den;
}

Probability definitive_power(const DefinitiveDesign& design, const Rates& rates) {
    return stats::std_normal_cdf(x_statistic(design, rates) - design.z_alpha());
}

} // namespace pilotfeas
