#include "pilotfeas/hypotheses.hpp"

#include <cmath>
#include <string>

namespace pilotfeas {

HypothesisPair make_hypotheses(const DefinitiveDesign& design, double p0, double p1,
                               std::optional<double> sigma_floor) {
    Probability pp0(p0);
    Probability pp1(p1);
    if (!(p0 < p1)) {
        throw domain_error("HypothesisPair: p0 must be smaller than p1");
    }
    if (!(p0 > 0.0 && p1 < 1.0)) {
        throw domain_error("HypothesisPair: p0 and p1 must lie strictly inside (0,1)");
    }
    if (sigma_floor && !(*sigma_floor > 0.0)) {
        throw domain_error("HypothesisPair: sigma_floor must be positive");
    }
    const double z = design.z_alpha();
    HypothesisPair h;
    h.p0 = p0;
    h.p1 = p1;
    h.x0 = stats::std_normal_quantile(p0) + z;
    h.x1 = stats::std_normal_quantile(p1) + z;
    h.sigma_floor = sigma_floor;
    return h;
}

Membership membership(const HypothesisPair& h, const DefinitiveDesign& design,
                      const Rates& rates) {
    if (h.sigma_floor) {
        const double sigma = rates.sigma.value_or(design.sigma0);
        if (sigma < *h.sigma_floor) {
            throw domain_error("membership: sigma below the hypothesis floor sigma_*");
        }
    }
    const double x = x_statistic(design, rates);
    if (x <= h.x0) return Membership::null;
    if (x >= h.x1) return Membership::alternative;
    return Membership::indeterminate;
}

std::optional<double> boundary_follow_up(const HypothesisPair& h,
                                         const DefinitiveDesign& design, double phi_r,
                                         double phi_a, Membership which,
                                         std::optional<double> sigma) {
    if (which == Membership::indeterminate) {
        throw domain_error("boundary_follow_up: which must be null or alternative");
    }
    Probability pr(phi_r);
    Probability pa(phi_a);
    if (!(phi_a > 0.0)) {
        throw domain_error("boundary_follow_up: phi_a must be positive");
    }
    const double en = expected_recruited(design, pr);
    if (!(en > 0.0)) {
        throw domain_error("boundary_follow_up: expected recruitment is zero");
    }
    const double s = sigma.value_or(design.sigma0);
    const double xi = (which == Membership::null) ? h.x0 : h.x1;
    // x(phi) is nonnegative, so a nonpositive target is unreachable; without
    // this guard the squared inversion below would silently return the
    // boundary of |x_i| instead.
    if (!(xi > 0.0)) return std::nullopt;
    const double mu = design.mu;
    const double pf = xi * xi * (4.0 * s * s + 2.0 * mu * mu * phi_a * (1.0 - phi_a)) /
                      ((phi_a * mu) * (phi_a * mu) * en);
    if (!(pf > 0.0 && pf <= 1.0)) return std::nullopt;
    return pf;
}

std::vector<BoundaryPoint> boundary_surface(const HypothesisPair& h,
                                            const DefinitiveDesign& design,
                                            double grid_step, Membership which) {
    if (!(grid_step > 0.0 && grid_step <= 0.1)) {
        throw domain_error("boundary_surface: grid_step must lie in (0, 0.1]");
    }
    const auto steps = static_cast<std::int64_t>(std::llround(1.0 / grid_step));
    std::vector<BoundaryPoint> out;
    for (std::int64_t i = 1; i <= steps; ++i) {
        const double phi_r = static_cast<double>(i) / static_cast<double>(steps);
        for (std::int64_t j = 1; j <= steps; ++j) {
            const double phi_a = static_cast<double>(j) / static_cast<double>(steps);
            const auto pf = boundary_follow_up(h, design, phi_r, phi_a, which);
            if (pf) out.push_back({phi_r, phi_a, *pf});
        }
    }
    return out;
}

} // namespace pilotfeas
