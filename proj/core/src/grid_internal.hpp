#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pilotfeas/hypotheses.hpp"
#include "pilotfeas/trial_model.hpp"

namespace pilotfeas {
namespace detail {

struct GridColumn {
    double phi_a;
    double phi_f;
};

struct GridClass {
    double phi_r;
    std::vector<GridColumn> cols;
};

// Candidate worst-case points for the boundary-grid inner maximization,
// grouped by phi_r so negative-binomial rows can be shared per class.
//
// Candidates are restricted to the hypothesis-boundary surface x(phi) = x_i:
// at each grid column (phi_r, phi_a) the follow-up rate solving that equation
// is kept when it lands in (0, 1], and the column is skipped otherwise (no
// solution means the surface does not pass through the column's phi_f range).
// Both sides use the same rule so reported error rates are comparable across
// operating characteristics.
inline std::vector<GridClass> boundary_candidates(const HypothesisPair& h,
                                                  const DefinitiveDesign& design,
                                                  double step, Membership which,
                                                  std::optional<double> sigma =
                                                      std::nullopt) {
    if (!(step > 0.0 && step <= 0.1))
        throw domain_error("boundary_candidates: step must lie in (0, 0.1]");
    if (which == Membership::indeterminate)
        throw domain_error("boundary_candidates: which must be null or alternative");
    // x(phi) >= 0 everywhere, so a negative x0 leaves the null empty; the
    // inversion formula below would fabricate columns from x0^2 otherwise.
    if (which == Membership::null && h.x0 < 0.0) return {};
    const auto steps = static_cast<std::int64_t>(std::llround(1.0 / step));
    const double sig = sigma.value_or(design.sigma0);
    const double xi = which == Membership::null ? h.x0 : h.x1;
    const double mu = design.mu;
    std::vector<GridClass> out;
    for (std::int64_t i = 1; i <= steps; ++i) {
        const double phi_r = static_cast<double>(i) / static_cast<double>(steps);
        const double en = expected_recruited(design, phi_r);
        GridClass cls{phi_r, {}};
        for (std::int64_t j = 1; j <= steps; ++j) {
            const double phi_a = static_cast<double>(j) / static_cast<double>(steps);
            const double pf = xi * xi *
                              (4.0 * sig * sig + 2.0 * mu * mu * phi_a * (1.0 - phi_a)) /
                              ((phi_a * mu) * (phi_a * mu) * en);
            if (pf > 0.0 && pf <= 1.0) cls.cols.push_back({phi_a, pf});
        }
        if (!cls.cols.empty()) out.push_back(std::move(cls));
    }
    return out;
}

// Insert into a minimized-(a, b) nondominated map keyed by a, maintaining the
// invariant that keys strictly increase while b strictly decreases. Exact ties
// keep the incumbent, so enumeration order decides between equal points.
template <typename T>
void pareto_insert(std::map<double, std::pair<double, T>>& m, double a, double b,
                   const T& payload) {
    auto it = m.lower_bound(a);
    if (it != m.begin() && std::prev(it)->second.first <= b) return;
    if (it != m.end() && it->first == a && it->second.first <= b) return;
    while (it != m.end() && it->second.first >= b) it = m.erase(it);
    m.emplace_hint(it, a, std::make_pair(b, payload));
}

} // namespace detail
} // namespace pilotfeas
