#pragma once

#include <optional>
#include <vector>

#include "pilotfeas/trial_model.hpp"

namespace pilotfeas {

enum class Membership { null, alternative, indeterminate };

// Null/alternative feasibility hypotheses derived from definitive-power
// thresholds p0 < p1: Phi_0 = {x(phi) <= x0}, Phi_1 = {x(phi) >= x1} with
// x_i = Phi^-1(p_i) + z_{1-alpha}. sigma_floor activates unknown-variance mode,
// where sigma is part of the hypothesis space and bounded below by sigma_*.
struct HypothesisPair {
    double p0 = 0.0;
    double p1 = 0.0;
    double x0 = 0.0;
    double x1 = 0.0;
    std::optional<double> sigma_floor;
};

// Builds the pair, deriving x0/x1 from the design's one-sided alpha.
HypothesisPair make_hypotheses(const DefinitiveDesign& design, double p0, double p1,
                               std::optional<double> sigma_floor = std::nullopt);

// Classifies rates (and rates.sigma in unknown-variance mode) against the pair.
Membership membership(const HypothesisPair& h, const DefinitiveDesign& design,
                      const Rates& rates);

// Inverts x(phi) = x_i in phi_f at fixed (phi_r, phi_a): returns
// x_i^2 (4 sigma^2 + 2 mu^2 phi_a (1-phi_a)) / ((phi_a mu)^2 E[N|phi_r]) when it
// lies in (0, 1], absent otherwise. sigma defaults to the design value.
std::optional<double> boundary_follow_up(const HypothesisPair& h,
                                         const DefinitiveDesign& design, double phi_r,
                                         double phi_a, Membership which,
                                         std::optional<double> sigma = std::nullopt);

struct BoundaryPoint {
    double phi_r;
    double phi_a;
    double phi_f;
};

// Boundary surface over the (phi_r, phi_a) grid with the given step; points
// whose inversion leaves (0,1] are omitted.
std::vector<BoundaryPoint> boundary_surface(const HypothesisPair& h,
                                            const DefinitiveDesign& design,
                                            double grid_step, Membership which);

} // namespace pilotfeas
