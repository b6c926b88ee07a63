#include "pilotfeas/mc_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "pilotfeas/errors.hpp"
#include "pilotfeas/parallel.hpp"

namespace pilotfeas {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform on (0,1), strictly interior so it can feed the normal quantile.
double u01(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double normal(std::mt19937_64& rng) { return stats::std_normal_quantile(u01(rng)); }

bool bernoulli(std::mt19937_64& rng, double p) { return u01(rng) < p; }

// Replicates are carved into fixed-size partitions with seed-derived RNG
// substreams; partition results merge in index order, making the estimate a
// pure function of (seed, replicates) regardless of thread count.
template <typename PerReplicate>
SimResult run_partitioned(const SimSettings& sim, PerReplicate&& body) {
    const std::int64_t R = sim.replicates;
    const std::int64_t parts = std::min<std::int64_t>(64, R);
    std::vector<std::int64_t> hits(static_cast<std::size_t>(parts), 0);
    parallel_for(static_cast<std::size_t>(parts), [&](std::size_t pi) {
        const std::int64_t lo = R * static_cast<std::int64_t>(pi) / parts;
        const std::int64_t hi = R * (static_cast<std::int64_t>(pi) + 1) / parts;
        std::mt19937_64 rng(splitmix64(sim.seed ^
                                       (static_cast<std::uint64_t>(pi) + 1) *
                                           0x9e3779b97f4a7c15ULL));
        std::int64_t count = 0;
        for (std::int64_t rep = lo; rep < hi; ++rep)
            if (body(rng)) ++count;
        hits[pi] = count;
    });
    std::int64_t total = 0;
    for (std::int64_t h : hits) total += h;
    const double p = static_cast<double>(total) / static_cast<double>(R);
    return SimResult{p, std::sqrt(p * (1.0 - p) / static_cast<double>(R))};
}

struct PilotDraw {
    PilotOutcome outcome;
    std::int64_t f = 0; // total followed up
};

PilotDraw draw_pilot(std::mt19937_64& rng, std::int64_t n_p, const Rates& rates,
                     const std::array<double, 4>& cells) {
    PilotDraw d;
    const std::int64_t target = 2 * n_p;
    std::int64_t consented = 0;
    while (consented < target) {
        if (bernoulli(rng, rates.phi_r))
            ++consented;
        else
            ++d.outcome.s;
    }
    const double c1 = cells[0];
    const double c2 = c1 + cells[1];
    const double c3 = c2 + cells[2];
    for (std::int64_t i = 0; i < n_p; ++i) {
        const double u = u01(rng);
        if (u < c1)
            ++d.outcome.n11;
        else if (u < c2)
            ++d.outcome.n01;
        else if (u < c3)
            ++d.outcome.n00;
        else
            ++d.outcome.n10;
    }
    for (std::int64_t i = 0; i < n_p; ++i)
        if (bernoulli(rng, rates.phi_f)) ++d.outcome.f0;
    d.f = d.outcome.f0 + d.outcome.n11 + d.outcome.n01;
    return d;
}

} // namespace

void validate(const SimSettings& sim) {
    if (sim.replicates < 1) throw domain_error("sim settings: replicates must be >= 1");
}

SimResult simulate_pilot(const DefinitiveDesign& design, const PilotDesign& pilot,
                         const Rates& rates, const SimSettings& sim,
                         bool estimate_sigma) {
    validate(design);
    validate(pilot);
    validate(rates);
    validate(sim);
    if (!(rates.phi_r > 0.0)) throw domain_error("simulate_pilot: phi_r must be positive");
    const auto cells = cell_probabilities(rates);
    const double sigma = rates.sigma.value_or(design.sigma0);
    return run_partitioned(sim, [&](std::mt19937_64& rng) {
        const PilotDraw d = draw_pilot(rng, pilot.n_p, rates, cells);
        if (!estimate_sigma) return decide(design, pilot, d.outcome).go;
        if (d.f < 2) return false;
        double chi2 = 0.0;
        for (std::int64_t i = 0; i + 1 < d.f; ++i) {
            const double z = normal(rng);
            chi2 += z * z;
        }
        const double sigma_hat =
            sigma * std::sqrt(chi2 / static_cast<double>(d.f - 1));
        return decide(design, pilot, d.outcome, sigma_hat).go;
    });
}

SimResult simulate_pc(const DefinitiveDesign& design, std::int64_t n_p, double c_f,
                      double c_a, double c_r, const Rates& rates,
                      const SimSettings& sim) {
    validate(design);
    validate(rates);
    validate(sim);
    if (n_p <= 0) throw domain_error("simulate_pc: n_p must be positive");
    if (!(rates.phi_r > 0.0)) throw domain_error("simulate_pc: phi_r must be positive");
    const auto cells = cell_probabilities(rates);
    const PilotDesign pilot{n_p, 0.0, CorrelationMode::independent,
                            AdherenceEstimator::marginal};
    return run_partitioned(sim, [&](std::mt19937_64& rng) {
        const PilotDraw d = draw_pilot(rng, n_p, rates, cells);
        const PilotEstimates e = estimates(d.outcome, pilot);
        return e.phi_f_hat > c_f && e.phi_a_hat > c_a && e.phi_r_hat > c_r;
    });
}

SimResult simulate_definitive(const DefinitiveDesign& design, const Rates& rates,
                              const SimSettings& sim) {
    validate(design);
    validate(rates);
    validate(sim);
    const auto cells = cell_probabilities(rates);
    const double c1 = cells[0];
    const double c2 = c1 + cells[1];
    const double sigma = rates.sigma.value_or(design.sigma0);
    const double z_crit = design.z_alpha();
    return run_partitioned(sim, [&](std::mt19937_64& rng) {
        std::int64_t recruited = 0;
        for (std::int64_t i = 0; i < design.n_e && recruited < design.n_t; ++i)
            if (bernoulli(rng, rates.phi_r)) ++recruited;
        const std::int64_t n1 = recruited / 2; // larger half to control
        const std::int64_t n0 = recruited - n1;
        double sum1 = 0.0;
        std::int64_t f1 = 0;
        for (std::int64_t i = 0; i < n1; ++i) {
            const double u = u01(rng);
            const bool followed = u < c2;
            const bool adhered = u < c1 || u >= c2 + cells[2];
            if (followed) {
                sum1 += (adhered ? design.mu : 0.0) + sigma * normal(rng);
                ++f1;
            }
        }
        double sum0 = 0.0;
        std::int64_t f0 = 0;
        for (std::int64_t i = 0; i < n0; ++i) {
            if (bernoulli(rng, rates.phi_f)) {
                sum0 += sigma * normal(rng);
                ++f0;
            }
        }
        if (f1 == 0 || f0 == 0) return false;
        const double diff =
            sum1 / static_cast<double>(f1) - sum0 / static_cast<double>(f0);
        const double se = sigma * std::sqrt(1.0 / static_cast<double>(f1) +
                                            1.0 / static_cast<double>(f0));
        return diff / se > z_crit;
    });
}

} // namespace pilotfeas
