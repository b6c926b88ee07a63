#pragma once

#include <cstdint>
#include <vector>

#include "pilotfeas/pilot_test.hpp"

namespace pilotfeas {

// Unknown-variance mode: sigma joins the hypothesis space (bounded below by
// sigma_floor) and the pilot variance estimate enters the test statistic.
struct VarianceConfig {
    double sigma_floor = 0.0;
    double s_quantile = 0.999; // negative-binomial truncation level
};

void validate(const VarianceConfig& cfg);

// Largest sample variance still producing a go at threshold c given estimates:
// y = a^2 mu^2 f E[N|r-hat] / (4c^2) - mu^2 a (1-a) / 2. May be <= 0 (no
// variance estimate passes). Requires c > 0.
double variance_cutoff(const DefinitiveDesign& design, const PilotEstimates& estimates,
                       double c);

// Pr[x(phi-hat, sigma-hat) > c] in independent mode, with
// sigma-hat^2 | f ~ sigma^2 chi^2_{f-1} / (f-1); outcomes with f < 2 never go
// (sample variance undefined). True sigma comes from rates.sigma (default:
// design sigma0). Throws domain_error in correlated mode.
Probability pilot_power_unknown_sigma(const DefinitiveDesign& design,
                                      const PilotDesign& pilot, const Rates& rates,
                                      const VarianceConfig& cfg);

// Repeated-evaluation path over a shared engine. Chi-squared CDF lookups are
// tabulated per follow-up count during construction, so const evaluators are
// safe to share across threads.
class UnknownSigmaEvaluator {
public:
    UnknownSigmaEvaluator(const PowerEngine& engine, const VarianceConfig& cfg);

    const PowerEngine& engine() const { return *engine_; }
    const VarianceConfig& config() const { return cfg_; }

    // Go-probability contribution matrix for one (c, phi_r, sigma) class:
    // K[a * (2n_p + 1) + f] = sum_s nb_pmf(s) Pr[sigma-hat^2 < y(a, f, s)].
    // h for any (phi_a, phi_f) in the class is then pa^T K pf.
    std::vector<double> class_matrix(double c, double phi_r, double sigma) const;

    // pa^T K pf with binomial weight vectors for (phi_a, phi_f).
    double power_with_matrix(const std::vector<double>& K, double phi_a,
                             double phi_f) const;

    // One-off h(n_p, c, phi, sigma); sigma from rates.sigma or design sigma0.
    double power(double c, const Rates& rates) const;

private:
    double chisq_cdf_fast(double u, std::int64_t df) const;

    const PowerEngine* engine_;
    VarianceConfig cfg_;
    // Interpolation tables for chi-squared CDFs with df >= kExactDfLimit;
    // smaller df (sharply curved near 0) fall back to the exact kernel.
    struct DfTable {
        double lo = 0.0;
        double step = 0.0;
        std::vector<double> g;
    };
    static constexpr std::int64_t kExactDfLimit = 30;
    std::vector<DfTable> tables_; // indexed by df
};

} // namespace pilotfeas
