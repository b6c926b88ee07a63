#include "pilotfeas/variance_extension.hpp"

#include <algorithm>
#include <cmath>

#include "pilotfeas/errors.hpp"

namespace pilotfeas {

void validate(const VarianceConfig& cfg) {
    if (!(cfg.sigma_floor > 0.0))
        throw domain_error("variance config: sigma_floor must be positive");
    if (!(cfg.s_quantile >= 0.9 && cfg.s_quantile < 1.0))
        throw domain_error("variance config: s_quantile must lie in [0.9, 1)");
}

double variance_cutoff(const DefinitiveDesign& design, const PilotEstimates& estimates,
                       double c) {
    validate(design);
    if (!(c > 0.0)) throw domain_error("variance_cutoff: c must be positive");
    const double a = estimates.phi_a_hat;
    const double f = estimates.phi_f_hat;
    const double en = expected_recruited(design, estimates.phi_r_hat);
    const double mu2 = design.mu * design.mu;
    return a * a * mu2 * f * en / (4.0 * c * c) - 0.5 * mu2 * a * (1.0 - a);
}

UnknownSigmaEvaluator::UnknownSigmaEvaluator(const PowerEngine& engine,
                                             const VarianceConfig& cfg)
    : engine_(&engine), cfg_(cfg) {
    validate(cfg_);
    const std::int64_t max_df = 2 * engine.n_p() - 1;
    tables_.resize(static_cast<std::size_t>(std::max<std::int64_t>(max_df + 1, 1)));
    constexpr std::size_t kPoints = 1024;
    for (std::int64_t df = kExactDfLimit; df <= max_df; ++df) {
        DfTable& t = tables_[static_cast<std::size_t>(df)];
        const double spread = 9.0 * std::sqrt(2.0 * static_cast<double>(df));
        t.lo = std::max(0.0, static_cast<double>(df) - spread);
        const double hi = static_cast<double>(df) + spread;
        t.step = (hi - t.lo) / static_cast<double>(kPoints - 1);
        t.g.resize(kPoints);
        for (std::size_t i = 0; i < kPoints; ++i)
            t.g[i] = stats::chisq_cdf(t.lo + static_cast<double>(i) * t.step, df);
    }
}

double UnknownSigmaEvaluator::chisq_cdf_fast(double u, std::int64_t df) const {
    if (df < kExactDfLimit) return stats::chisq_cdf(u, df);
    const DfTable& t = tables_[static_cast<std::size_t>(df)];
    if (u <= t.lo) return 0.0;
    const double pos = (u - t.lo) / t.step;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= t.g.size()) return 1.0;
    const double w = pos - static_cast<double>(i);
    return t.g[i] + w * (t.g[i + 1] - t.g[i]);
}

std::vector<double> UnknownSigmaEvaluator::class_matrix(double c, double phi_r,
                                                        double sigma) const {
    if (!(c > 0.0)) throw domain_error("class_matrix: c must be positive");
    if (!(phi_r > 0.0 && phi_r <= 1.0))
        throw domain_error("class_matrix: phi_r must lie in (0,1]");
    if (!(sigma > 0.0)) throw domain_error("class_matrix: sigma must be positive");
    const std::int64_t n_p = engine_->n_p();
    const std::int64_t r = 2 * n_p;
    const std::int64_t s_max = stats::neg_binomial_quantile(cfg_.s_quantile, r, phi_r);
    if (s_max > engine_->expn_cap())
        throw numeric_guard_error(
            "unknown-sigma power: phi_r below the engine's accrual table range");
    const std::vector<double> nb = detail::nb_pmf_table(r, phi_r, s_max);
    const DefinitiveDesign& d = engine_->design();
    const double mu2 = d.mu * d.mu;
    const double inv_sig2 = 1.0 / (sigma * sigma);
    std::vector<double> K(static_cast<std::size_t>(n_p + 1) * static_cast<std::size_t>(r + 1),
                          0.0);
    for (std::int64_t a = 1; a <= n_p; ++a) {
        const double a_hat = static_cast<double>(a) / static_cast<double>(n_p);
        const double acoef = a_hat * a_hat * mu2 / (4.0 * c * c);
        const double bcoef = 0.5 * mu2 * a_hat * (1.0 - a_hat);
        double* row = K.data() + static_cast<std::size_t>(a) * static_cast<std::size_t>(r + 1);
        for (std::int64_t f = 2; f <= r; ++f) {
            const double f_hat = static_cast<double>(f) / static_cast<double>(r);
            const double af = acoef * f_hat;
            // y(s) = af * E[N|s] - bcoef is decreasing in s; beyond s_pos it is
            // non-positive and contributes nothing.
            const std::int64_t s_pos =
                af > 0.0 ? engine_->stilde_capped(bcoef / af, s_max) : -1;
            if (s_pos < 0) continue;
            const double scale = static_cast<double>(f - 1) * inv_sig2;
            const std::int64_t df = f - 1;
            double acc = 0.0;
            for (std::int64_t s = 0; s <= s_pos; ++s) {
                const double y = af * engine_->expn_at(s) - bcoef;
                const double g = chisq_cdf_fast(y * scale, df);
                if (g < 1e-15) break; // g decreases with s; the rest is negligible
                acc += nb[static_cast<std::size_t>(s)] * g;
            }
            row[static_cast<std::size_t>(f)] = acc;
        }
    }
    return K;
}

double UnknownSigmaEvaluator::power_with_matrix(const std::vector<double>& K,
                                                double phi_a, double phi_f) const {
    const std::int64_t n_p = engine_->n_p();
    const std::int64_t r = 2 * n_p;
    const std::vector<double> pa = detail::binom_pmf_table(n_p, phi_a);
    const std::vector<double> pf = detail::binom_pmf_table(r, phi_f);
    double total = 0.0;
    for (std::int64_t a = 1; a <= n_p; ++a) {
        const double wa = pa[static_cast<std::size_t>(a)];
        if (wa == 0.0) continue;
        const double* row =
            K.data() + static_cast<std::size_t>(a) * static_cast<std::size_t>(r + 1);
        double inner = 0.0;
        for (std::int64_t f = 2; f <= r; ++f)
            inner += pf[static_cast<std::size_t>(f)] * row[static_cast<std::size_t>(f)];
        total += wa * inner;
    }
    return total;
}

double UnknownSigmaEvaluator::power(double c, const Rates& rates) const {
    const double sigma = rates.sigma.value_or(engine_->design().sigma0);
    if (c < 0.0 || c == 0.0) {
        // x(phi-hat, sigma-hat) > c needs only f >= 2 (variance defined) for
        // c < 0, plus a >= 1 for c = 0 (x > 0 requires adherence mass).
        const std::int64_t r = 2 * engine_->n_p();
        const double pf_ge2 =
            1.0 - stats::binomial_cdf(1, r, rates.phi_f);
        if (c < 0.0) return pf_ge2;
        const double pa_ge1 = 1.0 - stats::binomial_cdf(0, engine_->n_p(), rates.phi_a);
        return pa_ge1 * pf_ge2;
    }
    const std::vector<double> K = class_matrix(c, rates.phi_r, sigma);
    return power_with_matrix(K, rates.phi_a, rates.phi_f);
}

Probability pilot_power_unknown_sigma(const DefinitiveDesign& design,
                                      const PilotDesign& pilot, const Rates& rates,
                                      const VarianceConfig& cfg) {
    validate(design);
    validate(pilot);
    validate(rates);
    validate(cfg);
    if (pilot.correlation_mode != CorrelationMode::independent)
        throw domain_error(
            "pilot_power_unknown_sigma: only the independent correlation mode is supported");
    if (!(design.mu > 0.0))
        throw domain_error("pilot_power_unknown_sigma: the one-sided go rule assumes mu > 0");
    if (!(rates.phi_r > 0.0))
        throw domain_error("pilot_power_unknown_sigma: phi_r must be positive");
    const PowerEngine engine(design, pilot.n_p, std::min(0.005, rates.phi_r));
    const UnknownSigmaEvaluator eval(engine, cfg);
    return Probability(eval.power(pilot.c, rates));
}

} // namespace pilotfeas
