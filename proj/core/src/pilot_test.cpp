#include "pilotfeas/pilot_test.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pilotfeas/errors.hpp"

namespace pilotfeas {

namespace {

constexpr double kTailMass = 1e-12;

// Negative-binomial truncation point covering all but ~1e-12 of the mass of
// NB(r, p), via a normal tail bound with cushion (over-covering is harmless).
std::int64_t nb_tail_cap(std::int64_t r, double p) {
    if (p >= 1.0) return 20;
    const double q = 1.0 - p;
    const double mean = static_cast<double>(r) * q / p;
    const double sd = std::sqrt(static_cast<double>(r) * q) / p;
    return static_cast<std::int64_t>(std::ceil(mean + 8.0 * sd)) + 20;
}

// E[min(C, n_t)] with C ~ Bin(n_e, p), matching expected_recruited to within
// ~1e-12 absolute but skipping work far from the binomial bulk. Used only to
// build the engine accrual table, where the call count is large.
double expected_recruited_fast(const DefinitiveDesign& d, double p) {
    const auto n_t = d.n_t;
    const auto n_e = d.n_e;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return static_cast<double>(n_t);
    const double mean = static_cast<double>(n_e) * p;
    const double sd = std::sqrt(static_cast<double>(n_e) * p * (1.0 - p));
    if (mean - 10.0 * sd > static_cast<double>(n_t)) return static_cast<double>(n_t);

    const double log_q = std::log1p(-p);
    if (static_cast<double>(n_e) * log_q <= -700.0) {
        // Anchor at k = 0 would underflow; this only happens near the bulk
        // boundary, where the plain summation is cheap enough.
        return expected_recruited(d, p);
    }
    double pmf = std::exp(static_cast<double>(n_e) * log_q);
    double below = 0.0;
    double cdf = pmf;
    for (std::int64_t k = 1; k < n_t; ++k) {
        pmf *= (static_cast<double>(n_e - k + 1) * p) / (static_cast<double>(k) * (1.0 - p));
        below += static_cast<double>(k) * pmf;
        cdf += pmf;
        if (pmf < 1e-20 && static_cast<double>(k) > mean) break;
    }
    const double tail = std::max(0.0, 1.0 - cdf);
    return below + static_cast<double>(n_t) * tail;
}

} // namespace

namespace detail {

std::vector<double> binom_pmf_table(std::int64_t n, double p) {
    if (n < 0) throw domain_error("binom_pmf_table: n must be non-negative");
    std::vector<double> t(static_cast<std::size_t>(n) + 1, 0.0);
    if (p <= 0.0) {
        t[0] = 1.0;
        return t;
    }
    if (p >= 1.0) {
        t[static_cast<std::size_t>(n)] = 1.0;
        return t;
    }
    std::int64_t mode = static_cast<std::int64_t>(std::floor(static_cast<double>(n + 1) * p));
    mode = std::clamp<std::int64_t>(mode, 0, n);
    t[static_cast<std::size_t>(mode)] = stats::binomial_pmf(mode, n, p);
    const double q = 1.0 - p;
    for (std::int64_t k = mode; k >= 1; --k) {
        t[static_cast<std::size_t>(k - 1)] =
            t[static_cast<std::size_t>(k)] * (static_cast<double>(k) * q) /
            (static_cast<double>(n - k + 1) * p);
    }
    for (std::int64_t k = mode; k < n; ++k) {
        t[static_cast<std::size_t>(k + 1)] =
            t[static_cast<std::size_t>(k)] * (static_cast<double>(n - k) * p) /
            (static_cast<double>(k + 1) * q);
    }
    return t;
}

std::vector<double> nb_pmf_table(std::int64_t r, double p, std::int64_t cap) {
    if (r <= 0) throw domain_error("nb_pmf_table: r must be positive");
    if (cap < 0) throw domain_error("nb_pmf_table: cap must be non-negative");
    if (!(p > 0.0 && p <= 1.0)) throw domain_error("nb_pmf_table: p must be in (0,1]");
    std::vector<double> t(static_cast<std::size_t>(cap) + 1, 0.0);
    if (p >= 1.0) {
        t[0] = 1.0;
        return t;
    }
    const double q = 1.0 - p;
    std::int64_t mode = 0;
    if (r > 1) {
        mode = static_cast<std::int64_t>(std::floor(static_cast<double>(r - 1) * q / p));
        mode = std::clamp<std::int64_t>(mode, 0, cap);
    }
    const double log_mode = stats::log_gamma(static_cast<double>(r + mode)) -
                            stats::log_gamma(static_cast<double>(mode) + 1.0) -
                            stats::log_gamma(static_cast<double>(r)) +
                            static_cast<double>(r) * std::log(p) +
                            static_cast<double>(mode) * std::log1p(-p);
    t[static_cast<std::size_t>(mode)] = std::exp(log_mode);
    for (std::int64_t s = mode; s >= 1; --s) {
        t[static_cast<std::size_t>(s - 1)] =
            t[static_cast<std::size_t>(s)] * static_cast<double>(s) /
            ((static_cast<double>(r) + static_cast<double>(s) - 1.0) * q);
    }
    for (std::int64_t s = mode; s < cap; ++s) {
        t[static_cast<std::size_t>(s + 1)] =
            t[static_cast<std::size_t>(s)] *
            ((static_cast<double>(r) + static_cast<double>(s)) * q) /
            (static_cast<double>(s) + 1.0);
    }
    return t;
}

void pmf_to_cdf(std::vector<double>& table) {
    double run = 0.0;
    for (double& v : table) {
        run += v;
        v = std::min(run, 1.0);
    }
}

} // namespace detail

void validate(const PilotDesign& pilot) {
    if (pilot.n_p <= 0) throw domain_error("pilot design: n_p must be positive");
    if (!std::isfinite(pilot.c)) throw domain_error("pilot design: c must be finite");
}

void validate(const PilotOutcome& outcome, const PilotDesign& pilot) {
    validate(pilot);
    if (outcome.s < 0) throw domain_error("pilot outcome: s must be non-negative");
    if (outcome.f0 < 0 || outcome.f0 > pilot.n_p)
        throw domain_error("pilot outcome: f0 must lie in [0, n_p]");
    if (outcome.n11 < 0 || outcome.n01 < 0 || outcome.n00 < 0 || outcome.n10 < 0)
        throw domain_error("pilot outcome: cell counts must be non-negative");
    if (outcome.n11 + outcome.n01 + outcome.n00 + outcome.n10 != pilot.n_p)
        throw domain_error("pilot outcome: intervention cells must sum to n_p");
}

PilotEstimates estimates(const PilotOutcome& outcome, const PilotDesign& pilot) {
    validate(outcome, pilot);
    const double two_np = 2.0 * static_cast<double>(pilot.n_p);
    PilotEstimates e;
    e.phi_r_hat = two_np / (two_np + static_cast<double>(outcome.s));
    const std::int64_t f1 = outcome.n11 + outcome.n01;
    e.phi_f_hat = static_cast<double>(outcome.f0 + f1) / two_np;
    if (pilot.adherence_estimator == AdherenceEstimator::marginal) {
        e.phi_a_hat =
            static_cast<double>(outcome.n11 + outcome.n10) / static_cast<double>(pilot.n_p);
    } else {
        e.phi_a_hat = f1 > 0 ? static_cast<double>(outcome.n11) / static_cast<double>(f1) : 0.0;
    }
    return e;
}

double required_sample(const DefinitiveDesign& design, double phi_f_hat,
                       double phi_a_hat, double c) {
    validate(design);
    if (!(c > 0.0)) throw domain_error("required_sample: c must be positive");
    if (!(phi_f_hat >= 0.0 && phi_f_hat <= 1.0))
        throw domain_error("required_sample: phi_f_hat must lie in [0,1]");
    if (!(phi_a_hat >= 0.0 && phi_a_hat <= 1.0))
        throw domain_error("required_sample: phi_a_hat must lie in [0,1]");
    if (phi_a_hat * phi_f_hat == 0.0) return std::numeric_limits<double>::infinity();
    const double mu2 = design.mu * design.mu;
    const double var_term =
        4.0 * design.sigma0 * design.sigma0 + 2.0 * mu2 * phi_a_hat * (1.0 - phi_a_hat);
    return c * c * var_term / (mu2 * phi_a_hat * phi_a_hat * phi_f_hat);
}

std::optional<std::int64_t> s_tilde(const DefinitiveDesign& design, std::int64_t n_p,
                                    double n_tilde, std::optional<std::int64_t> s_cap) {
    validate(design);
    if (n_p <= 0) throw domain_error("s_tilde: n_p must be positive");
    if (std::isnan(n_tilde)) throw domain_error("s_tilde: n_tilde must not be NaN");
    const std::int64_t r = 2 * n_p;
    const std::int64_t cap =
        s_cap ? *s_cap : stats::neg_binomial_quantile(1.0 - kTailMass, r, 0.005);
    if (cap < 0) throw domain_error("s_tilde: s_cap must be non-negative");
    const auto exceeds = [&](std::int64_t s) {
        const double p_hat =
            static_cast<double>(r) / (static_cast<double>(r) + static_cast<double>(s));
        return expected_recruited(design, p_hat) > n_tilde;
    };
    if (!exceeds(0)) return std::nullopt;
    if (exceeds(cap)) return cap;
    std::int64_t lo = 0, hi = cap; // exceeds(lo), !exceeds(hi)
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (exceeds(mid) ? lo : hi) = mid;
    }
    return lo;
}

PowerEngine::PowerEngine(const DefinitiveDesign& design, std::int64_t n_p,
                         double min_phi_r)
    : design_(design), n_p_(n_p) {
    validate(design_);
    if (n_p_ <= 0) throw domain_error("power engine: n_p must be positive");
    if (!(min_phi_r > 0.0 && min_phi_r <= 1.0))
        throw domain_error("power engine: min_phi_r must lie in (0,1]");
    const std::int64_t r = 2 * n_p_;
    const std::int64_t cap = nb_tail_cap(r, min_phi_r);
    expn_.resize(static_cast<std::size_t>(cap) + 1);
    for (std::int64_t s = 0; s <= cap; ++s) {
        const double p_hat =
            static_cast<double>(r) / (static_cast<double>(r) + static_cast<double>(s));
        expn_[static_cast<std::size_t>(s)] = expected_recruited_fast(design_, p_hat);
    }
}

std::int64_t PowerEngine::stilde_capped(double n_tilde, std::int64_t cap) const {
    // expn_ is non-increasing in s, so the predicate expn_[s] > n_tilde flips
    // exactly once; find the last index where it still holds.
    if (!(expn_[0] > n_tilde)) return -1;
    if (expn_[static_cast<std::size_t>(cap)] > n_tilde) return cap;
    std::int64_t lo = 0, hi = cap;
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (expn_[static_cast<std::size_t>(mid)] > n_tilde ? lo : hi) = mid;
    }
    return lo;
}

std::int64_t PowerEngine::s_cap_for(double phi_r) const {
    const std::int64_t cap = nb_tail_cap(2 * n_p_, phi_r);
    if (cap > expn_cap())
        throw numeric_guard_error(
            "power engine: phi_r below the minimum the accrual table was built for");
    return cap;
}

double PowerEngine::independent_power(double c, const Rates& rates) const {
    if (c < 0.0) return 1.0;
    const std::int64_t r = 2 * n_p_;
    const std::int64_t cap = s_cap_for(rates.phi_r);
    std::vector<double> nb = detail::nb_pmf_table(r, rates.phi_r, cap);
    detail::pmf_to_cdf(nb);
    const std::vector<double> pa = detail::binom_pmf_table(n_p_, rates.phi_a);
    const std::vector<double> pf = detail::binom_pmf_table(r, rates.phi_f);
    const double sigma = rates.sigma.value_or(design_.sigma0);
    const double mu2 = design_.mu * design_.mu;
    double total = 0.0;
    for (std::int64_t a = 1; a <= n_p_; ++a) {
        const double wa = pa[static_cast<std::size_t>(a)];
        if (wa == 0.0) continue;
        const double a_hat = static_cast<double>(a) / static_cast<double>(n_p_);
        const double var_term = 4.0 * sigma * sigma + 2.0 * mu2 * a_hat * (1.0 - a_hat);
        const double denom = mu2 * a_hat * a_hat;
        for (std::int64_t f = 1; f <= r; ++f) {
            const double wf = pf[static_cast<std::size_t>(f)];
            if (wf == 0.0) continue;
            if (c == 0.0) {
                total += wa * wf; // x > 0 holds for every s when a, f >= 1
                continue;
            }
            const double f_hat = static_cast<double>(f) / static_cast<double>(r);
            const double n_tilde = c * c * var_term / (denom * f_hat);
            const std::int64_t st = stilde_capped(n_tilde, cap);
            if (st >= 0) total += wa * wf * nb[static_cast<std::size_t>(st)];
        }
    }
    return total;
}

double PowerEngine::correlated_power(double c, const Rates& rates,
                                     AdherenceEstimator est) const {
    if (n_p_ > 150)
        throw numeric_guard_error(
            "correlated pilot power: n_p > 150 exceeds the enumeration guard");
    if (c < 0.0) return 1.0;
    const std::int64_t r = 2 * n_p_;
    const std::int64_t cap = s_cap_for(rates.phi_r);
    std::vector<double> nb = detail::nb_pmf_table(r, rates.phi_r, cap);
    detail::pmf_to_cdf(nb);
    const std::vector<double> pf0 = detail::binom_pmf_table(n_p_, rates.phi_f);
    const auto cells = cell_probabilities(rates);
    const double sigma = rates.sigma.value_or(design_.sigma0);
    const double mu2 = design_.mu * design_.mu;

    std::vector<double> lgfact(static_cast<std::size_t>(n_p_) + 1);
    for (std::int64_t k = 0; k <= n_p_; ++k)
        lgfact[static_cast<std::size_t>(k)] = stats::log_gamma(static_cast<double>(k) + 1.0);
    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::array<double, 4> logp{};
    for (int i = 0; i < 4; ++i) logp[i] = cells[i] > 0.0 ? std::log(cells[i]) : neg_inf;
    constexpr double kLogSkip = -45.0; // e^-45 ~ 3e-20: cell weight negligible

    double total = 0.0;
    const double base = lgfact[static_cast<std::size_t>(n_p_)];
    for (std::int64_t n11 = 0; n11 <= n_p_; ++n11) {
        if (n11 > 0 && cells[0] == 0.0) break;
        const double t1 = base - lgfact[static_cast<std::size_t>(n11)] +
                          (n11 > 0 ? static_cast<double>(n11) * logp[0] : 0.0);
        for (std::int64_t n01 = 0; n01 <= n_p_ - n11; ++n01) {
            if (n01 > 0 && cells[1] == 0.0) break;
            const double t2 = t1 - lgfact[static_cast<std::size_t>(n01)] +
                              (n01 > 0 ? static_cast<double>(n01) * logp[1] : 0.0);
            const std::int64_t f1 = n11 + n01;
            double a_hat;
            if (est == AdherenceEstimator::marginal) {
                a_hat = 0.0; // filled per n00 below (depends on n10)
            } else {
                a_hat = f1 > 0 ? static_cast<double>(n11) / static_cast<double>(f1) : 0.0;
            }
            for (std::int64_t n00 = 0; n00 <= n_p_ - n11 - n01; ++n00) {
                if (n00 > 0 && cells[2] == 0.0) break;
                const std::int64_t n10 = n_p_ - n11 - n01 - n00;
                if (n10 > 0 && cells[3] == 0.0) continue;
                const double t3 = t2 - lgfact[static_cast<std::size_t>(n00)] +
                                  (n00 > 0 ? static_cast<double>(n00) * logp[2] : 0.0) -
                                  lgfact[static_cast<std::size_t>(n10)] +
                                  (n10 > 0 ? static_cast<double>(n10) * logp[3] : 0.0);
                if (t3 < kLogSkip) continue;
                const double w = std::exp(t3);
                if (est == AdherenceEstimator::marginal)
                    a_hat = static_cast<double>(n11 + n10) / static_cast<double>(n_p_);
                if (a_hat == 0.0) continue; // x = 0: no-go for c >= 0
                const double var_term =
                    4.0 * sigma * sigma + 2.0 * mu2 * a_hat * (1.0 - a_hat);
                const double denom = mu2 * a_hat * a_hat;
                for (std::int64_t f0 = 0; f0 <= n_p_; ++f0) {
                    const double w0 = pf0[static_cast<std::size_t>(f0)];
                    if (w0 == 0.0) continue;
                    const std::int64_t f = f0 + f1;
                    if (f == 0) continue;
                    if (c == 0.0) {
                        total += w * w0;
                        continue;
                    }
                    const double f_hat = static_cast<double>(f) / static_cast<double>(r);
                    const double n_tilde = c * c * var_term / (denom * f_hat);
                    const std::int64_t st = stilde_capped(n_tilde, cap);
                    if (st >= 0) total += w * w0 * nb[static_cast<std::size_t>(st)];
                }
            }
        }
    }
    return total;
}

Probability pilot_power(const DefinitiveDesign& design, const PilotDesign& pilot,
                        const Rates& rates) {
    validate(design);
    validate(pilot);
    validate(rates);
    if (!(design.mu > 0.0))
        throw domain_error("pilot_power: the one-sided go rule assumes mu > 0");
    if (!(rates.phi_r > 0.0))
        throw domain_error("pilot_power: phi_r must be positive (screening never ends otherwise)");
    const PowerEngine engine(design, pilot.n_p, std::min(0.005, rates.phi_r));
    const double h = pilot.correlation_mode == CorrelationMode::independent
                         ? engine.independent_power(pilot.c, rates)
                         : engine.correlated_power(pilot.c, rates, pilot.adherence_estimator);
    return Probability(h);
}

Decision decide(const DefinitiveDesign& design, const PilotDesign& pilot,
                const PilotOutcome& outcome, std::optional<double> sigma_hat) {
    validate(design);
    if (sigma_hat && !(*sigma_hat > 0.0))
        throw domain_error("decide: sigma_hat must be positive");
    Decision d;
    d.estimates = estimates(outcome, pilot);
    Rates hat;
    hat.phi_r = d.estimates.phi_r_hat;
    hat.phi_f = d.estimates.phi_f_hat;
    hat.phi_a = d.estimates.phi_a_hat;
    hat.phi_or = 1.0;
    hat.sigma = sigma_hat;
    const double x = x_statistic(design, hat);
    d.go = x > pilot.c;
    d.predicted_power = definitive_power(design, hat);
    return d;
}

} // namespace pilotfeas
