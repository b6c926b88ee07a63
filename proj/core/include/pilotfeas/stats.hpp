#pragma once

#include <array>
#include <cstdint>

#include "pilotfeas/errors.hpp"

namespace pilotfeas {

// Probability-valued quantity. Construction clamps excursions outside [0,1] of
// magnitude < 1e-12 (kernel rounding noise) and rejects anything larger.
class Probability {
public:
    explicit Probability(double v);
    operator double() const noexcept { return v_; }
    double value() const noexcept { return v_; }

private:
    double v_;
};

namespace stats {

// Phi(z), absolute error <= 1e-12; saturates to 0/1 in the far tails.
Probability std_normal_cdf(double z);

// Phi^-1(p) for p in (0,1); |std_normal_cdf(result) - p| <= 1e-10.
double std_normal_quantile(double p);

// log Gamma(x) for x > 0; self-contained (no global state, safe under concurrency).
double log_gamma(double x);

// log C(n, k) for 0 <= k <= n.
double log_binomial_coef(std::int64_t n, std::int64_t k);

// Regularized lower incomplete gamma P(a, x); series for x < a+1, continued
// fraction otherwise.
double regularized_gamma_p(double a, double x);

Probability binomial_pmf(std::int64_t k, std::int64_t n, double p);
Probability binomial_cdf(std::int64_t k, std::int64_t n, double p);

// Pr[S <= s] where S counts failures before the r-th success, success probability p.
// Matches the binomial tail identity Pr[Bin(r+s, p) >= r].
Probability neg_binomial_cdf(std::int64_t s, std::int64_t r, double p);

// Smallest s with neg_binomial_cdf(s, r, p) >= q, for q in (0,1).
std::int64_t neg_binomial_quantile(double q, std::int64_t r, double p);

// Chi-squared CDF with df >= 1 degrees of freedom; absolute error <= 1e-10.
Probability chisq_cdf(double x, std::int64_t df);

// Multinomial pmf over 4 categories; probs must sum to 1 within 1e-9.
Probability multinomial_pmf(const std::array<std::int64_t, 4>& counts,
                            const std::array<double, 4>& probs);

} // namespace stats
} // namespace pilotfeas
