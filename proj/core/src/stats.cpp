#include "pilotfeas/stats.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pilotfeas {

Probability::Probability(double v) : v_(v) {
    if (!(v_ >= 0.0 && v_ <= 1.0)) {
        if (v_ > 1.0 && v_ - 1.0 < 1e-12) {
            v_ = 1.0;
        } else if (v_ < 0.0 && v_ > -1e-12) {
            v_ = 0.0;
        } else {
            throw domain_error("probability outside [0,1]: " + std::to_string(v));
        }
    }
}

namespace stats {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;

// Lanczos approximation, g = 7, 9 coefficients; relative error ~1e-15 for x > 0.
double lanczos_log_gamma(double x) {
    static const double coef[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    if (x < 0.5) {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::log(M_PI / std::sin(M_PI * x)) - lanczos_log_gamma(1.0 - x);
    }
    x -= 1.0;
    double a = coef[0];
    double t = x + 7.5;
    for (int i = 1; i < 9; ++i) {
        a += coef[i] / (x + static_cast<double>(i));
    }
    return 0.5 * std::log(2.0 * M_PI) + (x + 0.5) * std::log(t) - t + std::log(a);
}

double clamp01(double v) {
    if (v < 0.0) return 0.0;
    if (v > 1.0) return 1.0;
    return v;
}

double log_pmf_binomial(std::int64_t k, std::int64_t n, double p) {
    // caller guarantees 0 < p < 1 and 0 <= k <= n
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    return log_binomial_coef(n, k) + kd * std::log(p) + (nd - kd) * std::log1p(-p);
}

// Series expansion of P(a, x), valid and fast for x < a + 1.
double gamma_p_series(double a, double x) {
    double sum = 1.0 / a;
    double term = sum;
    double ap = a;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Lentz continued fraction for Q(a, x), stable for x >= a + 1.
double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - log_gamma(a));
}

} // namespace

Probability std_normal_cdf(double z) {
    if (!std::isfinite(z)) {
        throw domain_error("std_normal_cdf: non-finite argument");
    }
    return Probability(0.5 * std::erfc(-z / kSqrt2));
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw domain_error("std_normal_quantile: p must lie strictly inside (0,1)");
    }
    // Wichura's AS 241 (PPND16): relative accuracy ~1e-16 across the full range.
    const double q = p - 0.5;
    double r;
    if (std::fabs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                     67265.770927008700853) * r + 45921.953931549871457) * r +
                   13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((5226.495278852545703 * r + 28729.085735721942674) * r +
                     39307.89580009271061) * r + 21213.794301586595867) * r +
                   5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }
    r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double v;
    if (r <= 5.0) {
        r -= 1.6;
        v = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                  0.24178072517745061177) * r + 1.27045825245236838258) * r +
                3.64784832476320460504) * r + 5.7694972214606914055) * r +
              4.6303378461565452959) * r + 1.42343711074968357734) /
            (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                  0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                0.68976733498510000455) * r + 1.6763848301838038494) * r +
              2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        v = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                0.29656057182850489123) * r + 1.7848265399172913358) * r +
              5.4637849111641143699) * r + 6.6579046435011037772) /
            (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                  1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                0.0148753612908506148525) * r + 0.13692988092273580531) * r +
              0.59983220655588793769) * r + 1.0);
    }
    return (q < 0.0) ? -v : v;
}

double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw domain_error("log_gamma: argument must be positive");
    }
    return lanczos_log_gamma(x);
}

double log_binomial_coef(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) {
        throw domain_error("log_binomial_coef: need 0 <= k <= n");
    }
    if (k == 0 || k == n) return 0.0;
    return log_gamma(static_cast<double>(n) + 1.0) -
           log_gamma(static_cast<double>(k) + 1.0) -
           log_gamma(static_cast<double>(n - k) + 1.0);
}

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) {
        throw domain_error("regularized_gamma_p: need a > 0, x >= 0");
    }
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) {
        return clamp01(gamma_p_series(a, x));
    }
    return clamp01(1.0 - gamma_q_contfrac(a, x));
}

Probability binomial_pmf(std::int64_t k, std::int64_t n, double p) {
    if (k < 0 || n < 0 || k > n) {
        throw domain_error("binomial_pmf: need 0 <= k <= n");
    }
    Probability pp(p);
    if (pp == 0.0) return Probability(k == 0 ? 1.0 : 0.0);
    if (pp == 1.0) return Probability(k == n ? 1.0 : 0.0);
    return Probability(clamp01(std::exp(log_pmf_binomial(k, n, pp))));
}

Probability binomial_cdf(std::int64_t k, std::int64_t n, double p) {
    if (k < 0 || n < 0 || k > n) {
        throw domain_error("binomial_cdf: need 0 <= k <= n");
    }
    Probability pp(p);
    if (k == n || pp == 0.0) return Probability(1.0);
    if (pp == 1.0) return Probability(0.0);
    // Sum the smaller tail in log-space pmf terms; both tails are exact sums of
    // positive numbers, so accuracy is limited only by the pmf terms themselves.
    const double mean = static_cast<double>(n) * pp;
    if (static_cast<double>(k) <= mean) {
        double sum = 0.0;
        for (std::int64_t i = 0; i <= k; ++i) {
            sum += std::exp(log_pmf_binomial(i, n, pp));
        }
        return Probability(clamp01(sum));
    }
    double tail = 0.0;
    for (std::int64_t i = k + 1; i <= n; ++i) {
        tail += std::exp(log_pmf_binomial(i, n, pp));
    }
    return Probability(clamp01(1.0 - tail));
}

Probability neg_binomial_cdf(std::int64_t s, std::int64_t r, double p) {
    if (r <= 0) {
        throw domain_error("neg_binomial_cdf: r must be >= 1");
    }
    if (s < 0) return Probability(0.0);
    Probability pp(p);
    if (pp == 0.0) return Probability(0.0);
    if (pp == 1.0) return Probability(1.0);
    // Pr[S <= s] = Pr[Bin(r+s, p) >= r]
    return Probability(clamp01(1.0 - binomial_cdf(r - 1, r + s, pp)));
}

std::int64_t neg_binomial_quantile(double q, std::int64_t r, double p) {
    if (!(q > 0.0 && q < 1.0)) {
        throw domain_error("neg_binomial_quantile: q must lie strictly inside (0,1)");
    }
    if (r <= 0) {
        throw domain_error("neg_binomial_quantile: r must be >= 1");
    }
    Probability pp(p);
    if (pp == 1.0) return 0;
    if (pp == 0.0) {
        throw domain_error("neg_binomial_quantile: p = 0 has no finite quantile");
    }
    std::int64_t lo = 0;
    std::int64_t hi = 1;
    while (neg_binomial_cdf(hi, r, pp) < q) {
        lo = hi + 1;
        hi *= 2;
        if (hi > (std::int64_t{1} << 40)) {
            throw numeric_guard_error("neg_binomial_quantile: search exploded");
        }
    }
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (neg_binomial_cdf(mid, r, pp) < q) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return lo;
}

Probability chisq_cdf(double x, std::int64_t df) {
    if (df <= 0) {
        throw domain_error("chisq_cdf: df must be >= 1");
    }
    if (x < 0.0) {
        throw domain_error("chisq_cdf: x must be >= 0");
    }
    if (x == 0.0) return Probability(0.0);
    return Probability(regularized_gamma_p(static_cast<double>(df) / 2.0, x / 2.0));
}

Probability multinomial_pmf(const std::array<std::int64_t, 4>& counts,
                            const std::array<double, 4>& probs) {
    double total_p = 0.0;
    std::int64_t n = 0;
    for (int i = 0; i < 4; ++i) {
        if (counts[i] < 0) {
            throw domain_error("multinomial_pmf: negative count");
        }
        Probability check(probs[i]);
        total_p += check;
        n += counts[i];
    }
    if (std::fabs(total_p - 1.0) > 1e-9) {
        throw domain_error("multinomial_pmf: probabilities must sum to 1");
    }
    double lp = log_gamma(static_cast<double>(n) + 1.0);
    for (int i = 0; i < 4; ++i) {
        if (counts[i] == 0) continue;
        if (probs[i] <= 0.0) return Probability(0.0);
        lp += static_cast<double>(counts[i]) * std::log(probs[i]) -
              log_gamma(static_cast<double>(counts[i]) + 1.0);
    }
    return Probability(clamp01(std::exp(lp)));
}

} // namespace stats
} // namespace pilotfeas
