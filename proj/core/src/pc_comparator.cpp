#include "pilotfeas/pc_comparator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "pilotfeas/errors.hpp"
#include "pilotfeas/parallel.hpp"
#include "pilotfeas/pilot_test.hpp"
#include "grid_internal.hpp"

namespace pilotfeas {

namespace {

constexpr double kGridStep = 0.005;

// Smallest integer strictly greater than v. Near-integer v (to relative 1e-9)
// is treated as exactly attainable, so the strict inequality excludes it.
std::int64_t strict_min_count(double v) {
    const double vr = std::round(v);
    if (std::abs(v - vr) < 1e-9 * std::max(1.0, std::abs(vr)))
        return static_cast<std::int64_t>(std::llround(vr)) + 1;
    return static_cast<std::int64_t>(std::ceil(v));
}

// Largest integer strictly less than v, with the same near-integer treatment.
std::int64_t largest_below(double v) {
    const double vr = std::round(v);
    if (std::abs(v - vr) < 1e-9 * std::max(1.0, std::abs(vr)))
        return static_cast<std::int64_t>(std::llround(vr)) - 1;
    return static_cast<std::int64_t>(std::floor(v));
}

// Pass iff s non-consenting screens keep 2n_p/(2n_p+s) strictly above c_r;
// -1 means the rule can never pass on recruitment, INT64_MAX means always.
std::int64_t pass_screen_limit(std::int64_t r, double c_r) {
    if (c_r == 0.0) return std::numeric_limits<std::int64_t>::max();
    const double bound = static_cast<double>(r) * (1.0 - c_r) / c_r;
    return largest_below(bound);
}

struct FlatCandidates {
    std::vector<detail::GridClass> classes;
    std::vector<std::size_t> cls_of_pt; // class index per flattened point
    std::vector<double> ta;             // [pt * (n_p+1) + a_min], Pr[A >= a_min]
    std::vector<double> tf;             // [pt * (r+1) + f_min],  Pr[F >= f_min]
    std::size_t n_pts = 0;
};

// Flatten a candidate grid and precompute, for every point, the full suffix
// tails of the adherence and follow-up binomials so any (a_min, f_min) pair is
// a table lookup.
FlatCandidates flatten(const std::vector<detail::GridClass>& classes,
                       std::int64_t n_p) {
    const std::int64_t r = 2 * n_p;
    FlatCandidates fc;
    fc.classes = classes;
    for (std::size_t ci = 0; ci < classes.size(); ++ci)
        for (std::size_t j = 0; j < classes[ci].cols.size(); ++j)
            fc.cls_of_pt.push_back(ci);
    fc.n_pts = fc.cls_of_pt.size();
    fc.ta.assign(fc.n_pts * static_cast<std::size_t>(n_p + 1), 0.0);
    fc.tf.assign(fc.n_pts * static_cast<std::size_t>(r + 1), 0.0);
    std::size_t pt = 0;
    for (const auto& cls : classes) {
        for (const auto& col : cls.cols) {
            const auto pa = detail::binom_pmf_table(n_p, col.phi_a);
            const auto pf = detail::binom_pmf_table(r, col.phi_f);
            double acc = 0.0;
            for (std::int64_t k = n_p; k >= 1; --k) {
                acc += pa[static_cast<std::size_t>(k)];
                fc.ta[pt * static_cast<std::size_t>(n_p + 1) +
                      static_cast<std::size_t>(k)] = std::min(acc, 1.0);
            }
            acc = 0.0;
            for (std::int64_t k = r; k >= 1; --k) {
                acc += pf[static_cast<std::size_t>(k)];
                fc.tf[pt * static_cast<std::size_t>(r + 1) +
                      static_cast<std::size_t>(k)] = std::min(acc, 1.0);
            }
            ++pt;
        }
    }
    return fc;
}

struct RuleId {
    std::int64_t a_min;
    std::int64_t f_min;
    std::int64_t s_pass; // -2 encodes the always-pass recruitment rule
};

using ParetoMap = std::map<double, std::pair<double, RuleId>>;

void check_known_sigma(const HypothesisPair& h, const char* op) {
    if (h.sigma_floor)
        throw domain_error(std::string(op) +
                           ": threshold comparator requires known variance "
                           "(hypotheses must not carry a sigma floor)");
}

} // namespace

void validate(const ThresholdTriple& t) {
    auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    if (!in_unit(t.c_f) || !in_unit(t.c_a) || !in_unit(t.c_r))
        throw invalid_parametrization_error(
            "ThresholdTriple: c_f, c_a, c_r must lie in [0, 1]");
}

Probability go_probability(const DefinitiveDesign& design, std::int64_t n_p,
                           const ThresholdTriple& thresholds, const Rates& rates) {
    validate(design);
    validate(rates);
    validate(thresholds);
    if (n_p < 1) throw domain_error("go_probability: n_p must be positive");
    if (rates.phi_or != 1.0)
        throw domain_error(
            "go_probability: threshold rule requires independent follow-up and "
            "adherence (phi_or == 1)");
    if (rates.sigma)
        throw domain_error(
            "go_probability: threshold rule ignores the endpoint variance; a sigma "
            "override is a caller error");
    const std::int64_t r = 2 * n_p;

    double f_r;
    const std::int64_t sp = pass_screen_limit(r, thresholds.c_r);
    if (sp == std::numeric_limits<std::int64_t>::max()) {
        f_r = 1.0;
    } else if (sp < 0) {
        f_r = 0.0;
    } else {
        f_r = stats::neg_binomial_cdf(sp, r, rates.phi_r);
    }

    const std::int64_t f_min = strict_min_count(static_cast<double>(r) * thresholds.c_f);
    const std::int64_t a_min = strict_min_count(static_cast<double>(n_p) * thresholds.c_a);
    const double f_f = f_min > r ? 0.0 : 1.0 - stats::binomial_cdf(f_min - 1, r, rates.phi_f);
    const double f_a =
        a_min > n_p ? 0.0 : 1.0 - stats::binomial_cdf(a_min - 1, n_p, rates.phi_a);

    return Probability(f_r * f_f * f_a);
}

PcErrorRates pc_error_rates(const DefinitiveDesign& design, const HypothesisPair& h,
                            std::int64_t n_p, const ThresholdTriple& thresholds) {
    validate(design);
    validate(thresholds);
    check_known_sigma(h, "pc_error_rates");
    if (n_p < 1) throw domain_error("pc_error_rates: n_p must be positive");

    const auto nulls = detail::boundary_candidates(h, design, kGridStep,
                                                   Membership::null);
    const auto alts = detail::boundary_candidates(h, design, kGridStep,
                                                  Membership::alternative);
    if (nulls.empty() || alts.empty())
        throw infeasible_hypotheses_error(
            "pc_error_rates: a hypothesis boundary is empty for this design");

    PcErrorRates out;
    out.thresholds = thresholds;

    double best_alpha = -1.0;
    for (const auto& cls : nulls) {
        for (const auto& col : cls.cols) {
            Rates pt{cls.phi_r, col.phi_f, col.phi_a, 1.0, std::nullopt};
            const double g = go_probability(design, n_p, thresholds, pt);
            if (g > best_alpha) {
                best_alpha = g;
                out.phi0_witness = pt;
            }
        }
    }
    double worst_go = 2.0;
    for (const auto& cls : alts) {
        for (const auto& col : cls.cols) {
            Rates pt{cls.phi_r, col.phi_f, col.phi_a, 1.0, std::nullopt};
            const double g = go_probability(design, n_p, thresholds, pt);
            if (g < worst_go) {
                worst_go = g;
                out.phi1_witness = pt;
            }
        }
    }
    out.alpha = Probability(best_alpha);
    out.beta = Probability(1.0 - worst_go);
    return out;
}

std::vector<PcFrontierPoint> pc_frontier(const DefinitiveDesign& design,
                                         const HypothesisPair& h, std::int64_t n_p) {
    validate(design);
    check_known_sigma(h, "pc_frontier");
    if (n_p < 1) throw domain_error("pc_frontier: n_p must be positive");

    const auto nulls = detail::boundary_candidates(h, design, kGridStep,
                                                   Membership::null);
    const auto alts = detail::boundary_candidates(h, design, kGridStep,
                                                  Membership::alternative);
    if (nulls.empty() || alts.empty())
        throw infeasible_hypotheses_error(
            "pc_frontier: a hypothesis boundary is empty for this design");

    const std::int64_t r = 2 * n_p;
    const FlatCandidates fn = flatten(nulls, n_p);
    const FlatCandidates fa = flatten(alts, n_p);

    // Recruitment lattice: one cut between every pair of adjacent achievable
    // rates 2n_p/(2n_p+s), up to the 0.999 screen quantile at the weakest
    // boundary recruitment rate, plus the always-pass rule.
    const double min_phi_r = std::min(nulls.front().phi_r, alts.front().phi_r);
    const std::int64_t s_ub = stats::neg_binomial_quantile(0.999, r, min_phi_r);
    const std::size_t n_s = static_cast<std::size_t>(s_ub);

    auto nb_rows = [&](const FlatCandidates& fc) {
        std::vector<std::vector<double>> rows(fc.classes.size());
        for (std::size_t ci = 0; ci < fc.classes.size(); ++ci) {
            auto row = detail::nb_pmf_table(r, fc.classes[ci].phi_r,
                                            std::max<std::int64_t>(s_ub - 1, 0));
            detail::pmf_to_cdf(row);
            rows[ci] = std::move(row);
        }
        return rows;
    };
    const auto null_nb = nb_rows(fn);
    const auto alt_nb = nb_rows(fa);

    // One partial frontier per a_min, merged afterwards in lattice order so the
    // result is independent of how the outer loop is scheduled.
    std::vector<ParetoMap> partial(static_cast<std::size_t>(n_p));
    parallel_for(static_cast<std::size_t>(n_p), [&](std::size_t ai) {
        const std::int64_t a_min = static_cast<std::int64_t>(ai) + 1;
        ParetoMap& local = partial[ai];
        std::vector<double> w_max(fn.classes.size());
        std::vector<double> w_min(fa.classes.size());
        std::vector<double> acc(n_s);
        std::vector<double> bcc(n_s);
        for (std::int64_t f_min = 1; f_min <= r; ++f_min) {
            for (std::size_t ci = 0; ci < fn.classes.size(); ++ci) w_max[ci] = 0.0;
            for (std::size_t ci = 0; ci < fa.classes.size(); ++ci) w_min[ci] = 2.0;
            for (std::size_t pt = 0; pt < fn.n_pts; ++pt) {
                const double w =
                    fn.ta[pt * static_cast<std::size_t>(n_p + 1) +
                          static_cast<std::size_t>(a_min)] *
                    fn.tf[pt * static_cast<std::size_t>(r + 1) +
                          static_cast<std::size_t>(f_min)];
                if (w > w_max[fn.cls_of_pt[pt]]) w_max[fn.cls_of_pt[pt]] = w;
            }
            for (std::size_t pt = 0; pt < fa.n_pts; ++pt) {
                const double w =
                    fa.ta[pt * static_cast<std::size_t>(n_p + 1) +
                          static_cast<std::size_t>(a_min)] *
                    fa.tf[pt * static_cast<std::size_t>(r + 1) +
                          static_cast<std::size_t>(f_min)];
                if (w < w_min[fa.cls_of_pt[pt]]) w_min[fa.cls_of_pt[pt]] = w;
            }

            double alpha_always = 0.0;
            for (const double w : w_max) alpha_always = std::max(alpha_always, w);
            double go_always = 2.0;
            for (const double w : w_min) go_always = std::min(go_always, w);

            std::fill(acc.begin(), acc.end(), 0.0);
            std::fill(bcc.begin(), bcc.end(), 2.0);
            for (std::size_t ci = 0; ci < fn.classes.size(); ++ci) {
                const double w = w_max[ci];
                const auto& row = null_nb[ci];
                for (std::size_t s = 0; s < n_s; ++s)
                    acc[s] = std::max(acc[s], w * row[s]);
            }
            for (std::size_t ci = 0; ci < fa.classes.size(); ++ci) {
                const double w = w_min[ci];
                const auto& row = alt_nb[ci];
                for (std::size_t s = 0; s < n_s; ++s)
                    bcc[s] = std::min(bcc[s], w * row[s]);
            }

            detail::pareto_insert(local, alpha_always, 1.0 - go_always,
                                  RuleId{a_min, f_min, -2});
            for (std::size_t s = 0; s < n_s; ++s)
                detail::pareto_insert(local, acc[s], 1.0 - bcc[s],
                                      RuleId{a_min, f_min,
                                             static_cast<std::int64_t>(s)});
        }
    });

    ParetoMap merged;
    for (const auto& local : partial)
        for (const auto& [alpha, entry] : local)
            detail::pareto_insert(merged, alpha, entry.first, entry.second);

    std::vector<PcFrontierPoint> out;
    out.reserve(merged.size());
    for (const auto& [alpha, entry] : merged) {
        const RuleId& rule = entry.second;
        PcFrontierPoint p;
        p.thresholds.c_a = (static_cast<double>(rule.a_min) - 0.5) /
                           static_cast<double>(n_p);
        p.thresholds.c_f = (static_cast<double>(rule.f_min) - 0.5) /
                           static_cast<double>(r);
        if (rule.s_pass == -2) {
            p.thresholds.c_r = 0.0;
        } else {
            const double s = static_cast<double>(rule.s_pass);
            p.thresholds.c_r = 0.5 * static_cast<double>(r) *
                               (1.0 / (static_cast<double>(r) + s) +
                                1.0 / (static_cast<double>(r) + s + 1.0));
        }
        p.alpha = Probability(alpha);
        p.beta = Probability(entry.first);
        out.push_back(p);
    }
    return out;
}

} // namespace pilotfeas
