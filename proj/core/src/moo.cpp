#include "pilotfeas/moo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "pilotfeas/errors.hpp"
#include "pilotfeas/parallel.hpp"
#include "pilotfeas/pilot_test.hpp"
#include "pilotfeas/variance_extension.hpp"
#include "grid_internal.hpp"

namespace pilotfeas {

namespace {

constexpr double kGridStep = 0.005;
constexpr std::int64_t kSigmaGridSize = 25;
constexpr double kSigmaGridSpan = 2.5;
constexpr double kBetaSolveTol = 1e-4;

std::vector<double> make_sigma_grid(double floor_val) {
    std::vector<double> g(static_cast<std::size_t>(kSigmaGridSize));
    const double lo = std::log(floor_val);
    const double hi = std::log(kSigmaGridSpan * floor_val);
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) /
                                 static_cast<double>(g.size() - 1));
    g.front() = floor_val;
    g.back() = kSigmaGridSpan * floor_val;
    return g;
}

enum class Side { both, alpha_only, beta_only };

struct SideBest {
    double value = 0.0; // go probability at the worst boundary point
    Rates witness;
    bool found = false;
};

// Deterministic boundary-grid certification shared by error_rates_at, the
// frontier refinement pass, the beta solver, and the p0 sweep. Candidate
// columns and per-class negative-binomial tables depend only on (design,
// hypotheses, sigma) — never on c — so they are cached at construction and
// reused across thresholds.
class Certifier {
public:
    Certifier(const PowerEngine& eng, const HypothesisPair& h) : eng_(eng), h_(h) {
        if (h_.sigma_floor) {
            usig_.emplace(eng_, VarianceConfig{*h_.sigma_floor, 0.999});
            sigmas_ = make_sigma_grid(*h_.sigma_floor);
        } else {
            sigmas_ = {eng_.design().sigma0};
        }
        for (double s : sigmas_) {
            const std::optional<double> sig =
                h_.sigma_floor ? std::optional<double>(s) : std::nullopt;
            null_sets_.push_back(detail::boundary_candidates(
                h_, eng_.design(), kGridStep, Membership::null, sig));
            alt_sets_.push_back(detail::boundary_candidates(
                h_, eng_.design(), kGridStep, Membership::alternative, sig));
        }
        if (!usig_) {
            null_nb_ = build_nb_tables(null_sets_[0]);
            alt_nb_ = build_nb_tables(alt_sets_[0]);
        }
    }

    const UnknownSigmaEvaluator* evaluator() const {
        return usig_ ? &*usig_ : nullptr;
    }

    bool null_empty() const { return all_empty(null_sets_); }
    bool alt_empty() const { return all_empty(alt_sets_); }

    void require_feasible() const {
        if (null_empty() || alt_empty())
            throw infeasible_hypotheses_error(
                "a hypothesis set is empty for this design (no rates attain the "
                "required x level)");
    }

    ErrorRatePoint at(double c, Side side = Side::both) const {
        ErrorRatePoint p;
        p.c = c;
        if (side != Side::beta_only) {
            if (null_empty())
                throw infeasible_hypotheses_error(
                    "null hypothesis set is empty for this design");
            SideBest b = worst(c, /*null_side=*/true);
            fix_witness(b, c, Membership::null);
            p.alpha = Probability(b.value);
            p.phi0_witness = b.witness;
        }
        if (side != Side::alpha_only) {
            if (alt_empty())
                throw infeasible_hypotheses_error(
                    "alternative hypothesis set is empty for this design");
            SideBest b = worst(c, /*null_side=*/false);
            fix_witness(b, c, Membership::alternative);
            p.beta = Probability(1.0 - b.value);
            p.phi1_witness = b.witness;
        }
        return p;
    }

private:
    struct NbTable {
        std::vector<double> cdf;
        std::int64_t cap = 0;
    };

    static bool all_empty(const std::vector<std::vector<detail::GridClass>>& sets) {
        for (const auto& s : sets)
            if (!s.empty()) return false;
        return true;
    }

    std::vector<NbTable> build_nb_tables(
        const std::vector<detail::GridClass>& classes) const {
        std::vector<NbTable> tables(classes.size());
        const std::int64_t r = 2 * eng_.n_p();
        for (std::size_t ci = 0; ci < classes.size(); ++ci) {
            const std::int64_t cap = eng_.s_cap_for(classes[ci].phi_r);
            auto t = detail::nb_pmf_table(r, classes[ci].phi_r, cap);
            detail::pmf_to_cdf(t);
            tables[ci] = NbTable{std::move(t), cap};
        }
        return tables;
    }

    // Worst go probability over one side's candidates: max over the null,
    // min over the alternative. Ties keep the first candidate in grid order
    // (ascending sigma, phi_r, phi_a), independent of thread count.
    SideBest worst(double c, bool null_side) const {
        SideBest best;
        best.value = null_side ? -1.0 : 2.0;
        for (std::size_t si = 0; si < sigmas_.size(); ++si) {
            const auto& classes = null_side ? null_sets_[si] : alt_sets_[si];
            if (classes.empty()) continue;
            const std::optional<double> sig =
                usig_ ? std::optional<double>(sigmas_[si]) : std::nullopt;

            struct ClassBest {
                double v = 0.0;
                std::size_t col = 0;
                bool found = false;
            };
            std::vector<ClassBest> cb(classes.size());

            if (!usig_) {
                const auto& tables = null_side ? null_nb_ : alt_nb_;
                // Cell matrix of s-tilde values, shared by every candidate at
                // this c: the required sample size depends only on the
                // estimated rates.
                std::vector<std::int64_t> s0;
                const std::int64_t n_p = eng_.n_p();
                const std::int64_t r = 2 * n_p;
                if (c > 0.0) {
                    s0.assign(static_cast<std::size_t>((n_p + 1) * (r + 1)), -1);
                    const auto& d = eng_.design();
                    const double mu2 = d.mu * d.mu;
                    const double sg = d.sigma0;
                    const std::int64_t cap_full = eng_.expn_cap();
                    for (std::int64_t a = 1; a <= n_p; ++a) {
                        const double a_hat =
                            static_cast<double>(a) / static_cast<double>(n_p);
                        const double var_term =
                            4.0 * sg * sg + 2.0 * mu2 * a_hat * (1.0 - a_hat);
                        const double denom = mu2 * a_hat * a_hat;
                        for (std::int64_t f = 1; f <= r; ++f) {
                            const double f_hat =
                                static_cast<double>(f) / static_cast<double>(r);
                            const double n_tilde = c * c * var_term / (denom * f_hat);
                            s0[static_cast<std::size_t>(a * (r + 1) + f)] =
                                eng_.stilde_capped(n_tilde, cap_full);
                        }
                    }
                }
                parallel_for(classes.size(), [&](std::size_t ci) {
                    const auto& cls = classes[ci];
                    ClassBest b;
                    b.v = null_side ? -1.0 : 2.0;
                    for (std::size_t j = 0; j < cls.cols.size(); ++j) {
                        const auto& col = cls.cols[j];
                        double v;
                        if (c <= 0.0) {
                            v = eng_.independent_power(
                                c, Rates{cls.phi_r, col.phi_f, col.phi_a, 1.0,
                                         std::nullopt});
                        } else {
                            const auto pa = detail::binom_pmf_table(n_p, col.phi_a);
                            const auto pf = detail::binom_pmf_table(r, col.phi_f);
                            const auto& nb = tables[ci];
                            double acc = 0.0;
                            for (std::int64_t a = 1; a <= n_p; ++a) {
                                const double wa = pa[static_cast<std::size_t>(a)];
                                if (wa == 0.0) continue;
                                const std::size_t base =
                                    static_cast<std::size_t>(a * (r + 1));
                                double row = 0.0;
                                for (std::int64_t f = 1; f <= r; ++f) {
                                    const double wf = pf[static_cast<std::size_t>(f)];
                                    if (wf == 0.0) continue;
                                    const std::int64_t st = s0[base + static_cast<std::size_t>(f)];
                                    if (st < 0) continue;
                                    row += wf * nb.cdf[static_cast<std::size_t>(
                                                    std::min(st, nb.cap))];
                                }
                                acc += wa * row;
                            }
                            v = acc;
                        }
                        const bool better = null_side ? v > b.v : v < b.v;
                        if (better) {
                            b.v = v;
                            b.col = j;
                            b.found = true;
                        }
                    }
                    cb[ci] = b;
                });
            } else {
                const double sigma = sigmas_[si];
                parallel_for(classes.size(), [&](std::size_t ci) {
                    const auto& cls = classes[ci];
                    ClassBest b;
                    b.v = null_side ? -1.0 : 2.0;
                    std::vector<double> K;
                    if (c > 0.0) K = usig_->class_matrix(c, cls.phi_r, sigma);
                    for (std::size_t j = 0; j < cls.cols.size(); ++j) {
                        const auto& col = cls.cols[j];
                        double v;
                        if (c > 0.0) {
                            v = usig_->power_with_matrix(K, col.phi_a, col.phi_f);
                        } else {
                            v = usig_->power(c, Rates{cls.phi_r, col.phi_f,
                                                      col.phi_a, 1.0, sigma});
                        }
                        const bool better = null_side ? v > b.v : v < b.v;
                        if (better) {
                            b.v = v;
                            b.col = j;
                            b.found = true;
                        }
                    }
                    cb[ci] = b;
                });
            }

            for (std::size_t ci = 0; ci < classes.size(); ++ci) {
                if (!cb[ci].found) continue;
                const bool better = null_side ? cb[ci].v > best.value
                                              : cb[ci].v < best.value;
                if (better || !best.found) {
                    const auto& col = classes[ci].cols[cb[ci].col];
                    best.value = cb[ci].v;
                    best.witness = Rates{classes[ci].phi_r, col.phi_f, col.phi_a,
                                         1.0, sig};
                    best.found = true;
                }
            }
        }
        return best;
    }

    // The inverted follow-up rate can land a hair outside its hypothesis set
    // after round-tripping through the x statistic; step phi_f inward by ulps
    // until membership holds, then re-evaluate so the reported rate is exactly
    // the witness's go probability.
    void fix_witness(SideBest& b, double c, Membership target) const {
        const auto& d = eng_.design();
        if (membership(h_, d, b.witness) == target) return;
        Rates w = b.witness;
        const double toward = target == Membership::null ? 0.0 : 1.0;
        for (int i = 0; i < 128 && membership(h_, d, w) != target; ++i)
            w.phi_f = std::nextafter(w.phi_f, toward);
        b.witness = w;
        b.value = usig_ ? usig_->power(c, w) : eng_.independent_power(c, w);
    }

    const PowerEngine& eng_;
    HypothesisPair h_;
    std::optional<UnknownSigmaEvaluator> usig_;
    std::vector<double> sigmas_;
    std::vector<std::vector<detail::GridClass>> null_sets_; // per sigma
    std::vector<std::vector<detail::GridClass>> alt_sets_;  // per sigma
    std::vector<NbTable> null_nb_; // known-sigma mode only
    std::vector<NbTable> alt_nb_;
};

// ---------------------------------------------------------------------------
// NSGA-II with constraint domination, simulated-binary crossover, and
// polynomial mutation. Decision vector: (c, phi0_r, phi0_f, phi0_a,
// phi1_r, phi1_f, phi1_a [, sigma0, sigma1]). Objectives (minimized) are the
// negated error rates at the carried witnesses, so evolution drives the
// witnesses toward the adversarial worst case while spreading over c;
// constraint violation is the distance of each witness from its hypothesis set.
// ---------------------------------------------------------------------------

struct Individual {
    std::array<double, 9> x{};
    double f1 = 0.0;
    double f2 = 0.0;
    double viol = 0.0;
    int rank = 0;
    double crowd = 0.0;
};

class Nsga2 {
public:
    Nsga2(const DefinitiveDesign& design, const HypothesisPair& h,
          const PowerEngine& eng, const UnknownSigmaEvaluator* usig,
          const MooSettings& s)
        : design_(design), h_(h), eng_(eng), usig_(usig), s_(s), rng_(s.seed) {
        dims_ = h_.sigma_floor ? 9 : 7;
        const std::optional<double> sig_lo =
            h_.sigma_floor ? std::optional<double>(*h_.sigma_floor) : std::nullopt;
        const double c_hi =
            x_statistic(design_, Rates{1.0, 1.0, 1.0, 1.0, sig_lo});
        lo_ = {0.0, kGridStep, 0.0, 0.0, kGridStep, 0.0, 0.0, 0.0, 0.0};
        hi_ = {c_hi, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0};
        if (h_.sigma_floor) {
            lo_[7] = lo_[8] = *h_.sigma_floor;
            hi_[7] = hi_[8] = kSigmaGridSpan * *h_.sigma_floor;
        }
        pm_ = s_.mutation_prob ? *s_.mutation_prob
                               : 1.0 / static_cast<double>(dims_);
    }

    // Final rank-0 thresholds, deduplicated and ascending.
    std::vector<double> run() {
        const std::size_t n = static_cast<std::size_t>(s_.population);
        std::vector<Individual> pop(n);
        for (auto& ind : pop)
            for (int k = 0; k < dims_; ++k)
                ind.x[static_cast<std::size_t>(k)] =
                    lo_[static_cast<std::size_t>(k)] +
                    u01() * (hi_[static_cast<std::size_t>(k)] -
                             lo_[static_cast<std::size_t>(k)]);
        evaluate_all(pop);
        rank_and_crowd(pop);

        for (std::int64_t g = 0; g < s_.generations; ++g) {
            std::vector<Individual> off;
            off.reserve(n);
            while (off.size() < n) {
                const Individual& p1 = tournament(pop);
                const Individual& p2 = tournament(pop);
                Individual c1, c2;
                sbx(p1, p2, c1, c2);
                mutate(c1);
                mutate(c2);
                off.push_back(c1);
                if (off.size() < n) off.push_back(c2);
            }
            evaluate_all(off);

            std::vector<Individual> merged;
            merged.reserve(2 * n);
            for (auto& i : pop) merged.push_back(std::move(i));
            for (auto& i : off) merged.push_back(std::move(i));
            const auto fronts = rank_and_crowd(merged);

            std::vector<Individual> next;
            next.reserve(n);
            for (const auto& front : fronts) {
                if (next.size() + front.size() <= n) {
                    for (int idx : front) next.push_back(merged[static_cast<std::size_t>(idx)]);
                } else {
                    std::vector<int> rest = front;
                    std::stable_sort(rest.begin(), rest.end(), [&](int a, int b) {
                        return merged[static_cast<std::size_t>(a)].crowd >
                               merged[static_cast<std::size_t>(b)].crowd;
                    });
                    for (int idx : rest) {
                        if (next.size() == n) break;
                        next.push_back(merged[static_cast<std::size_t>(idx)]);
                    }
                }
                if (next.size() == n) break;
            }
            pop = std::move(next);
        }

        rank_and_crowd(pop);
        std::vector<double> cs;
        for (const auto& ind : pop)
            if (ind.rank == 0) cs.push_back(ind.x[0]);
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
        return cs;
    }

private:
    double u01() {
        return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::size_t pick(std::size_t n) {
        const auto i = static_cast<std::size_t>(u01() * static_cast<double>(n));
        return std::min(i, n - 1);
    }

    void evaluate(Individual& ind) const {
        const double c = ind.x[0];
        Rates r0{ind.x[1], ind.x[2], ind.x[3], 1.0, std::nullopt};
        Rates r1{ind.x[4], ind.x[5], ind.x[6], 1.0, std::nullopt};
        if (dims_ == 9) {
            r0.sigma = ind.x[7];
            r1.sigma = ind.x[8];
        }
        ind.viol = std::max(0.0, x_statistic(design_, r0) - h_.x0) +
                   std::max(0.0, h_.x1 - x_statistic(design_, r1));
        const double g0 =
            usig_ ? usig_->power(c, r0) : eng_.independent_power(c, r0);
        const double g1 =
            usig_ ? usig_->power(c, r1) : eng_.independent_power(c, r1);
        ind.f1 = -g0;          // maximize the attained type I error
        ind.f2 = -(1.0 - g1);  // maximize the attained type II error
    }

    void evaluate_all(std::vector<Individual>& pop) const {
        parallel_for(pop.size(), [&](std::size_t i) { evaluate(pop[i]); });
    }

    static bool cdom(const Individual& a, const Individual& b) {
        if (a.viol == 0.0 && b.viol > 0.0) return true;
        if (a.viol > 0.0 && b.viol == 0.0) return false;
        if (a.viol > 0.0) return a.viol < b.viol;
        return a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2);
    }

    // Fast nondominated sort + crowding distance; returns fronts of indices.
    std::vector<std::vector<int>> rank_and_crowd(std::vector<Individual>& pop) const {
        const int n = static_cast<int>(pop.size());
        std::vector<std::vector<int>> dominated(static_cast<std::size_t>(n));
        std::vector<int> count(static_cast<std::size_t>(n), 0);
        std::vector<std::vector<int>> fronts(1);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                if (cdom(pop[static_cast<std::size_t>(i)], pop[static_cast<std::size_t>(j)]))
                    dominated[static_cast<std::size_t>(i)].push_back(j);
                else if (cdom(pop[static_cast<std::size_t>(j)], pop[static_cast<std::size_t>(i)]))
                    ++count[static_cast<std::size_t>(i)];
            }
            if (count[static_cast<std::size_t>(i)] == 0) {
                pop[static_cast<std::size_t>(i)].rank = 0;
                fronts[0].push_back(i);
            }
        }
        while (!fronts.back().empty()) {
            std::vector<int> next;
            for (int i : fronts.back()) {
                for (int j : dominated[static_cast<std::size_t>(i)]) {
                    if (--count[static_cast<std::size_t>(j)] == 0) {
                        pop[static_cast<std::size_t>(j)].rank =
                            static_cast<int>(fronts.size());
                        next.push_back(j);
                    }
                }
            }
            fronts.push_back(std::move(next));
        }
        fronts.pop_back();

        for (const auto& front : fronts) {
            for (int i : front) pop[static_cast<std::size_t>(i)].crowd = 0.0;
            if (front.size() < 3) {
                for (int i : front)
                    pop[static_cast<std::size_t>(i)].crowd =
                        std::numeric_limits<double>::infinity();
                continue;
            }
            for (int obj = 0; obj < 2; ++obj) {
                std::vector<int> idx = front;
                auto key = [&](int i) {
                    const auto& ind = pop[static_cast<std::size_t>(i)];
                    return obj == 0 ? ind.f1 : ind.f2;
                };
                std::stable_sort(idx.begin(), idx.end(),
                                 [&](int a, int b) { return key(a) < key(b); });
                const double span = key(idx.back()) - key(idx.front());
                pop[static_cast<std::size_t>(idx.front())].crowd =
                    std::numeric_limits<double>::infinity();
                pop[static_cast<std::size_t>(idx.back())].crowd =
                    std::numeric_limits<double>::infinity();
                if (span <= 0.0) continue;
                for (std::size_t k = 1; k + 1 < idx.size(); ++k)
                    pop[static_cast<std::size_t>(idx[k])].crowd +=
                        (key(idx[k + 1]) - key(idx[k - 1])) / span;
            }
        }
        return fronts;
    }

    const Individual& tournament(const std::vector<Individual>& pop) {
        const Individual& a = pop[pick(pop.size())];
        const Individual& b = pop[pick(pop.size())];
        if (a.rank != b.rank) return a.rank < b.rank ? a : b;
        if (a.crowd != b.crowd) return a.crowd > b.crowd ? a : b;
        return a;
    }

    void sbx(const Individual& p1, const Individual& p2, Individual& c1,
             Individual& c2) {
        c1 = p1;
        c2 = p2;
        if (u01() > s_.crossover_prob) return;
        for (int k = 0; k < dims_; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            if (u01() > 0.5) continue;
            double y1 = p1.x[ku], y2 = p2.x[ku];
            if (std::abs(y1 - y2) < 1e-14) continue;
            if (y1 > y2) std::swap(y1, y2);
            const double yl = lo_[ku], yu = hi_[ku];
            const double u = u01();
            const double eta = s_.crossover_eta;
            auto child = [&](double beta_bound) {
                const double alpha = 2.0 - std::pow(beta_bound, -(eta + 1.0));
                if (u <= 1.0 / alpha)
                    return std::pow(u * alpha, 1.0 / (eta + 1.0));
                return std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
            };
            const double betaq1 = child(1.0 + 2.0 * (y1 - yl) / (y2 - y1));
            const double betaq2 = child(1.0 + 2.0 * (yu - y2) / (y2 - y1));
            double v1 = 0.5 * ((y1 + y2) - betaq1 * (y2 - y1));
            double v2 = 0.5 * ((y1 + y2) + betaq2 * (y2 - y1));
            v1 = std::clamp(v1, yl, yu);
            v2 = std::clamp(v2, yl, yu);
            if (u01() <= 0.5) std::swap(v1, v2);
            c1.x[ku] = v1;
            c2.x[ku] = v2;
        }
    }

    void mutate(Individual& ind) {
        for (int k = 0; k < dims_; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            if (u01() > pm_) continue;
            const double yl = lo_[ku], yu = hi_[ku];
            if (yu - yl <= 0.0) continue;
            double y = ind.x[ku];
            const double d1 = (y - yl) / (yu - yl);
            const double d2 = (yu - y) / (yu - yl);
            const double u = u01();
            const double mp = 1.0 / (s_.mutation_eta + 1.0);
            double dq;
            if (u <= 0.5) {
                const double xy = 1.0 - d1;
                const double val =
                    2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, s_.mutation_eta + 1.0);
                dq = std::pow(val, mp) - 1.0;
            } else {
                const double xy = 1.0 - d2;
                const double val = 2.0 * (1.0 - u) +
                                   2.0 * (u - 0.5) *
                                       std::pow(xy, s_.mutation_eta + 1.0);
                dq = 1.0 - std::pow(val, mp);
            }
            y = std::clamp(y + dq * (yu - yl), yl, yu);
            ind.x[ku] = y;
        }
    }

    DefinitiveDesign design_;
    HypothesisPair h_;
    const PowerEngine& eng_;
    const UnknownSigmaEvaluator* usig_;
    MooSettings s_;
    std::mt19937_64 rng_;
    int dims_;
    std::array<double, 9> lo_{};
    std::array<double, 9> hi_{};
    double pm_ = 0.0;
};

void check_common(const DefinitiveDesign& design, std::int64_t n_p, double c) {
    validate(design);
    if (n_p < 1) throw domain_error("n_p must be positive");
    if (!std::isfinite(c)) throw domain_error("c must be finite");
}

} // namespace

void validate(const MooSettings& s) {
    if (s.population < 8 || s.population % 2 != 0)
        throw invalid_parametrization_error(
            "moo settings: population must be even and at least 8");
    if (s.generations < 1)
        throw invalid_parametrization_error("moo settings: generations must be positive");
    if (!(s.crossover_prob >= 0.0 && s.crossover_prob <= 1.0))
        throw invalid_parametrization_error(
            "moo settings: crossover_prob must lie in [0, 1]");
    if (s.mutation_prob && !(*s.mutation_prob >= 0.0 && *s.mutation_prob <= 1.0))
        throw invalid_parametrization_error(
            "moo settings: mutation_prob must lie in [0, 1]");
    if (!(s.crossover_eta > 0.0) || !(s.mutation_eta > 0.0))
        throw invalid_parametrization_error(
            "moo settings: distribution indices must be positive");
}

ErrorRatePoint error_rates_at(const DefinitiveDesign& design, const HypothesisPair& h,
                              std::int64_t n_p, double c) {
    check_common(design, n_p, c);
    PowerEngine eng(design, n_p, kGridStep);
    Certifier cert(eng, h);
    return cert.at(c);
}

std::vector<ErrorRatePoint> pareto_frontier(const DefinitiveDesign& design,
                                            const HypothesisPair& h, std::int64_t n_p,
                                            const MooSettings& settings) {
    check_common(design, n_p, 0.0);
    validate(settings);
    PowerEngine eng(design, n_p, kGridStep);
    Certifier cert(eng, h);
    cert.require_feasible();

    Nsga2 ea(design, h, eng, cert.evaluator(), settings);
    const std::vector<double> cs = ea.run();

    std::vector<ErrorRatePoint> refined;
    refined.reserve(cs.size());
    for (double c : cs) refined.push_back(cert.at(c));

    // Keep only the certified nondominated set; insertion in ascending-c order
    // resolves exact ties toward the smaller threshold.
    std::map<double, std::pair<double, std::size_t>> keep;
    for (std::size_t i = 0; i < refined.size(); ++i)
        detail::pareto_insert(keep, static_cast<double>(refined[i].alpha),
                              static_cast<double>(refined[i].beta), i);
    std::vector<std::size_t> order;
    for (const auto& [a, entry] : keep) order.push_back(entry.second);
    std::sort(order.begin(), order.end());
    std::vector<ErrorRatePoint> out;
    out.reserve(order.size());
    for (std::size_t i : order) out.push_back(refined[i]);
    return out;
}

double solve_c_for_beta(const DefinitiveDesign& design, const HypothesisPair& h,
                        std::int64_t n_p, double beta_target) {
    check_common(design, n_p, 0.0);
    if (!(beta_target > 0.0 && beta_target < 1.0))
        throw domain_error("solve_c_for_beta: beta_target must lie in (0, 1)");
    PowerEngine eng(design, n_p, kGridStep);
    Certifier cert(eng, h);
    const auto beta_at = [&](double c) {
        return static_cast<double>(cert.at(c, Side::beta_only).beta);
    };

    double lo = 0.0;
    double blo = beta_at(lo);
    if (std::abs(blo - beta_target) <= kBetaSolveTol) return lo;
    if (blo > beta_target)
        throw unattainable_target_error(
            "solve_c_for_beta: beta at c = 0 already exceeds the target");

    const std::optional<double> sig_lo =
        h.sigma_floor ? std::optional<double>(*h.sigma_floor) : std::nullopt;
    double hi = std::max(1e-3, x_statistic(design, Rates{1.0, 1.0, 1.0, 1.0, sig_lo}));
    double bhi = beta_at(hi);
    int guard = 0;
    while (bhi < beta_target) {
        if (++guard > 64)
            throw numeric_guard_error(
                "solve_c_for_beta: beta never reached the target while growing c");
        hi *= 2.0;
        bhi = beta_at(hi);
    }
    if (std::abs(bhi - beta_target) <= kBetaSolveTol) return hi;

    // beta(c) is nondecreasing; bisect until within tolerance or the bracket
    // collapses onto a discrete jump, in which case the closer endpoint wins.
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const double bm = beta_at(mid);
        if (std::abs(bm - beta_target) <= kBetaSolveTol) return mid;
        if (bm < beta_target) {
            lo = mid;
            blo = bm;
        } else {
            hi = mid;
            bhi = bm;
        }
    }
    return std::abs(bhi - beta_target) < std::abs(blo - beta_target) ? hi : lo;
}

std::vector<SweepPoint> sweep_p0(const DefinitiveDesign& design, double p1,
                                 std::int64_t n_p, double c,
                                 const std::vector<double>& p0_grid) {
    check_common(design, n_p, c);
    PowerEngine eng(design, n_p, kGridStep);
    std::vector<SweepPoint> out;
    out.reserve(p0_grid.size());
    for (double p0 : p0_grid) {
        const HypothesisPair h = make_hypotheses(design, p0, p1);
        Certifier cert(eng, h);
        const ErrorRatePoint p = cert.at(c, Side::alpha_only);
        out.push_back(SweepPoint{p0, p.alpha, p.phi0_witness});
    }
    return out;
}

} // namespace pilotfeas
