#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pilotfeas/errors.hpp"

namespace pilotfeas::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw config_error("config error at '" + where + "': " + what);
}

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
}

// Rejects keys outside the allowed set so typos never silently change a run.
void check_keys(const json& j, const std::string& where,
                const std::set<std::string>& allowed) {
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key()))
            fail(where, "unknown key '" + item.key() + "'");
    }
}

double get_number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

std::int64_t get_integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<std::int64_t>();
}

std::string get_string(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

double get_probability(const json& j, const std::string& where) {
    const double v = get_number(j, where);
    if (!(v >= 0.0 && v <= 1.0)) fail(where, "must lie in [0, 1]");
    return v;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void parse_definitive(const json& j, DesignConfig& cfg) {
    require_object(j, "definitive");
    check_keys(j, "definitive", {"n_t", "n_e", "mu", "alpha_one_sided"});
    if (!j.contains("n_t") || !j.contains("n_e") || !j.contains("mu"))
        fail("definitive", "requires n_t, n_e, and mu (sigma belongs to the sigma block)");
    cfg.definitive.n_t = get_integer(j.at("n_t"), "definitive.n_t");
    cfg.definitive.n_e = get_integer(j.at("n_e"), "definitive.n_e");
    cfg.definitive.mu = get_number(j.at("mu"), "definitive.mu");
    if (j.contains("alpha_one_sided"))
        cfg.definitive.alpha_one_sided =
            get_number(j.at("alpha_one_sided"), "definitive.alpha_one_sided");
}

void parse_pilot(const json& j, DesignConfig& cfg) {
    const auto one = [](const json& v, const std::string& where) {
        const std::int64_t n = get_integer(v, where);
        if (n < 1) fail(where, "n_p must be >= 1");
        return n;
    };
    if (j.is_array()) {
        if (j.empty()) fail("pilot", "needs at least one n_p value");
        for (std::size_t i = 0; i < j.size(); ++i)
            cfg.pilot.push_back(one(j[i], "pilot[" + std::to_string(i) + "]"));
    } else {
        cfg.pilot.push_back(one(j, "pilot"));
    }
}

void parse_hypotheses(const json& j, DesignConfig& cfg) {
    require_object(j, "hypotheses");
    check_keys(j, "hypotheses", {"p0", "p1"});
    if (!j.contains("p0") || !j.contains("p1"))
        fail("hypotheses", "requires p0 and p1");
    cfg.p1 = get_probability(j.at("p1"), "hypotheses.p1");
    const json& p0 = j.at("p0");
    if (p0.is_array()) {
        if (p0.empty()) fail("hypotheses.p0", "grid needs at least one value");
        for (std::size_t i = 0; i < p0.size(); ++i) {
            const std::string where = "hypotheses.p0[" + std::to_string(i) + "]";
            const double v = get_probability(p0[i], where);
            if (!cfg.p0.empty() && v <= cfg.p0.back())
                fail(where, "grid must be strictly increasing");
            cfg.p0.push_back(v);
        }
    } else {
        cfg.p0.push_back(get_probability(p0, "hypotheses.p0"));
    }
    for (const double v : cfg.p0) {
        if (!(v > 0.0 && v < 1.0) || !(cfg.p1 > 0.0 && cfg.p1 < 1.0))
            fail("hypotheses", "p0 and p1 must lie strictly inside (0, 1)");
        if (!(v < cfg.p1)) fail("hypotheses", "every p0 must be < p1");
    }
}

void parse_sigma(const json& j, DesignConfig& cfg) {
    require_object(j, "sigma");
    if (!j.contains("mode")) fail("sigma", "requires mode: \"fixed\" or \"estimate\"");
    const std::string mode = get_string(j.at("mode"), "sigma.mode");
    if (mode == "fixed") {
        cfg.sigma.mode = SigmaMode::fixed;
        check_keys(j, "sigma", {"mode", "value"});
        if (!j.contains("value")) fail("sigma", "fixed mode requires value");
        cfg.sigma.value = get_number(j.at("value"), "sigma.value");
        if (!(cfg.sigma.value > 0.0)) fail("sigma.value", "must be > 0");
        cfg.definitive.sigma0 = cfg.sigma.value;
    } else if (mode == "estimate") {
        cfg.sigma.mode = SigmaMode::estimate;
        check_keys(j, "sigma", {"mode", "floor"});
        if (!j.contains("floor")) fail("sigma", "estimate mode requires floor");
        const double floor = get_number(j.at("floor"), "sigma.floor");
        if (!(floor > 0.0)) fail("sigma.floor", "must be > 0");
        cfg.sigma.floor = floor;
        cfg.definitive.sigma0 = floor;
    } else {
        fail("sigma.mode", "must be \"fixed\" or \"estimate\"");
    }
}

void parse_correlation(const json& j, DesignConfig& cfg) {
    require_object(j, "correlation");
    check_keys(j, "correlation", {"mode", "phi_or", "adherence_estimator"});
    if (j.contains("mode")) {
        const std::string mode = get_string(j.at("mode"), "correlation.mode");
        if (mode == "independent") {
            cfg.correlation.mode = CorrelationMode::independent;
        } else if (mode == "correlated") {
            cfg.correlation.mode = CorrelationMode::correlated;
        } else {
            fail("correlation.mode", "must be \"independent\" or \"correlated\"");
        }
    }
    if (j.contains("phi_or")) {
        cfg.correlation.phi_or = get_number(j.at("phi_or"), "correlation.phi_or");
        if (!(cfg.correlation.phi_or > 0.0)) fail("correlation.phi_or", "must be > 0");
    }
    if (j.contains("adherence_estimator")) {
        const std::string est =
            get_string(j.at("adherence_estimator"), "correlation.adherence_estimator");
        if (est == "marginal") {
            cfg.correlation.adherence_estimator = AdherenceEstimator::marginal;
        } else if (est == "conditional") {
            cfg.correlation.adherence_estimator = AdherenceEstimator::conditional;
        } else {
            fail("correlation.adherence_estimator",
                 "must be \"marginal\" or \"conditional\"");
        }
    }
    if (cfg.correlation.mode == CorrelationMode::independent &&
        cfg.correlation.phi_or != 1.0)
        fail("correlation", "independent mode requires phi_or = 1");
    if (cfg.correlation.mode == CorrelationMode::correlated &&
        cfg.sigma.mode == SigmaMode::estimate)
        fail("correlation",
             "estimated-variance mode is defined for independent follow-up and "
             "adherence only");
}

void parse_moo(const json& j, DesignConfig& cfg) {
    require_object(j, "moo");
    check_keys(j, "moo",
               {"population", "generations", "crossover_prob", "crossover_eta",
                "mutation_prob", "mutation_eta", "seed"});
    if (j.contains("population"))
        cfg.moo.population = get_integer(j.at("population"), "moo.population");
    if (j.contains("generations"))
        cfg.moo.generations = get_integer(j.at("generations"), "moo.generations");
    if (j.contains("crossover_prob"))
        cfg.moo.crossover_prob =
            get_probability(j.at("crossover_prob"), "moo.crossover_prob");
    if (j.contains("crossover_eta"))
        cfg.moo.crossover_eta = get_number(j.at("crossover_eta"), "moo.crossover_eta");
    if (j.contains("mutation_prob"))
        cfg.moo.mutation_prob =
            get_probability(j.at("mutation_prob"), "moo.mutation_prob");
    if (j.contains("mutation_eta"))
        cfg.moo.mutation_eta = get_number(j.at("mutation_eta"), "moo.mutation_eta");
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
            fail("moo.seed", "expected a non-negative integer");
        const std::int64_t s = j.at("seed").get<std::int64_t>();
        if (s < 0) fail("moo.seed", "must be non-negative");
        cfg.moo.seed = static_cast<std::uint64_t>(s);
    }
}

} // namespace

DesignConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    require_object(root, "(top level)");
    check_keys(root, "(top level)",
               {"definitive", "pilot", "hypotheses", "sigma", "correlation", "moo",
                "output"});
    for (const char* required : {"definitive", "pilot", "hypotheses", "sigma"}) {
        if (!root.contains(required))
            fail("(top level)", std::string("missing required block '") + required + "'");
    }

    DesignConfig cfg;
    parse_definitive(root.at("definitive"), cfg);
    parse_pilot(root.at("pilot"), cfg);
    parse_hypotheses(root.at("hypotheses"), cfg);
    parse_sigma(root.at("sigma"), cfg);
    if (root.contains("correlation")) parse_correlation(root.at("correlation"), cfg);
    if (root.contains("moo")) parse_moo(root.at("moo"), cfg);
    if (root.contains("output")) cfg.output = get_string(root.at("output"), "output");

    // Re-check every cross-field invariant through the owning types so the CLI
    // cannot construct states the library would reject later.
    try {
        validate(cfg.definitive);
        validate(cfg.moo);
        Rates probe;
        probe.phi_or = cfg.correlation.phi_or;
        validate(probe);
        for (const double p0 : cfg.p0) (void)hypotheses_for(cfg, p0);
    } catch (const domain_error& e) {
        throw config_error(std::string("config error: ") + e.what());
    }

    cfg.hash = fnv1a(root.dump()); // nlohmann objects serialize with sorted keys
    return cfg;
}

HypothesisPair hypotheses_for(const DesignConfig& cfg, double p0) {
    return make_hypotheses(cfg.definitive, p0, cfg.p1,
                           cfg.sigma.mode == SigmaMode::estimate ? cfg.sigma.floor
                                                                 : std::nullopt);
}

} // namespace pilotfeas::cli
