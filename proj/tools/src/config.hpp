#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pilotfeas/hypotheses.hpp"
#include "pilotfeas/moo.hpp"
#include "pilotfeas/pilot_test.hpp"
#include "pilotfeas/trial_model.hpp"

namespace pilotfeas::cli {

// Malformed or contradictory configuration; mapped to exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

enum class SigmaMode { fixed, estimate };

struct SigmaConfig {
    SigmaMode mode = SigmaMode::fixed;
    double value = 1.0;          // fixed mode: the known standard deviation
    std::optional<double> floor; // estimate mode: sigma_* lower bound
};

struct CorrelationConfig {
    CorrelationMode mode = CorrelationMode::independent;
    double phi_or = 1.0;
    AdherenceEstimator adherence_estimator = AdherenceEstimator::marginal;
};

// Parsed and cross-validated run configuration. In estimate mode the
// definitive design's sigma0 is set to the floor, so every default-sigma code
// path coincides with the worst allowed variance.
struct DesignConfig {
    DefinitiveDesign definitive;
    std::vector<std::int64_t> pilot; // n_p values
    std::vector<double> p0;          // scalar or strictly increasing grid
    double p1 = 0.0;
    SigmaConfig sigma;
    CorrelationConfig correlation;
    MooSettings moo;
    std::string output = ".";
    std::uint64_t hash = 0; // FNV-1a of the canonical serialized form
};

// Parses, schema-checks (unknown keys rejected), and cross-validates the JSON
// config at path. Throws config_error with a field-qualified message.
DesignConfig load_config(const std::string& path);

// Hypothesis pair for one p0, carrying the sigma floor in estimate mode.
HypothesisPair hypotheses_for(const DesignConfig& cfg, double p0);

} // namespace pilotfeas::cli
