#pragma once

#include <stdexcept>
#include <string>

namespace pilotfeas {

// Precondition violations on kernel/domain arguments (k > n, df = 0, p outside (0,1), ...).
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// Cell probabilities left [0,1] for an extreme odds ratio; raised instead of clamping.
class invalid_parametrization_error : public domain_error {
public:
    explicit invalid_parametrization_error(const std::string& what) : domain_error(what) {}
};

// The null or alternative hypothesis set is empty under the configured thresholds.
class infeasible_hypotheses_error : public std::runtime_error {
public:
    explicit infeasible_hypotheses_error(const std::string& what) : std::runtime_error(what) {}
};

// A guard against combinatorial or numeric blow-up tripped (e.g. correlated-mode n_p cap).
class numeric_guard_error : public std::runtime_error {
public:
    explicit numeric_guard_error(const std::string& what) : std::runtime_error(what) {}
};

// A root-finding target cannot be met anywhere in the feasible range.
class unattainable_target_error : public numeric_guard_error {
public:
    explicit unattainable_target_error(const std::string& what) : numeric_guard_error(what) {}
};

} // namespace pilotfeas
