// Registry of named identity checks executed over randomized parameters and
// points, producing a machine-readable residual report.
#ifndef SUNN_VERIFY_HPP
#define SUNN_VERIFY_HPP

#include "model.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sunn {

struct CheckResult {
    std::string name;
    std::string identity;  // human-readable statement of what is verified
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::map<std::string, std::string> metadata;
};

struct SuiteReport {
    std::vector<CheckResult> results;  // sorted by (name, params index)
    std::vector<ModelParams> params;
    std::uint64_t seed = 0;
    int samples = 0;
    double wallclock_seconds = 0.0;

    bool all_passed() const;
    double worst_residual(const std::string& name) const;
};

// Names of every registered check, sorted.
std::vector<std::string> check_names();

// Runs the registered checks (all, or the named subset) sample_count times
// per parameter set. Residuals are dimensionless wherever the quantity has
// scale. Deterministic for fixed (params_list, seed, sample_count).
SuiteReport run_suite(const std::vector<ModelParams>& params_list, std::uint64_t seed,
                      int sample_count, const std::map<std::string, double>& tol_overrides = {},
                      const std::vector<std::string>& subset = {});

}  // namespace sunn

#endif
