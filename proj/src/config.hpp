// Run configuration: one JSON document per run, validated before any
// computation and echoed verbatim into every report.
#ifndef SUNN_CONFIG_HPP
#define SUNN_CONFIG_HPP

#include "model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sunn {

struct TimeGrid {
    double t_max = 10.0;
    int steps = 100;  // number of intervals; steps+1 samples
};

struct ScanSpec {
    std::vector<double> x, u, v;
    std::vector<std::string> checks;
};

struct RunConfig {
    std::vector<int> n_values;  // "n" may be a single integer or a list
    double x = 1.0;
    double u = 0.3;
    double v = 0.5;
    std::uint64_t seed = 42;
    int samples = 50;
    std::map<std::string, double> tolerances;
    TimeGrid time;
    std::string method = "projection";
    int hamiltonian_index = 1;
    std::optional<CVec> initial_z;
    std::optional<std::pair<RVec, RVec>> initial_angles;  // (phat, qhat)
    std::optional<ScanSpec> scan;
    std::optional<double> darboux_step;

    std::string echo_json;  // normalized round-trip of the input document

    std::vector<ModelParams> params_list() const;
    ModelParams primary_params() const;  // requires a single n
};

// Throws InvalidArgument with a human-readable message on malformed input
// or parameter-constraint violations.
RunConfig parse_config(const std::string& json_text);

}  // namespace sunn

#endif
