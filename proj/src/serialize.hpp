// Stable text output: trajectory CSV, suite/spectrum/scan JSON, and the
// high-level run drivers consumed by the C interface.
#ifndef SUNN_SERIALIZE_HPP
#define SUNN_SERIALIZE_HPP

#include "config.hpp"
#include "dynamics.hpp"
#include "verify.hpp"

#include <string>

namespace sunn {

// 17 significant digits: exact round trip for doubles.
std::string format_double(double value);

// Columns: t, re_z_1..re_z_n, im_z_1..im_z_n, h_1..h_n, H_value.
std::string trajectory_csv(const Trajectory& traj, int n);

std::string report_json(const SuiteReport& report, const std::string& config_echo);

struct RunOutcome {
    std::string text;
    bool all_passed = true;
};

RunOutcome run_verify(const RunConfig& cfg);
std::string run_simulate(const RunConfig& cfg, const std::string& method_override = "");
std::string run_spectrum(const RunConfig& cfg, bool along_trajectory);
RunOutcome run_scan(const RunConfig& cfg);

}  // namespace sunn

#endif
