#include "serialize.hpp"

#include "sampling.hpp"

#include <json.hpp>

#include <cstdio>

namespace sunn {

using json = nlohmann::ordered_json;

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string trajectory_csv(const Trajectory& traj, int n) {
    std::string out = "t";
    for (int k = 1; k <= n; ++k) out += ",re_z_" + std::to_string(k);
    for (int k = 1; k <= n; ++k) out += ",im_z_" + std::to_string(k);
    for (int k = 1; k <= n; ++k) out += ",h_" + std::to_string(k);
    out += ",H_value\n";
    for (Eigen::Index i = 0; i < traj.times.size(); ++i) {
        out += format_double(traj.times[i]);
        for (int k = 0; k < n; ++k) out += "," + format_double(traj.points[i].z[k].real());
        for (int k = 0; k < n; ++k) out += "," + format_double(traj.points[i].z[k].imag());
        for (int k = 0; k < n; ++k) out += "," + format_double(traj.conserved(i, k));
        out += "," + format_double(traj.hamiltonian[i]) + "\n";
    }
    return out;
}

namespace {

json result_to_json(const CheckResult& r) {
    json jr;
    jr["name"] = r.name;
    jr["identity"] = r.identity;
    jr["residual"] = r.residual;
    jr["tolerance"] = r.tolerance;
    jr["passed"] = r.passed;
    jr["metadata"] = json::object();
    for (const auto& [k, v] : r.metadata) jr["metadata"][k] = v;
    return jr;
}

json params_to_json(const ModelParams& p) {
    json jp;
    jp["n"] = p.n;
    jp["x"] = p.x;
    jp["u"] = p.u;
    jp["v"] = p.v;
    return jp;
}

json report_body(const SuiteReport& report, const std::string& config_echo) {
    json doc;
    doc["version"] = "0.1.0";
    doc["config"] = config_echo.empty() ? json::object() : json::parse(config_echo);
    doc["seed"] = report.seed;
    doc["samples"] = report.samples;
    doc["all_passed"] = report.all_passed();
    doc["wallclock_seconds"] = report.wallclock_seconds;
    doc["params"] = json::array();
    for (const auto& p : report.params) doc["params"].push_back(params_to_json(p));
    doc["results"] = json::array();
    for (const auto& r : report.results) doc["results"].push_back(result_to_json(r));
    return doc;
}

RVec time_grid(const TimeGrid& grid) {
    RVec times(grid.steps + 1);
    for (int i = 0; i <= grid.steps; ++i) times[i] = grid.t_max * i / grid.steps;
    return times;
}

SectionPoint initial_point(const Model& model, const RunConfig& cfg) {
    if (cfg.initial_z) {
        if (cfg.initial_z->size() != model.n())
            throw InvalidArgument("config: 'initial.z' length must equal n");
        SectionPoint z{*cfg.initial_z};
        require_section(z);
        return z;
    }
    if (cfg.initial_angles) {
        const auto& [phat, qhat] = *cfg.initial_angles;
        if (phat.size() != model.n())
            throw InvalidArgument("config: 'initial.phat' length must equal n");
        require_chamber(model.params(), phat);
        return z_of_angles(model, ChamberPoint{phat}, torus_point_from_angles(qhat));
    }
    throw InvalidArgument("config: this command needs an 'initial' point");
}

Trajectory run_trajectory(const Model& model, const RunConfig& cfg, const std::string& method) {
    const RVec times = time_grid(cfg.time);
    if (method == "projection") {
        return evolve_projection(model, initial_point(model, cfg), cfg.hamiltonian_index, times);
    }
    if (method != "darboux") throw InvalidArgument("config: unknown method '" + method + "'");
    if (cfg.hamiltonian_index != 1)
        throw InvalidArgument("config: the darboux engine integrates the first Hamiltonian only");
    ChamberPoint p{RVec()};
    TorusPoint t{CVec()};
    if (cfg.initial_angles) {
        p.phat = cfg.initial_angles->first;
        t = torus_point_from_angles(cfg.initial_angles->second);
    } else {
        auto [pp, tt] = angles_of_z(model, initial_point(model, cfg));
        p = std::move(pp);
        t = std::move(tt);
    }
    const double step = cfg.darboux_step.value_or(
        std::min(0.01, cfg.time.t_max / std::max(1, cfg.time.steps)));
    return evolve_darboux(model, p, t, time_grid(cfg.time), step);
}

}  // namespace

std::string report_json(const SuiteReport& report, const std::string& config_echo) {
    return report_body(report, config_echo).dump(2) + "\n";
}

RunOutcome run_verify(const RunConfig& cfg) {
    const SuiteReport report = run_suite(cfg.params_list(), cfg.seed, cfg.samples, cfg.tolerances);
    RunOutcome out;
    out.all_passed = report.all_passed();
    out.text = report_json(report, cfg.echo_json);
    return out;
}

std::string run_simulate(const RunConfig& cfg, const std::string& method_override) {
    const Model model(cfg.primary_params());
    const std::string method = method_override.empty() ? cfg.method : method_override;
    const Trajectory traj = run_trajectory(model, cfg, method);
    return trajectory_csv(traj, model.n());
}

std::string run_spectrum(const RunConfig& cfg, bool along_trajectory) {
    const Model model(cfg.primary_params());
    const int n = model.n();
    const SectionPoint z0 = initial_point(model, cfg);

    auto spectrum_at = [&](const SectionPoint& z) {
        const ConservedSpectrum cs = conserved_spectrum(lax_matrix(model, z));
        json js;
        js["h"] = json::array();
        js["eigenvalues"] = json::array();
        for (int k = 0; k < n; ++k) js["h"].push_back(cs.h[k]);
        for (int k = 0; k < n; ++k) js["eigenvalues"].push_back(cs.eigenvalues[k]);
        return js;
    };

    json doc;
    doc["version"] = "0.1.0";
    doc["config"] = json::parse(cfg.echo_json);
    json init = spectrum_at(z0);
    init["z"] = json::array();
    for (int k = 0; k < n; ++k)
        init["z"].push_back(json::array({z0.z[k].real(), z0.z[k].imag()}));
    doc["initial"] = init;
    if (along_trajectory) {
        const Trajectory traj = run_trajectory(model, cfg, "projection");
        doc["trajectory"] = json::array();
        for (Eigen::Index i = 0; i < traj.times.size(); ++i) {
            json row = spectrum_at(traj.points[i]);
            row["t"] = traj.times[i];
            doc["trajectory"].push_back(std::move(row));
        }
    }
    return doc.dump(2) + "\n";
}

RunOutcome run_scan(const RunConfig& cfg) {
    if (!cfg.scan) throw InvalidArgument("config: 'scan' section is required for scanning");
    const ScanSpec& spec = *cfg.scan;

    json doc;
    doc["version"] = "0.1.0";
    doc["config"] = json::parse(cfg.echo_json);
    doc["seed"] = cfg.seed;
    doc["samples"] = cfg.samples;
    doc["checks"] = spec.checks.empty() ? json(check_names()) : json(spec.checks);
    doc["grid"] = json::array();

    bool all = true;
    for (double xv : spec.x)
        for (double uv : spec.u)
            for (double vv : spec.v) {
                std::vector<ModelParams> params;
                for (int n : cfg.n_values) params.push_back(ModelParams{n, xv, uv, vv});
                const SuiteReport rep =
                    run_suite(params, cfg.seed, cfg.samples, cfg.tolerances, spec.checks);
                json cell;
                cell["x"] = xv;
                cell["u"] = uv;
                cell["v"] = vv;
                cell["all_passed"] = rep.all_passed();
                cell["results"] = json::array();
                for (const auto& r : rep.results) cell["results"].push_back(result_to_json(r));
                all = all && rep.all_passed();
                doc["grid"].push_back(std::move(cell));
            }
    doc["all_passed"] = all;

    RunOutcome out;
    out.all_passed = all;
    out.text = doc.dump(2) + "\n";
    return out;
}

}  // namespace sunn
