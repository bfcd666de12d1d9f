#include "config.hpp"

#include <json.hpp>

namespace sunn {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw InvalidArgument("config: " + msg); }

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) fail(std::string(key) + " must be a number");
    return j[key].get<double>();
}

}  // namespace

std::vector<ModelParams> RunConfig::params_list() const {
    std::vector<ModelParams> out;
    out.reserve(n_values.size());
    for (int n : n_values) out.push_back(ModelParams{n, x, u, v});
    return out;
}

ModelParams RunConfig::primary_params() const {
    if (n_values.size() != 1)
        throw InvalidArgument("config: this command needs a single value of n");
    return ModelParams{n_values[0], x, u, v};
}

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("top-level document must be an object");

    static const char* known[] = {"n",      "x",      "u",    "v",       "seed",
                                  "samples", "tolerances", "time", "method",  "initial",
                                  "hamiltonian_index", "scan", "darboux_step"};
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) fail("unknown key '" + key + "'");
    }

    RunConfig cfg;
    if (!doc.contains("n")) fail("missing key 'n'");
    if (doc["n"].is_number_integer()) {
        cfg.n_values = {doc["n"].get<int>()};
    } else if (doc["n"].is_array()) {
        for (const auto& item : doc["n"]) {
            if (!item.is_number_integer()) fail("'n' entries must be integers");
            cfg.n_values.push_back(item.get<int>());
        }
        if (cfg.n_values.empty()) fail("'n' list must be nonempty");
    } else {
        fail("'n' must be an integer or a list of integers");
    }
    cfg.x = require_number(doc, "x");
    cfg.u = require_number(doc, "u");
    cfg.v = require_number(doc, "v");

    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer()) fail("'seed' must be an integer");
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("samples")) {
        if (!doc["samples"].is_number_integer()) fail("'samples' must be an integer");
        cfg.samples = doc["samples"].get<int>();
        if (cfg.samples < 1) fail("'samples' must be positive");
    }
    if (doc.contains("tolerances")) {
        if (!doc["tolerances"].is_object()) fail("'tolerances' must be an object");
        for (const auto& [key, value] : doc["tolerances"].items()) {
            if (!value.is_number()) fail("tolerance '" + key + "' must be a number");
            cfg.tolerances[key] = value.get<double>();
        }
    }
    if (doc.contains("time")) {
        const auto& t = doc["time"];
        if (!t.is_object()) fail("'time' must be an object");
        cfg.time.t_max = require_number(t, "t_max");
        if (!t.contains("steps") || !t["steps"].is_number_integer())
            fail("'time.steps' must be an integer");
        cfg.time.steps = t["steps"].get<int>();
        if (!(cfg.time.t_max > 0.0) || cfg.time.steps < 1)
            fail("'time' must have t_max > 0 and steps >= 1");
    }
    if (doc.contains("method")) {
        cfg.method = doc["method"].get<std::string>();
        if (cfg.method != "projection" && cfg.method != "darboux")
            fail("'method' must be 'projection' or 'darboux'");
    }
    if (doc.contains("hamiltonian_index")) {
        if (!doc["hamiltonian_index"].is_number_integer())
            fail("'hamiltonian_index' must be an integer");
        cfg.hamiltonian_index = doc["hamiltonian_index"].get<int>();
        if (cfg.hamiltonian_index == 0) fail("'hamiltonian_index' must be nonzero");
    }
    if (doc.contains("darboux_step")) {
        cfg.darboux_step = require_number(doc, "darboux_step");
        if (!(*cfg.darboux_step > 0.0)) fail("'darboux_step' must be positive");
    }

    if (doc.contains("initial")) {
        const auto& init = doc["initial"];
        if (!init.is_object()) fail("'initial' must be an object");
        if (init.contains("z") == init.contains("phat"))
            fail("'initial' must contain either 'z' or 'phat'/'qhat'");
        if (init.contains("z")) {
            const auto& zj = init["z"];
            if (!zj.is_array() || zj.empty()) fail("'initial.z' must be a nonempty array");
            CVec z(zj.size());
            for (std::size_t i = 0; i < zj.size(); ++i) {
                const auto& pair = zj[i];
                if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
                    !pair[1].is_number())
                    fail("'initial.z' entries must be [re, im] pairs");
                z[i] = Complex(pair[0].get<double>(), pair[1].get<double>());
            }
            if (z[z.size() - 1] == Complex(0.0, 0.0))
                fail("the last component of 'initial.z' must be nonzero");
            cfg.initial_z = std::move(z);
        } else {
            if (!init.contains("qhat")) fail("'initial' with 'phat' also needs 'qhat'");
            const auto& pj = init["phat"];
            const auto& qj = init["qhat"];
            if (!pj.is_array() || !qj.is_array() || pj.size() != qj.size() || pj.empty())
                fail("'initial.phat' and 'initial.qhat' must be arrays of equal length");
            RVec phat(pj.size()), qhat(qj.size());
            for (std::size_t i = 0; i < pj.size(); ++i) {
                if (!pj[i].is_number() || !qj[i].is_number())
                    fail("'initial' angle entries must be numbers");
                phat[i] = pj[i].get<double>();
                qhat[i] = qj[i].get<double>();
            }
            cfg.initial_angles = std::make_pair(std::move(phat), std::move(qhat));
        }
    }

    if (doc.contains("scan")) {
        const auto& sj = doc["scan"];
        if (!sj.is_object()) fail("'scan' must be an object");
        ScanSpec spec;
        auto read_axis = [&](const char* key, std::vector<double>& out, double fallback) {
            if (!sj.contains(key)) {
                out = {fallback};
                return;
            }
            if (!sj[key].is_array() || sj[key].empty())
                fail(std::string("'scan.") + key + "' must be a nonempty array");
            for (const auto& item : sj[key]) {
                if (!item.is_number()) fail(std::string("'scan.") + key + "' entries must be numbers");
                out.push_back(item.get<double>());
            }
        };
        read_axis("x", spec.x, cfg.x);
        read_axis("u", spec.u, cfg.u);
        read_axis("v", spec.v, cfg.v);
        if (sj.contains("checks")) {
            if (!sj["checks"].is_array() || sj["checks"].empty())
                fail("'scan.checks' must be a nonempty array of check names");
            for (const auto& item : sj["checks"]) spec.checks.push_back(item.get<std::string>());
        }
        cfg.scan = std::move(spec);
    }

    // Parameter constraints are enforced before any computation runs.
    for (const ModelParams& p : cfg.params_list()) {
        try {
            p.validate();
        } catch (const InvalidArgument& e) {
            fail(e.what());
        }
    }
    if (cfg.initial_z && static_cast<int>(cfg.initial_z->size()) != cfg.n_values[0] &&
        cfg.n_values.size() == 1)
        fail("'initial.z' length must equal n");
    if (cfg.initial_angles && cfg.n_values.size() == 1 &&
        static_cast<int>(cfg.initial_angles->first.size()) != cfg.n_values[0])
        fail("'initial.phat' length must equal n");

    cfg.echo_json = doc.dump();
    return cfg;
}

}  // namespace sunn
