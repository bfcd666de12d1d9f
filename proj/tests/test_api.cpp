#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sunn.h>

#include "config.hpp"
#include "serialize.hpp"
#include "verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <regex>
#include <sstream>

using namespace sunn;
using json = nlohmann::ordered_json;

namespace {

const char* kConfig = R"({
  "n": 2, "x": 1.0, "u": 0.3, "v": 0.5,
  "seed": 42, "samples": 10,
  "time": {"t_max": 2.0, "steps": 20},
  "method": "projection",
  "initial": {"z": [[0.9, 0.35], [0.8, -0.3]]},
  "hamiltonian_index": 1
})";

std::string strip_wallclock(std::string text) {
    return std::regex_replace(text, std::regex(R"("wallclock_seconds": [0-9eE.+-]+)"),
                              "\"wallclock_seconds\": 0");
}

struct CString {
    char* ptr = nullptr;
    ~CString() { sunn_string_free(ptr); }
};

}  // namespace

TEST_CASE("config parsing: happy path and defaults") {
    const RunConfig cfg = parse_config(kConfig);
    CHECK(cfg.n_values == std::vector<int>{2});
    CHECK(cfg.seed == 42);
    CHECK(cfg.samples == 10);
    CHECK(cfg.method == "projection");
    CHECK(cfg.hamiltonian_index == 1);
    CHECK(cfg.initial_z.has_value());
    CHECK(cfg.time.t_max == 2.0);

    const RunConfig multi = parse_config(R"({"n": [2, 3], "x": 1.0, "u": 0.3, "v": 0.5})");
    CHECK(multi.n_values == std::vector<int>{2, 3});
    CHECK(multi.params_list().size() == 2);
}

TEST_CASE("config parsing: parameter constraint gate") {
    CHECK_THROWS_AS(parse_config(R"({"n": 2, "x": 1.0, "u": 0.5, "v": -0.5})"), InvalidArgument);
    CHECK_THROWS_AS(parse_config(R"({"n": 2, "x": -1.0, "u": 0.5, "v": 0.5})"), InvalidArgument);
    CHECK_THROWS_AS(parse_config(R"({"n": 1, "x": 1.0, "u": 0.5, "v": 0.5})"), InvalidArgument);
    CHECK_THROWS_AS(parse_config("not json"), InvalidArgument);
    CHECK_THROWS_AS(parse_config(R"({"n": 2, "x": 1.0, "u": 0.5, "v": 0.5, "bogus": 1})"),
                    InvalidArgument);
    CHECK_THROWS_AS(parse_config(R"({"n": 2, "x": 1, "u": 0.5, "v": 0.5,
                                     "initial": {"z": [[0, 0], [0, 0]]}})"),
                    InvalidArgument);
}

TEST_CASE("suite runs, sorts results, and is deterministic") {
    const std::vector<ModelParams> params{{2, 1.0, 0.3, 0.5}};
    const SuiteReport a = run_suite(params, 42, 6);
    CHECK(a.results.size() >= 20);
    CHECK(std::is_sorted(a.results.begin(), a.results.end(),
                         [](const CheckResult& l, const CheckResult& r) {
                             return l.name < r.name;
                         }));
    for (const auto& r : a.results) {
        INFO(r.name, " residual ", r.residual, " tol ", r.tolerance);
        CHECK(r.passed);
        CHECK(std::isfinite(r.residual));
    }
    const SuiteReport b = run_suite(params, 42, 6);
    CHECK(strip_wallclock(report_json(a, "{}")) == strip_wallclock(report_json(b, "{}")));
    // a different seed changes sampled residuals somewhere
    const SuiteReport c = run_suite(params, 43, 6);
    CHECK(strip_wallclock(report_json(a, "{}")) != strip_wallclock(report_json(c, "{}")));
}

TEST_CASE("suite validates inputs and honours the check subset") {
    CHECK_THROWS_AS(run_suite({}, 42, 5), InvalidArgument);
    CHECK_THROWS_AS(run_suite({{2, 1.0, 0.5, -0.5}}, 42, 5), InvalidArgument);
    CHECK_THROWS_AS(run_suite({{2, 1.0, 0.3, 0.5}}, 42, 5, {}, {"no-such-check"}),
                    InvalidArgument);
    const SuiteReport r =
        run_suite({{2, 1.0, 0.3, 0.5}}, 42, 5, {}, {"gauge-identity", "chart-roundtrip"});
    CHECK(r.results.size() == 2);
    // tolerance overrides flip the pass flag
    const SuiteReport forced =
        run_suite({{2, 1.0, 0.3, 0.5}}, 42, 5, {{"gauge-identity", 1e-30}}, {"gauge-identity"});
    CHECK_FALSE(forced.results[0].passed);
}

TEST_CASE("trajectory CSV has the documented schema and round-trip digits") {
    const RunConfig cfg = parse_config(kConfig);
    const std::string csv = run_simulate(cfg);
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "t,re_z_1,re_z_2,im_z_1,im_z_2,h_1,h_2,H_value");
    int rows = 0;
    std::string row;
    while (std::getline(lines, row)) ++rows;
    CHECK(rows == 21);
    // identical config yields byte-identical bodies
    CHECK(run_simulate(cfg) == csv);
    // 17 significant digits round-trip exactly
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
}

TEST_CASE("simulate honours the engine choice and initial-angle input") {
    const RunConfig cfg = parse_config(R"({
      "n": 2, "x": 1.0, "u": 0.3, "v": 0.5,
      "time": {"t_max": 0.5, "steps": 5},
      "initial": {"phat": [0.4, -1.1], "qhat": [0.4, 1.1]},
      "darboux_step": 0.001
    })");
    const std::string proj = run_simulate(cfg, "projection");
    const std::string darb = run_simulate(cfg, "darboux");
    CHECK(proj != darb);
    // both report the same header and the same number of samples
    CHECK(proj.substr(0, proj.find('\n')) == darb.substr(0, darb.find('\n')));
    // parse last row of each and compare coarsely
    auto last_row = [](const std::string& csv) {
        const auto end = csv.find_last_not_of('\n');
        const auto start = csv.rfind('\n', end);
        return csv.substr(start + 1, end - start);
    };
    std::istringstream ap(last_row(proj)), ad(last_row(darb));
    std::string cell_p, cell_d;
    std::getline(ap, cell_p, ',');
    std::getline(ad, cell_d, ',');
    double worst = 0.0;
    while (std::getline(ap, cell_p, ',') && std::getline(ad, cell_d, ','))
        worst = std::max(worst, std::abs(std::stod(cell_p) - std::stod(cell_d)));
    CHECK(worst < 1e-3);
}

TEST_CASE("C interface: version, parse errors, verify, simulate determinism") {
    CHECK(std::string(sunn_version()) == "0.1.0");
    CHECK(std::string(sunn_status_name(SUNN_OK)) == "ok");

    sunn_config* bad = nullptr;
    CString err;
    CHECK(sunn_config_parse(R"({"n": 2, "x": 1.0, "u": 0.5, "v": -0.5})", &bad, &err.ptr) ==
          SUNN_ERROR_INVALID_ARGUMENT);
    CHECK(bad == nullptr);
    REQUIRE(err.ptr != nullptr);
    CHECK(std::string(err.ptr).find("u + v") != std::string::npos);

    sunn_config* cfg = nullptr;
    REQUIRE(sunn_config_parse(kConfig, &cfg, nullptr) == SUNN_OK);

    CString csv1, csv2;
    CHECK(sunn_run_simulate(cfg, nullptr, &csv1.ptr, nullptr) == SUNN_OK);
    CHECK(sunn_run_simulate(cfg, "projection", &csv2.ptr, nullptr) == SUNN_OK);
    CHECK(std::string(csv1.ptr) == std::string(csv2.ptr));

    CString spec;
    CHECK(sunn_run_spectrum(cfg, 0, &spec.ptr, nullptr) == SUNN_OK);
    const json sj = json::parse(spec.ptr);
    CHECK(sj["initial"]["h"].size() == 2);
    CHECK(sj["initial"]["eigenvalues"].size() == 2);
    // eigenvalues descending, traces consistent
    CHECK(sj["initial"]["eigenvalues"][0].get<double>() >=
          sj["initial"]["eigenvalues"][1].get<double>());
    const double h1 = sj["initial"]["h"][0].get<double>();
    const double sum = sj["initial"]["eigenvalues"][0].get<double>() +
                       sj["initial"]["eigenvalues"][1].get<double>();
    CHECK(std::abs(h1 - sum) < 1e-9 * std::max(1.0, std::abs(h1)));

    sunn_config_free(cfg);
}

TEST_CASE("C interface: verify report and scan") {
    sunn_config* cfg = nullptr;
    REQUIRE(sunn_config_parse(R"({
        "n": 2, "x": 1.0, "u": 0.3, "v": 0.5, "seed": 7, "samples": 5,
        "scan": {"x": [0.5, 1.0], "checks": ["structure-orthogonality", "gauge-identity"]}
    })", &cfg, nullptr) == SUNN_OK);

    CString report;
    CHECK(sunn_run_verify(cfg, &report.ptr, nullptr) == SUNN_OK);
    const json rj = json::parse(report.ptr);
    CHECK(rj["all_passed"].get<bool>());
    CHECK(rj["config"]["seed"].get<int>() == 7);
    CHECK(rj["results"].size() >= 20);
    for (const auto& r : rj["results"]) {
        CHECK(r.contains("name"));
        CHECK(r.contains("identity"));
        CHECK(r.contains("residual"));
        CHECK(r.contains("tolerance"));
        CHECK(r.contains("passed"));
    }

    CString scan;
    CHECK(sunn_run_scan(cfg, &scan.ptr, nullptr) == SUNN_OK);
    const json sj = json::parse(scan.ptr);
    CHECK(sj["grid"].size() == 2);
    CHECK(sj["all_passed"].get<bool>());
    CHECK(sj["grid"][0]["results"].size() == 2);

    sunn_config_free(cfg);
}

TEST_CASE("C interface: pointwise Lax spectrum") {
    const double z_re[2] = {0.9, 0.8};
    const double z_im[2] = {0.35, -0.3};
    double eigs[2], h[2];
    CHECK(sunn_lax_spectrum(2, 1.0, 0.3, 0.5, z_re, z_im, eigs, h, nullptr) == SUNN_OK);
    CHECK(eigs[0] >= eigs[1]);
    CHECK(std::abs(h[0] - (eigs[0] + eigs[1])) < 1e-9 * std::max(1.0, std::abs(h[0])));

    CString err;
    const double zero_re[2] = {0.0, 0.0};
    CHECK(sunn_lax_spectrum(2, 1.0, 0.3, 0.5, zero_re, zero_re, eigs, h, &err.ptr) ==
          SUNN_ERROR_INVALID_ARGUMENT);
    CHECK(sunn_lax_spectrum(2, 1.0, 0.3, 0.5, nullptr, z_im, eigs, h, &err.ptr) ==
          SUNN_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("darboux engine surfaces boundary aborts as domain errors") {
    sunn_config* cfg = nullptr;
    REQUIRE(sunn_config_parse(R"({
        "n": 2, "x": 1.0, "u": 0.3, "v": 0.5,
        "time": {"t_max": 5.0, "steps": 50},
        "initial": {"phat": [0.26, -0.26], "qhat": [0.0, 0.0]},
        "method": "darboux"
    })", &cfg, nullptr) == SUNN_OK);
    CString csv, err;
    const sunn_status st = sunn_run_simulate(cfg, nullptr, &csv.ptr, &err.ptr);
    CHECK(st == SUNN_ERROR_DOMAIN);
    REQUIRE(err.ptr != nullptr);
    CHECK(std::string(err.ptr).find("guard") != std::string::npos);
    sunn_config_free(cfg);
}
