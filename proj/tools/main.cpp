// Command-line front end; all computation goes through the C interface.
#include <sunn.h>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailure = 2;

struct StringGuard {
    char* ptr = nullptr;
    ~StringGuard() { sunn_string_free(ptr); }
};

struct ConfigGuard {
    sunn_config* ptr = nullptr;
    ~ConfigGuard() { sunn_config_free(ptr); }
};

bool read_file(const std::string& path, std::string& out, std::string& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err = "cannot open config file '" + path + "'";
        return false;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

bool write_output(const std::string& path, const std::string& text, std::string& err) {
    if (path.empty()) {
        std::cout << text;
        return true;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        err = "cannot open output file '" + path + "'";
        return false;
    }
    out << text;
    return true;
}

int load_config(const std::string& path, ConfigGuard& config) {
    std::string text, err;
    if (!read_file(path, text, err)) {
        std::cerr << "error: " << err << "\n";
        return kExitUsage;
    }
    StringGuard msg;
    const sunn_status st = sunn_config_parse(text.c_str(), &config.ptr, &msg.ptr);
    if (st != SUNN_OK) {
        std::cerr << "error: " << (msg.ptr != nullptr ? msg.ptr : sunn_status_name(st)) << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

int finish(sunn_status st, const char* text, const char* err, const std::string& out_path) {
    if (st == SUNN_OK || st == SUNN_CHECKS_FAILED) {
        std::string werr;
        if (!write_output(out_path, text != nullptr ? text : "", werr)) {
            std::cerr << "error: " << werr << "\n";
            return kExitUsage;
        }
        return st == SUNN_OK ? kExitOk : kExitCheckFailure;
    }
    std::cerr << "error: " << (err != nullptr ? err : sunn_status_name(st)) << "\n";
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduced integrable system toolkit: identity suite, trajectory "
                 "simulation, spectrum evaluation and parameter scans"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(sunn_version()));

    std::string config_path, out_path, method;
    bool along_trajectory = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON configuration file")->required();
        cmd->add_option("--out", out_path, "output file (default: stdout for JSON)");
    };

    CLI::App* verify = app.add_subcommand("verify", "run the identity suite, write a JSON report");
    add_common(verify);

    CLI::App* simulate = app.add_subcommand("simulate", "integrate one trajectory, write CSV");
    add_common(simulate);
    simulate->add_option("--method", method, "projection | darboux (overrides the config)");

    CLI::App* spectrum =
        app.add_subcommand("spectrum", "Lax eigenvalues and conserved traces, write JSON");
    add_common(spectrum);
    spectrum->add_flag("--trajectory", along_trajectory, "include per-time spectra");

    CLI::App* scan = app.add_subcommand("scan", "re-run a check set over an (x, u, v) grid");
    add_common(scan);

    CLI11_PARSE(app, argc, argv);

    ConfigGuard config;
    if (const int rc = load_config(config_path, config); rc != kExitOk) return rc;

    StringGuard text, err;
    if (verify->parsed()) {
        const sunn_status st = sunn_run_verify(config.ptr, &text.ptr, &err.ptr);
        return finish(st, text.ptr, err.ptr, out_path);
    }
    if (simulate->parsed()) {
        if (out_path.empty()) {
            std::cerr << "error: simulate requires --out for the CSV file\n";
            return kExitUsage;
        }
        const sunn_status st =
            sunn_run_simulate(config.ptr, method.empty() ? nullptr : method.c_str(), &text.ptr,
                              &err.ptr);
        return finish(st, text.ptr, err.ptr, out_path);
    }
    if (spectrum->parsed()) {
        const sunn_status st =
            sunn_run_spectrum(config.ptr, along_trajectory ? 1 : 0, &text.ptr, &err.ptr);
        return finish(st, text.ptr, err.ptr, out_path);
    }
    const sunn_status st = sunn_run_scan(config.ptr, &text.ptr, &err.ptr);
    return finish(st, text.ptr, err.ptr, out_path);
}
