#include "sunn.h"

#include "serialize.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>

using namespace sunn;

struct sunn_config {
    RunConfig cfg;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set_error(char** slot, const std::string& msg) {
    if (slot != nullptr) *slot = dup_string(msg);
}

sunn_status classify(const std::exception& e) {
    if (dynamic_cast<const InvalidArgument*>(&e) != nullptr) return SUNN_ERROR_INVALID_ARGUMENT;
    if (dynamic_cast<const DomainError*>(&e) != nullptr ||
        dynamic_cast<const NotOnConstraint*>(&e) != nullptr ||
        dynamic_cast<const BoundaryApproach*>(&e) != nullptr)
        return SUNN_ERROR_DOMAIN;
    return SUNN_ERROR_NUMERIC;
}

template <typename Fn>
sunn_status guarded(char** error_message, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        set_error(error_message, e.what());
        return classify(e);
    } catch (...) {
        set_error(error_message, "unknown error");
        return SUNN_ERROR_NUMERIC;
    }
}

}  // namespace

extern "C" {

const char* sunn_version(void) { return "0.1.0"; }

const char* sunn_status_name(sunn_status status) {
    switch (status) {
        case SUNN_OK: return "ok";
        case SUNN_ERROR_INVALID_ARGUMENT: return "invalid-argument";
        case SUNN_ERROR_DOMAIN: return "domain-error";
        case SUNN_ERROR_NUMERIC: return "numeric-error";
        case SUNN_CHECKS_FAILED: return "checks-failed";
    }
    return "unknown";
}

sunn_status sunn_config_parse(const char* json_text, sunn_config** out, char** error_message) {
    if (json_text == nullptr || out == nullptr) {
        set_error(error_message, "null argument");
        return SUNN_ERROR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded(error_message, [&]() {
        auto handle = std::make_unique<sunn_config>();
        handle->cfg = parse_config(json_text);
        *out = handle.release();
        return SUNN_OK;
    });
}

void sunn_config_free(sunn_config* config) { delete config; }

sunn_status sunn_run_verify(const sunn_config* config, char** report_json,
                            char** error_message) {
    if (config == nullptr || report_json == nullptr) {
        set_error(error_message, "null argument");
        return SUNN_ERROR_INVALID_ARGUMENT;
    }
    return guarded(error_message, [&]() {
        const RunOutcome outcome = run_verify(config->cfg);
        *report_json = dup_string(outcome.text);
        return outcome.all_passed ? SUNN_OK : SUNN_CHECKS_FAILED;
    });
}

sunn_status sunn_run_simulate(const sunn_config* config, const char* method_override,
                              char** csv_text, char** error_message) {
    if (config == nullptr || csv_text == nullptr) {
        set_error(error_message, "null argument");
        return SUNN_ERROR_INVALID_ARGUMENT;
    }
    return guarded(error_message, [&]() {
        *csv_text = dup_string(
            run_simulate(config->cfg, method_override == nullptr ? "" : method_override));
        return SUNN_OK;
    });
}

sunn_status sunn_run_spectrum(const sunn_config* config, int along_trajectory, char** json_text,
                              char** error_message) {
    if (config == nullptr || json_text == nullptr) {
        set_error(error_message, "null argument");
        return SUNN_ERROR_INVALID_ARGUMENT;
    }
    return guarded(error_message, [&]() {
        *json_text = dup_string(run_spectrum(config->cfg, along_trajectory != 0));
        return SUNN_OK;
    });
}

sunn_status sunn_run_scan(const sunn_config* config, char** report_json, char** error_message) {
    if (config == nullptr || report_json == nullptr) {
        set_error(error_message, "null argument");
        return SUNN_ERROR_INVALID_ARGUMENT;
    }
    return guarded(error_message, [&]() {
        const RunOutcome outcome = run_scan(config->cfg);
        *report_json = dup_string(outcome.text);
        return outcome.all_passed ? SUNN_OK : SUNN_CHECKS_FAILED;
    });
}

sunn_status sunn_lax_spectrum(int n, double x, double u, double v, const double* z_re,
                              const double* z_im, double* eigenvalues_out, double* h_out,
                              char** error_message) {
    if (z_re == nullptr || z_im == nullptr || eigenvalues_out == nullptr || h_out == nullptr) {
        set_error(error_message, "null argument");
        return SUNN_ERROR_INVALID_ARGUMENT;
    }
    return guarded(error_message, [&]() {
        const Model model(ModelParams{n, x, u, v});
        CVec z(n);
        for (int k = 0; k < n; ++k) z[k] = Complex(z_re[k], z_im[k]);
        SectionPoint s{std::move(z)};
        require_section(s);
        const ConservedSpectrum cs = conserved_spectrum(lax_matrix(model, s));
        for (int k = 0; k < n; ++k) {
            eigenvalues_out[k] = cs.eigenvalues[k];
            h_out[k] = cs.h[k];
        }
        return SUNN_OK;
    });
}

void sunn_string_free(char* text) { std::free(text); }

}  // extern "C"
