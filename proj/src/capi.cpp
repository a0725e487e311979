#include "edgelift/edgelift.h"

#include <exception>
#include <optional>
#include <string>

#include "edgelift/errors.hpp"
#include "edgelift/scenario.hpp"

struct edgelift_scenario {
    edgelift::Scenario value;
};

struct edgelift_options {
    edgelift::RunOverrides value;
};

struct edgelift_report {
    std::string json;
    std::optional<std::string> dot;
    std::optional<std::string> csv;
    int exit_code = 0;
};

namespace {

thread_local int g_last_code = EDGELIFT_OK;
thread_local std::string g_last_message;

void clear_error() {
    g_last_code = EDGELIFT_OK;
    g_last_message.clear();
}

int set_error(int code, const std::string& message) {
    g_last_code = code;
    g_last_message = message;
    return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
    clear_error();
    try {
        return fn();
    } catch (const edgelift::Error& e) {
        return set_error(static_cast<int>(e.code()), e.what());
    } catch (const std::exception& e) {
        return set_error(EDGELIFT_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(EDGELIFT_ERR_INTERNAL, "unknown error");
    }
}

edgelift::RunOverrides overrides_of(const edgelift_options* options) {
    return options != nullptr ? options->value : edgelift::RunOverrides{};
}

std::optional<std::string> dir_of(const char* out_dir) {
    if (out_dir == nullptr) return std::nullopt;
    return std::string(out_dir);
}

}  // namespace

extern "C" {

const char* edgelift_version(void) { return "0.1.0"; }

int edgelift_last_error_code(void) { return g_last_code; }

const char* edgelift_last_error_message(void) { return g_last_message.c_str(); }

int edgelift_scenario_parse(const char* json_text, edgelift_scenario** out) {
    return guarded([&]() {
        if (json_text == nullptr || out == nullptr) {
            return set_error(EDGELIFT_ERR_INVALID_ARGUMENT, "null argument");
        }
        *out = new edgelift_scenario{edgelift::parse_scenario(json_text)};
        return EDGELIFT_OK;
    });
}

int edgelift_scenario_load_file(const char* path, edgelift_scenario** out) {
    return guarded([&]() {
        if (path == nullptr || out == nullptr) {
            return set_error(EDGELIFT_ERR_INVALID_ARGUMENT, "null argument");
        }
        *out = new edgelift_scenario{edgelift::load_scenario_file(path)};
        return EDGELIFT_OK;
    });
}

void edgelift_scenario_free(edgelift_scenario* scenario) { delete scenario; }

edgelift_options* edgelift_options_new(void) { return new edgelift_options{}; }

void edgelift_options_free(edgelift_options* options) { delete options; }

int edgelift_options_set_seed(edgelift_options* options, uint64_t seed) {
    return guarded([&]() {
        if (options == nullptr) return set_error(EDGELIFT_ERR_INVALID_ARGUMENT, "null options");
        options->value.seed = seed;
        return EDGELIFT_OK;
    });
}

int edgelift_options_set_samples(edgelift_options* options, int num_samples) {
    return guarded([&]() {
        if (options == nullptr) return set_error(EDGELIFT_ERR_INVALID_ARGUMENT, "null options");
        if (num_samples < 1) return set_error(EDGELIFT_ERR_SCHEMA, "--samples: must be >= 1");
        options->value.num_samples = num_samples;
        return EDGELIFT_OK;
    });
}

int edgelift_options_set_dt(edgelift_options* options, double dt) {
    return guarded([&]() {
        if (options == nullptr) return set_error(EDGELIFT_ERR_INVALID_ARGUMENT, "null options");
        if (!(dt > 0.0)) return set_error(EDGELIFT_ERR_SCHEMA, "--dt: must be positive");
        options->value.dt = dt;
        return EDGELIFT_OK;
    });
}

int edgelift_options_set_t_final(edgelift_options* options, double t_final) {
    return guarded([&]() {
        if (options == nullptr) return set_error(EDGELIFT_ERR_INVALID_ARGUMENT, "null options");
        if (!(t_final > 0.0)) return set_error(EDGELIFT_ERR_SCHEMA, "--t-final: must be positive");
        options->value.t_final = t_final;
        return EDGELIFT_OK;
    });
}

int edgelift_options_set_tree_cap(edgelift_options* options, int tree_cap) {
    return guarded([&]() {
        if (options == nullptr) return set_error(EDGELIFT_ERR_INVALID_ARGUMENT, "null options");
        if (tree_cap < 1) return set_error(EDGELIFT_ERR_SCHEMA, "--tree-cap: must be >= 1");
        options->value.tree_cap = tree_cap;
        return EDGELIFT_OK;
    });
}

int edgelift_run_check(const edgelift_scenario* scenario, const edgelift_options* options,
                       edgelift_report** out) {
    return guarded([&]() {
        if (scenario == nullptr || out == nullptr) {
            return set_error(EDGELIFT_ERR_INVALID_ARGUMENT, "null argument");
        }
        const auto result = edgelift::run_check(scenario->value, overrides_of(options));
        *out = new edgelift_report{result.json.dump(2) + "\n", std::nullopt, std::nullopt,
                                   result.exit_code};
        return EDGELIFT_OK;
    });
}

int edgelift_run_rank(const edgelift_scenario* scenario, const edgelift_options* options,
                      edgelift_report** out) {
    return guarded([&]() {
        if (scenario == nullptr || out == nullptr) {
            return set_error(EDGELIFT_ERR_INVALID_ARGUMENT, "null argument");
        }
        const auto json = edgelift::run_rank(scenario->value, overrides_of(options));
        *out = new edgelift_report{json.dump(2) + "\n", std::nullopt, std::nullopt, 0};
        return EDGELIFT_OK;
    });
}

int edgelift_run_matching(const edgelift_scenario* scenario, const edgelift_options* options,
                          const char* out_dir, edgelift_report** out) {
    return guarded([&]() {
        if (scenario == nullptr || out == nullptr) {
            return set_error(EDGELIFT_ERR_INVALID_ARGUMENT, "null argument");
        }
        const auto artifacts =
            edgelift::run_matching(scenario->value, overrides_of(options), dir_of(out_dir));
        *out = new edgelift_report{artifacts.json.dump(2) + "\n", artifacts.dot, std::nullopt, 0};
        return EDGELIFT_OK;
    });
}

int edgelift_run_simulate(const edgelift_scenario* scenario, const edgelift_options* options,
                          const char* out_dir, edgelift_report** out) {
    return guarded([&]() {
        if (scenario == nullptr || out == nullptr) {
            return set_error(EDGELIFT_ERR_INVALID_ARGUMENT, "null argument");
        }
        const auto artifacts =
            edgelift::run_simulate(scenario->value, overrides_of(options), dir_of(out_dir));
        *out = new edgelift_report{artifacts.report.dump(2) + "\n", std::nullopt, artifacts.csv, 0};
        return EDGELIFT_OK;
    });
}

const char* edgelift_report_json(const edgelift_report* report) {
    return report != nullptr ? report->json.c_str() : nullptr;
}

const char* edgelift_report_dot(const edgelift_report* report) {
    return report != nullptr && report->dot.has_value() ? report->dot->c_str() : nullptr;
}

const char* edgelift_report_csv(const edgelift_report* report) {
    return report != nullptr && report->csv.has_value() ? report->csv->c_str() : nullptr;
}

int edgelift_report_exit_code(const edgelift_report* report) {
    return report != nullptr ? report->exit_code : EDGELIFT_ERR_INVALID_ARGUMENT;
}

void edgelift_report_free(edgelift_report* report) { delete report; }

}  // extern "C"
