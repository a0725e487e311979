#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgelift/admissibility.hpp"
#include "edgelift/edge_space.hpp"
#include "edgelift/lift_control.hpp"
#include "edgelift/sim_engine.hpp"

namespace edgelift {

inline constexpr int kSchemaVersion = 1;

struct GraphSpec {
    int num_nodes = 0;
    std::vector<std::pair<int, int>> edges;  // 1-based, as written in the file
};

struct AgentSpec {
    std::string kind;                 // single_integrator | hopf | linear
    nlohmann::ordered_json params;    // normalized (defaults filled in)
};

struct ControllerSpec {
    std::string kind = "model_lift";  // model_lift | family | distributed
    double gain = 1.0;
    std::vector<double> family_w;               // empty = zero
    std::string weights_mode = "unit";           // "unit" | "matrix"
    std::vector<std::vector<double>> weights;    // when weights_mode == "matrix"
};

struct SimulationSpec {
    std::vector<double> x0;
    double t_final = 10.0;
    double dt = 1e-3;
    std::uint64_t seed = 0;
    bool zero_order_hold = false;
};

struct AnalysisSpec {
    int num_samples = 100;
    std::uint64_t seed = 0;
    int tree_cap = 1000;
    double rank_rtol = 1e-10;
    double residual_atol = 1e-8;
    double structural_threshold = 1e-9;
    int pattern_samples = 5;
    std::optional<std::vector<double>> box_lo;
    std::optional<std::vector<double>> box_hi;
};

/// Validated scenario; the parse normalizes defaults so that
/// parse(serialize(s)) == s holds field-for-field.
struct Scenario {
    int schema_version = kSchemaVersion;
    std::string name;
    GraphSpec graph;
    std::vector<AgentSpec> agents;
    std::optional<ControllerSpec> controller;
    std::optional<SimulationSpec> simulation;
    AnalysisSpec analysis;
};

/// Parse and validate UTF-8 JSON. Throws SchemaError carrying the JSON
/// path of the first violation.
Scenario parse_scenario(const std::string& text);

nlohmann::ordered_json serialize_scenario(const Scenario& scenario);

Scenario load_scenario_file(const std::string& path);

/// FNV-1a hash of the canonical serialization, as a hex string.
std::string scenario_digest(const Scenario& scenario);

NetworkSystem build_system(const Scenario& scenario);
ControllerConfig build_controller(const Scenario& scenario, const NetworkSystem& sys);
AnalysisParams build_analysis(const Scenario& scenario, const NetworkSystem& sys);
SimulationParams build_simulation_params(const Scenario& scenario);

/// Command-line overrides; unset fields keep the scenario values.
struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> num_samples;
    std::optional<double> dt;
    std::optional<double> t_final;
    std::optional<int> tree_cap;

    void validate() const;
};

struct CheckResult {
    AdmissibilityReport report;
    nlohmann::ordered_json json;
    int exit_code = 0;  // 0 certified, 2 refuted, 3 inconclusive
};

CheckResult run_check(const Scenario& scenario, const RunOverrides& overrides = {});

nlohmann::ordered_json run_rank(const Scenario& scenario, const RunOverrides& overrides = {});

struct MatchingArtifacts {
    nlohmann::ordered_json json;
    std::string dot;
    std::vector<std::string> files;  // written when out_dir was given
};

/// Bipartite structure and matching for the deterministic spanning tree,
/// as DOT + JSON; written to <out_dir>/<name>_matching.{dot,json} when an
/// output directory is given.
MatchingArtifacts run_matching(const Scenario& scenario, const RunOverrides& overrides = {},
                               const std::optional<std::string>& out_dir = std::nullopt);

struct SimulateArtifacts {
    Trajectory trajectory;
    SyncMetrics metrics;
    nlohmann::ordered_json report;  // digest, admissibility, metrics, artifact paths
    std::string csv;
    std::vector<std::string> files;
};

/// Closed-loop run: writes <out_dir>/<name>_trajectory.csv and
/// <name>_metrics.json when an output directory is given; the returned
/// report lists the written files.
SimulateArtifacts run_simulate(const Scenario& scenario, const RunOverrides& overrides = {},
                               const std::optional<std::string>& out_dir = std::nullopt);

/// Write-temp-then-rename so readers never observe partial content.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace edgelift
