#include "edgelift/scenario.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "edgelift/errors.hpp"
#include "edgelift/log.hpp"

namespace edgelift {

namespace {

using Json = nlohmann::ordered_json;

void check_keys(const Json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (allowed.count(key) == 0) {
            throw SchemaError(path + "." + key, "unknown key");
        }
    }
}

const Json& require_key(const Json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) throw SchemaError(path + "." + key, "missing required key");
    return obj.at(key);
}

Json require_object(const Json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    return j;
}

double get_number(const Json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    return j.get<double>();
}

double get_positive(const Json& j, const std::string& path) {
    const double v = get_number(j, path);
    if (!(v > 0.0)) throw SchemaError(path, "must be positive");
    return v;
}

int get_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
    return j.get<int>();
}

std::uint64_t get_seed(const Json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0) {
        throw SchemaError(path, "expected a nonnegative integer");
    }
    return j.get<std::uint64_t>();
}

std::string get_string(const Json& j, const std::string& path) {
    if (!j.is_string()) throw SchemaError(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> get_number_array(const Json& j, const std::string& path) {
    if (!j.is_array()) throw SchemaError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::vector<std::vector<double>> get_matrix(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw SchemaError(path, "expected a nonempty matrix");
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < j.size(); ++r) {
        rows.push_back(get_number_array(j[r], path + "[" + std::to_string(r) + "]"));
        if (rows.back().size() != rows.front().size()) {
            throw SchemaError(path, "matrix rows have unequal lengths");
        }
        if (rows.back().empty()) throw SchemaError(path, "matrix rows must be nonempty");
    }
    return rows;
}

Eigen::MatrixXd to_eigen(const std::vector<std::vector<double>>& rows) {
    Eigen::MatrixXd m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    }
    return m;
}

GraphSpec parse_graph(const Json& j) {
    const Json obj = require_object(j, "graph");
    check_keys(obj, "graph", {"num_nodes", "edges"});
    GraphSpec spec;
    spec.num_nodes = get_int(require_key(obj, "graph", "num_nodes"), "graph.num_nodes");
    if (spec.num_nodes < 1) throw SchemaError("graph.num_nodes", "must be >= 1");
    const Json& edges = require_key(obj, "graph", "edges");
    if (!edges.is_array()) throw SchemaError("graph.edges", "expected an array");
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const std::string path = "graph.edges[" + std::to_string(e) + "]";
        if (!edges[e].is_array() || edges[e].size() != 2) {
            throw SchemaError(path, "expected a pair [tail, head]");
        }
        const int tail = get_int(edges[e][0], path + "[0]");
        const int head = get_int(edges[e][1], path + "[1]");
        if (tail < 1 || tail > spec.num_nodes || head < 1 || head > spec.num_nodes) {
            throw SchemaError(path, "node index out of range 1.." + std::to_string(spec.num_nodes));
        }
        spec.edges.emplace_back(tail, head);
    }
    // delegate self-loop / duplicate checks to the graph invariants
    std::vector<std::pair<int, int>> zero_based;
    for (const auto& [t, h] : spec.edges) zero_based.emplace_back(t - 1, h - 1);
    try {
        Graph probe(spec.num_nodes, zero_based);
    } catch (const InvalidArgumentError& e) {
        throw SchemaError("graph.edges", e.what());
    }
    return spec;
}

AgentSpec parse_agent(const Json& j, const std::string& path) {
    const Json obj = require_object(j, path);
    check_keys(obj, path, {"kind", "params"});
    AgentSpec spec;
    spec.kind = get_string(require_key(obj, path, "kind"), path + ".kind");
    const Json params = obj.contains("params") ? require_object(obj.at("params"), path + ".params")
                                               : Json::object();
    const std::string ppath = path + ".params";
    if (spec.kind == "single_integrator") {
        check_keys(params, ppath, {"dim"});
        const int dim = params.contains("dim") ? get_int(params.at("dim"), ppath + ".dim") : 1;
        if (dim < 1) throw SchemaError(ppath + ".dim", "must be >= 1");
        spec.params = Json{{"dim", dim}};
    } else if (spec.kind == "hopf") {
        check_keys(params, ppath, {"omega", "actuation"});
        const double omega =
            params.contains("omega") ? get_positive(params.at("omega"), ppath + ".omega") : 1.0;
        std::string actuation = "full";
        if (params.contains("actuation")) {
            actuation = get_string(params.at("actuation"), ppath + ".actuation");
            if (actuation != "full" && actuation != "radial_only") {
                throw SchemaError(ppath + ".actuation", "must be \"full\" or \"radial_only\"");
            }
        }
        spec.params = Json{{"omega", omega}, {"actuation", actuation}};
    } else if (spec.kind == "linear") {
        check_keys(params, ppath, {"A", "B", "C"});
        const auto a = get_matrix(require_key(params, ppath, "A"), ppath + ".A");
        const auto b = get_matrix(require_key(params, ppath, "B"), ppath + ".B");
        const auto c = get_matrix(require_key(params, ppath, "C"), ppath + ".C");
        if (a.size() != a.front().size()) throw SchemaError(ppath + ".A", "must be square");
        if (b.size() != a.size()) throw SchemaError(ppath + ".B", "row count must match A");
        if (c.front().size() != a.size()) {
            throw SchemaError(ppath + ".C", "column count must match A");
        }
        spec.params = Json{{"A", a}, {"B", b}, {"C", c}};
    } else {
        throw SchemaError(path + ".kind",
                          "unknown agent kind \"" + spec.kind +
                              "\" (expected single_integrator, hopf, or linear)");
    }
    return spec;
}

AgentModel build_agent(const AgentSpec& spec) {
    if (spec.kind == "single_integrator") {
        return make_single_integrator(spec.params.at("dim").get<int>());
    }
    if (spec.kind == "hopf") {
        HopfOscillatorParams params;
        params.omega = spec.params.at("omega").get<double>();
        params.actuation = spec.params.at("actuation").get<std::string>() == "radial_only"
                               ? HopfOscillatorParams::Actuation::radial_only
                               : HopfOscillatorParams::Actuation::full;
        return make_hopf_oscillator(params);
    }
    return make_linear_agent(to_eigen(spec.params.at("A").get<std::vector<std::vector<double>>>()),
                             to_eigen(spec.params.at("B").get<std::vector<std::vector<double>>>()),
                             to_eigen(spec.params.at("C").get<std::vector<std::vector<double>>>()));
}

ControllerSpec parse_controller(const Json& j, int num_nodes, int total_input_dim) {
    const Json obj = require_object(j, "controller");
    ControllerSpec spec;
    spec.kind = obj.contains("kind") ? get_string(obj.at("kind"), "controller.kind") : "model_lift";
    if (spec.kind == "model_lift") {
        check_keys(obj, "controller", {"kind", "gain"});
    } else if (spec.kind == "family") {
        check_keys(obj, "controller", {"kind", "gain", "w"});
    } else if (spec.kind == "distributed") {
        check_keys(obj, "controller", {"kind", "gain", "weights"});
    } else {
        throw SchemaError("controller.kind",
                          "unknown controller kind \"" + spec.kind +
                              "\" (expected model_lift, family, or distributed)");
    }
    if (obj.contains("gain")) spec.gain = get_positive(obj.at("gain"), "controller.gain");
    if (spec.kind == "family" && obj.contains("w")) {
        spec.family_w = get_number_array(obj.at("w"), "controller.w");
        if (static_cast<int>(spec.family_w.size()) != total_input_dim) {
            throw SchemaError("controller.w", "length must equal the stacked input dimension " +
                                                  std::to_string(total_input_dim));
        }
    }
    if (spec.kind == "distributed") {
        if (obj.contains("weights") && !obj.at("weights").is_string()) {
            spec.weights_mode = "matrix";
            spec.weights = get_matrix(obj.at("weights"), "controller.weights");
            if (static_cast<int>(spec.weights.size()) != num_nodes ||
                static_cast<int>(spec.weights.front().size()) != num_nodes) {
                throw SchemaError("controller.weights", "must be a " + std::to_string(num_nodes) +
                                                            "x" + std::to_string(num_nodes) +
                                                            " matrix");
            }
            try {
                DiffusiveWeights probe(to_eigen(spec.weights));
            } catch (const InvalidArgumentError& e) {
                throw SchemaError("controller.weights", e.what());
            }
        } else if (obj.contains("weights")) {
            const std::string mode = get_string(obj.at("weights"), "controller.weights");
            if (mode != "unit") {
                throw SchemaError("controller.weights", "expected \"unit\" or a matrix");
            }
        }
    }
    return spec;
}

SimulationSpec parse_simulation(const Json& j, int total_state_dim) {
    const Json obj = require_object(j, "simulation");
    check_keys(obj, "simulation", {"x0", "t_final", "dt", "seed", "zero_order_hold"});
    SimulationSpec spec;
    spec.x0 = get_number_array(require_key(obj, "simulation", "x0"), "simulation.x0");
    if (static_cast<int>(spec.x0.size()) != total_state_dim) {
        throw SchemaError("simulation.x0", "length " + std::to_string(spec.x0.size()) +
                                               " must equal the stacked state dimension " +
                                               std::to_string(total_state_dim));
    }
    if (obj.contains("t_final")) spec.t_final = get_positive(obj.at("t_final"), "simulation.t_final");
    if (obj.contains("dt")) spec.dt = get_positive(obj.at("dt"), "simulation.dt");
    if (obj.contains("seed")) spec.seed = get_seed(obj.at("seed"), "simulation.seed");
    if (obj.contains("zero_order_hold")) {
        if (!obj.at("zero_order_hold").is_boolean()) {
            throw SchemaError("simulation.zero_order_hold", "expected a boolean");
        }
        spec.zero_order_hold = obj.at("zero_order_hold").get<bool>();
    }
    return spec;
}

AnalysisSpec parse_analysis(const Json& j, int total_state_dim) {
    const Json obj = require_object(j, "analysis");
    check_keys(obj, "analysis",
               {"num_samples", "seed", "tree_cap", "rank_rtol", "residual_atol",
                "structural_threshold", "pattern_samples", "sampler_box"});
    AnalysisSpec spec;
    if (obj.contains("num_samples")) {
        spec.num_samples = get_int(obj.at("num_samples"), "analysis.num_samples");
        if (spec.num_samples < 1) throw SchemaError("analysis.num_samples", "must be >= 1");
    }
    if (obj.contains("seed")) spec.seed = get_seed(obj.at("seed"), "analysis.seed");
    if (obj.contains("tree_cap")) {
        spec.tree_cap = get_int(obj.at("tree_cap"), "analysis.tree_cap");
        if (spec.tree_cap < 1) throw SchemaError("analysis.tree_cap", "must be >= 1");
    }
    if (obj.contains("rank_rtol")) {
        spec.rank_rtol = get_positive(obj.at("rank_rtol"), "analysis.rank_rtol");
        if (spec.rank_rtol >= 1.0) throw SchemaError("analysis.rank_rtol", "must be < 1");
    }
    if (obj.contains("residual_atol")) {
        spec.residual_atol = get_positive(obj.at("residual_atol"), "analysis.residual_atol");
        if (spec.residual_atol >= 1.0) throw SchemaError("analysis.residual_atol", "must be < 1");
    }
    if (obj.contains("structural_threshold")) {
        spec.structural_threshold =
            get_positive(obj.at("structural_threshold"), "analysis.structural_threshold");
    }
    if (obj.contains("pattern_samples")) {
        spec.pattern_samples = get_int(obj.at("pattern_samples"), "analysis.pattern_samples");
        if (spec.pattern_samples < 1) throw SchemaError("analysis.pattern_samples", "must be >= 1");
    }
    if (obj.contains("sampler_box")) {
        const Json box = require_object(obj.at("sampler_box"), "analysis.sampler_box");
        check_keys(box, "analysis.sampler_box", {"lo", "hi"});
        spec.box_lo = get_number_array(require_key(box, "analysis.sampler_box", "lo"),
                                       "analysis.sampler_box.lo");
        spec.box_hi = get_number_array(require_key(box, "analysis.sampler_box", "hi"),
                                       "analysis.sampler_box.hi");
        if (static_cast<int>(spec.box_lo->size()) != total_state_dim ||
            static_cast<int>(spec.box_hi->size()) != total_state_dim) {
            throw SchemaError("analysis.sampler_box",
                              "lo and hi must have the stacked state dimension " +
                                  std::to_string(total_state_dim));
        }
        for (std::size_t k = 0; k < spec.box_lo->size(); ++k) {
            if (!((*spec.box_lo)[k] < (*spec.box_hi)[k])) {
                throw SchemaError("analysis.sampler_box", "lo must be strictly below hi");
            }
        }
    }
    return spec;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    const Json root = Json::parse(text, nullptr, false);
    if (root.is_discarded()) throw SchemaError("$", "input is not valid JSON");
    if (!root.is_object()) throw SchemaError("$", "expected a JSON object");
    check_keys(root, "$",
               {"schema_version", "name", "graph", "agents", "controller", "simulation",
                "analysis"});

    Scenario scenario;
    scenario.schema_version =
        get_int(require_key(root, "$", "schema_version"), "schema_version");
    if (scenario.schema_version != kSchemaVersion) {
        throw SchemaError("schema_version",
                          "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");
    }
    if (root.contains("name")) scenario.name = get_string(root.at("name"), "name");
    scenario.graph = parse_graph(require_key(root, "$", "graph"));

    const Json& agents = require_key(root, "$", "agents");
    if (!agents.is_array() || agents.empty()) throw SchemaError("agents", "expected a nonempty array");
    if (static_cast<int>(agents.size()) != scenario.graph.num_nodes) {
        throw SchemaError("agents", "agent count " + std::to_string(agents.size()) +
                                        " must equal graph.num_nodes " +
                                        std::to_string(scenario.graph.num_nodes));
    }
    int total_state_dim = 0;
    int total_input_dim = 0;
    int shared_output_dim = -1;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const std::string path = "agents[" + std::to_string(i) + "]";
        scenario.agents.push_back(parse_agent(agents[i], path));
        const AgentModel model = build_agent(scenario.agents.back());
        if (shared_output_dim < 0) shared_output_dim = model.output_dim;
        if (model.output_dim != shared_output_dim) {
            throw SchemaError(path, "output dimension " + std::to_string(model.output_dim) +
                                        " differs from the shared output dimension " +
                                        std::to_string(shared_output_dim));
        }
        total_state_dim += model.state_dim;
        total_input_dim += model.input_dim;
    }

    if (root.contains("controller")) {
        scenario.controller =
            parse_controller(root.at("controller"), scenario.graph.num_nodes, total_input_dim);
    }
    if (root.contains("simulation")) {
        scenario.simulation = parse_simulation(root.at("simulation"), total_state_dim);
    }
    if (root.contains("analysis")) {
        scenario.analysis = parse_analysis(root.at("analysis"), total_state_dim);
    }
    return scenario;
}

nlohmann::ordered_json serialize_scenario(const Scenario& scenario) {
    Json root;
    root["schema_version"] = scenario.schema_version;
    root["name"] = scenario.name;
    Json graph;
    graph["num_nodes"] = scenario.graph.num_nodes;
    Json edges = Json::array();
    for (const auto& [t, h] : scenario.graph.edges) edges.push_back({t, h});
    graph["edges"] = edges;
    root["graph"] = graph;
    Json agents = Json::array();
    for (const AgentSpec& spec : scenario.agents) {
        agents.push_back(Json{{"kind", spec.kind}, {"params", spec.params}});
    }
    root["agents"] = agents;
    if (scenario.controller.has_value()) {
        const ControllerSpec& c = *scenario.controller;
        Json controller;
        controller["kind"] = c.kind;
        controller["gain"] = c.gain;
        if (c.kind == "family" && !c.family_w.empty()) controller["w"] = c.family_w;
        if (c.kind == "distributed") {
            if (c.weights_mode == "matrix") {
                controller["weights"] = c.weights;
            } else {
                controller["weights"] = "unit";
            }
        }
        root["controller"] = controller;
    }
    if (scenario.simulation.has_value()) {
        const SimulationSpec& s = *scenario.simulation;
        root["simulation"] = Json{{"x0", s.x0},
                                  {"t_final", s.t_final},
                                  {"dt", s.dt},
                                  {"seed", s.seed},
                                  {"zero_order_hold", s.zero_order_hold}};
    }
    const AnalysisSpec& a = scenario.analysis;
    Json analysis;
    analysis["num_samples"] = a.num_samples;
    analysis["seed"] = a.seed;
    analysis["tree_cap"] = a.tree_cap;
    analysis["rank_rtol"] = a.rank_rtol;
    analysis["residual_atol"] = a.residual_atol;
    analysis["structural_threshold"] = a.structural_threshold;
    analysis["pattern_samples"] = a.pattern_samples;
    if (a.box_lo.has_value() && a.box_hi.has_value()) {
        analysis["sampler_box"] = Json{{"lo", *a.box_lo}, {"hi", *a.box_hi}};
    }
    root["analysis"] = analysis;
    return root;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string scenario_digest(const Scenario& scenario) {
    const std::string dump = serialize_scenario(scenario).dump();
    std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a 64
    for (unsigned char c : dump) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

NetworkSystem build_system(const Scenario& scenario) {
    std::vector<std::pair<int, int>> zero_based;
    for (const auto& [t, h] : scenario.graph.edges) zero_based.emplace_back(t - 1, h - 1);
    std::vector<AgentModel> models;
    models.reserve(scenario.agents.size());
    for (const AgentSpec& spec : scenario.agents) models.push_back(build_agent(spec));
    return NetworkSystem(Graph(scenario.graph.num_nodes, zero_based), std::move(models));
}

ControllerConfig build_controller(const Scenario& scenario, const NetworkSystem& sys) {
    ControllerConfig config;
    config.tol = ToleranceParams{scenario.analysis.rank_rtol, scenario.analysis.residual_atol};
    if (!scenario.controller.has_value()) return config;  // model_lift, gain 1
    const ControllerSpec& spec = *scenario.controller;
    config.gain = spec.gain;
    if (spec.kind == "model_lift") {
        config.kind = ControllerKind::model_lift;
    } else if (spec.kind == "family") {
        config.kind = ControllerKind::family;
        if (!spec.family_w.empty()) {
            config.family_w = Eigen::Map<const Eigen::VectorXd>(
                spec.family_w.data(), static_cast<Eigen::Index>(spec.family_w.size()));
        }
    } else {
        config.kind = ControllerKind::distributed;
        if (spec.weights_mode == "matrix") {
            Eigen::MatrixXd w(sys.num_agents(), sys.num_agents());
            for (int r = 0; r < sys.num_agents(); ++r) {
                for (int c = 0; c < sys.num_agents(); ++c) w(r, c) = spec.weights[r][c];
            }
            config.weights = DiffusiveWeights(std::move(w));
        } else {
            config.weights = DiffusiveWeights::unit(sys.graph());
        }
    }
    return config;
}

AnalysisParams build_analysis(const Scenario& scenario, const NetworkSystem& sys) {
    const AnalysisSpec& spec = scenario.analysis;
    AnalysisParams params;
    params.num_samples = spec.num_samples;
    params.seed = spec.seed;
    params.tree_cap = spec.tree_cap;
    params.structural_threshold = spec.structural_threshold;
    params.pattern_samples = spec.pattern_samples;
    params.tol = ToleranceParams{spec.rank_rtol, spec.residual_atol};
    if (spec.box_lo.has_value() && spec.box_hi.has_value()) {
        SamplerBox box;
        box.lo = Eigen::Map<const Eigen::VectorXd>(spec.box_lo->data(),
                                                   static_cast<Eigen::Index>(spec.box_lo->size()));
        box.hi = Eigen::Map<const Eigen::VectorXd>(spec.box_hi->data(),
                                                   static_cast<Eigen::Index>(spec.box_hi->size()));
        params.box = box;
    }
    (void)sys;
    return params;
}

SimulationParams build_simulation_params(const Scenario& scenario) {
    if (!scenario.simulation.has_value()) {
        throw InvalidArgumentError("scenario has no simulation block");
    }
    SimulationParams params;
    params.t_final = scenario.simulation->t_final;
    params.dt = scenario.simulation->dt;
    params.zero_order_hold = scenario.simulation->zero_order_hold;
    params.gain = scenario.controller.has_value() ? scenario.controller->gain : 1.0;
    params.tol = ToleranceParams{scenario.analysis.rank_rtol, scenario.analysis.residual_atol};
    return params;
}

void RunOverrides::validate() const {
    if (num_samples.has_value() && *num_samples < 1) {
        throw SchemaError("--samples", "must be >= 1");
    }
    if (dt.has_value() && !(*dt > 0.0)) throw SchemaError("--dt", "must be positive");
    if (t_final.has_value() && !(*t_final > 0.0)) throw SchemaError("--t-final", "must be positive");
    if (tree_cap.has_value() && *tree_cap < 1) throw SchemaError("--tree-cap", "must be >= 1");
}

namespace {

AnalysisParams analysis_with_overrides(const Scenario& scenario, const NetworkSystem& sys,
                                       const RunOverrides& overrides) {
    AnalysisParams params = build_analysis(scenario, sys);
    if (overrides.seed.has_value()) params.seed = *overrides.seed;
    if (overrides.num_samples.has_value()) params.num_samples = *overrides.num_samples;
    if (overrides.tree_cap.has_value()) params.tree_cap = *overrides.tree_cap;
    return params;
}

std::string scenario_stem(const Scenario& scenario) {
    return scenario.name.empty() ? "scenario" : scenario.name;
}

Json metrics_to_json(const SyncMetrics& metrics, const MetricsWindow& window) {
    Json j;
    j["fitted_rate"] = metrics.fitted_rate;
    j["final_edge_norm"] = metrics.final_edge_norm;
    j["residual_floor"] = metrics.residual_floor;
    j["max_realization_rel_err"] = metrics.max_realization_rel_err;
    if (metrics.phase_offset_drift.has_value()) {
        j["phase_offset_drift"] = *metrics.phase_offset_drift;
    }
    j["rate_window"] = {window.rate_lo, window.rate_hi};
    j["tail_window"] = {window.tail_lo, window.tail_hi};
    return j;
}

}  // namespace

CheckResult run_check(const Scenario& scenario, const RunOverrides& overrides) {
    overrides.validate();
    const NetworkSystem sys = build_system(scenario);
    const AnalysisParams params = analysis_with_overrides(scenario, sys, overrides);
    CheckResult result;
    result.report = matching_certificate(sys, params);
    Json j;
    j["name"] = scenario_stem(scenario);
    j["digest"] = scenario_digest(scenario);
    j.update(report_to_json(result.report, sys));
    result.json = j;
    switch (result.report.certified) {
        case Certification::certified_generic: result.exit_code = 0; break;
        case Certification::refuted_structurally: result.exit_code = 2; break;
        case Certification::inconclusive: result.exit_code = 3; break;
    }
    return result;
}

nlohmann::ordered_json run_rank(const Scenario& scenario, const RunOverrides& overrides) {
    overrides.validate();
    const NetworkSystem sys = build_system(scenario);
    const AnalysisParams params = analysis_with_overrides(scenario, sys, overrides);
    const AdmissibilityReport report = sampled_generic_admissibility(sys, params);
    Json j;
    j["name"] = scenario_stem(scenario);
    j["digest"] = scenario_digest(scenario);
    j["num_samples"] = report.num_samples;
    j["seed"] = report.seed;
    std::map<std::pair<int, int>, int> counts;
    for (std::size_t i = 0; i < report.rank_lift_samples.size(); ++i) {
        ++counts[{report.rank_lift_samples[i], report.rank_jacobian_samples[i]}];
    }
    Json table = Json::array();
    for (const auto& [ranks, count] : counts) {
        table.push_back(Json{{"rank_lift", ranks.first},
                             {"rank_jacobian", ranks.second},
                             {"count", count}});
    }
    j["rank_table"] = table;
    j["modal_rank_lift"] = report.modal_rank_lift;
    j["modal_rank_jacobian"] = report.modal_rank_jacobian;
    j["exact_admissible_fraction"] = report.exact_admissible_fraction;
    j["rank_jump"] = report.rank_jump;
    return j;
}

MatchingArtifacts run_matching(const Scenario& scenario, const RunOverrides& overrides,
                               const std::optional<std::string>& out_dir) {
    overrides.validate();
    const NetworkSystem sys = build_system(scenario);
    const AnalysisParams params = analysis_with_overrides(scenario, sys, overrides);
    const std::vector<int> tree = spanning_tree(sys.graph());
    const SparsityPattern pattern = structural_pattern(sys, tree, params);
    const BipartiteStructure structure = tree_bipartite_structure(sys, tree, pattern);
    const MatchingResult matching = max_matching(structure);
    const auto lnames = left_vertex_names(sys, structure);
    const auto rnames = right_vertex_names(sys, structure);

    MatchingArtifacts artifacts;
    artifacts.dot = to_dot(structure, matching, lnames, rnames);
    Json j;
    j["name"] = scenario_stem(scenario);
    j["digest"] = scenario_digest(scenario);
    j["tree_edges"] = tree;
    j["left"] = lnames;
    j["right"] = rnames;
    Json adjacency = Json::array();
    for (const auto& [l, r] : structure.adjacency) adjacency.push_back({l, r});
    j["adjacency"] = adjacency;
    j["matching_number"] = matching.size;
    j["required_matching"] = (sys.graph().num_nodes - 1) * sys.output_dim();
    Json pairs = Json::array();
    for (const auto& [l, r] : matching.pairs) pairs.push_back({lnames[l], rnames[r]});
    j["matching_named"] = pairs;
    if (matching.deficiency_witness.has_value()) {
        Json witness = Json::array();
        for (int l : *matching.deficiency_witness) witness.push_back(lnames[l]);
        j["hall_witness"] = witness;
        Json gamma = Json::array();
        for (int r : neighbor_set(structure, *matching.deficiency_witness)) {
            gamma.push_back(rnames[r]);
        }
        j["hall_neighborhood"] = gamma;
    }
    artifacts.json = j;

    if (out_dir.has_value()) {
        const std::filesystem::path dir(*out_dir);
        const std::string stem = scenario_stem(scenario);
        const std::string dot_path = (dir / (stem + "_matching.dot")).string();
        const std::string json_path = (dir / (stem + "_matching.json")).string();
        atomic_write_file(dot_path, artifacts.dot);
        atomic_write_file(json_path, artifacts.json.dump(2) + "\n");
        artifacts.files = {dot_path, json_path};
    }
    return artifacts;
}

SimulateArtifacts run_simulate(const Scenario& scenario, const RunOverrides& overrides,
                               const std::optional<std::string>& out_dir) {
    overrides.validate();
    if (!scenario.simulation.has_value()) {
        throw SchemaError("simulation", "missing (required by simulate)");
    }
    const NetworkSystem sys = build_system(scenario);
    const ControllerConfig controller_config = build_controller(scenario, sys);
    const StateFeedback controller = controller_closure(sys, controller_config);

    SimulationParams sim_params = build_simulation_params(scenario);
    if (overrides.dt.has_value()) sim_params.dt = *overrides.dt;
    if (overrides.t_final.has_value()) sim_params.t_final = *overrides.t_final;

    SimulateArtifacts artifacts;
    artifacts.trajectory = simulate(sys, controller,
                                    Eigen::Map<const Eigen::VectorXd>(
                                        scenario.simulation->x0.data(),
                                        static_cast<Eigen::Index>(scenario.simulation->x0.size())),
                                    sim_params);
    const MetricsWindow window = MetricsWindow::defaults_for(sim_params.t_final);
    artifacts.metrics = compute_metrics(artifacts.trajectory, window);
    artifacts.metrics.phase_offset_drift = hopf_phase_offset_drift(sys, artifacts.trajectory);

    std::ostringstream csv;
    write_trajectory_csv(artifacts.trajectory, csv);
    artifacts.csv = csv.str();

    const AnalysisParams analysis = analysis_with_overrides(scenario, sys, overrides);
    const AdmissibilityReport admissibility = matching_certificate(sys, analysis);

    Json report;
    report["name"] = scenario_stem(scenario);
    report["digest"] = scenario_digest(scenario);
    report["seed"] = overrides.seed.value_or(scenario.simulation->seed);
    report["t_final"] = sim_params.t_final;
    report["dt"] = sim_params.dt;
    report["admissibility"] = report_to_json(admissibility, sys);
    report["metrics"] = metrics_to_json(artifacts.metrics, window);

    Json files = Json::object();
    if (out_dir.has_value()) {
        const std::filesystem::path dir(*out_dir);
        const std::string stem = scenario_stem(scenario);
        const std::string csv_path = (dir / (stem + "_trajectory.csv")).string();
        const std::string metrics_path = (dir / (stem + "_metrics.json")).string();
        atomic_write_file(csv_path, artifacts.csv);
        atomic_write_file(metrics_path, metrics_to_json(artifacts.metrics, window).dump(2) + "\n");
        files["trajectory_csv"] = csv_path;
        files["metrics_json"] = metrics_path;
        artifacts.files = {csv_path, metrics_path};
    }
    report["artifacts"] = files;
    artifacts.report = report;
    return artifacts;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(target.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + target.parent_path().string());
    }
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.good()) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path);
}

}  // namespace edgelift
