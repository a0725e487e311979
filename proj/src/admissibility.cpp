#include "edgelift/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "edgelift/errors.hpp"
#include "edgelift/log.hpp"
#include "edgelift/numlin.hpp"

namespace edgelift {

std::string to_string(Certification c) {
    switch (c) {
        case Certification::certified_generic: return "certified_generic";
        case Certification::refuted_structurally: return "refuted_structurally";
        case Certification::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

SamplerBox default_sampler_box(const NetworkSystem& sys) {
    SamplerBox box;
    box.lo.resize(sys.total_state_dim());
    box.hi.resize(sys.total_state_dim());
    for (int i = 0; i < sys.num_agents(); ++i) {
        const int off = sys.state_offset(i);
        if (sys.agent(i).kind == "hopf") {
            box.lo(off) = 0.5;
            box.hi(off) = 1.5;
            box.lo(off + 1) = 0.0;
            box.hi(off + 1) = 2.0 * M_PI;
        } else {
            for (int k = 0; k < sys.agent(i).state_dim; ++k) {
                box.lo(off + k) = -1.0;
                box.hi(off + k) = 1.0;
            }
        }
    }
    return box;
}

Eigen::VectorXd sample_state(const SamplerBox& box, Rng& rng) {
    Eigen::VectorXd x(box.lo.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        x(k) = rng.uniform(box.lo(k), box.hi(k));
    }
    return x;
}

PointAdmissibility exact_admissibility_at(const NetworkSystem& sys, const Eigen::VectorXd& x,
                                          const ToleranceParams& tol) {
    const Eigen::MatrixXd j = edge_jacobian(sys, x);
    const Eigen::MatrixXd a = j * sys.stacked_input_map(x);
    PointAdmissibility result;
    result.rank_lift = numerical_rank(a, tol);
    result.rank_jacobian = numerical_rank(j, tol);
    result.admissible = result.rank_lift == result.rank_jacobian;
    return result;
}

namespace {

int modal_value(const std::vector<int>& values) {
    std::map<int, int> counts;
    for (int v : values) ++counts[v];
    int best = 0, best_count = -1;
    for (const auto& [v, c] : counts) {
        if (c > best_count) {
            best = v;
            best_count = c;
        }
    }
    return best;
}

SamplerBox resolve_box(const NetworkSystem& sys, const AnalysisParams& params) {
    if (params.box.has_value()) {
        if (params.box->lo.size() != sys.total_state_dim() ||
            params.box->hi.size() != sys.total_state_dim()) {
            throw InvalidArgumentError("sampler box dimension must match the stacked state");
        }
        return *params.box;
    }
    return default_sampler_box(sys);
}

}  // namespace

AdmissibilityReport sampled_generic_admissibility(const NetworkSystem& sys,
                                                  const AnalysisParams& params) {
    if (params.num_samples < 1) throw InvalidArgumentError("num_samples must be >= 1");
    const SamplerBox box = resolve_box(sys, params);
    Rng rng(params.seed);
    AdmissibilityReport report;
    report.num_samples = params.num_samples;
    report.seed = params.seed;
    report.required_matching = (sys.graph().num_nodes - 1) * sys.output_dim();
    int agree = 0;
    for (int s = 0; s < params.num_samples; ++s) {
        const auto point = exact_admissibility_at(sys, sample_state(box, rng), params.tol);
        report.rank_lift_samples.push_back(point.rank_lift);
        report.rank_jacobian_samples.push_back(point.rank_jacobian);
        if (point.admissible) ++agree;
    }
    report.modal_rank_lift = modal_value(report.rank_lift_samples);
    report.modal_rank_jacobian = modal_value(report.rank_jacobian_samples);
    report.exact_admissible_fraction =
        static_cast<double>(agree) / static_cast<double>(params.num_samples);
    report.rank_jump = std::any_of(report.rank_jacobian_samples.begin(),
                                   report.rank_jacobian_samples.end(),
                                   [&](int r) { return r != report.modal_rank_jacobian; });
    if (report.rank_jump) {
        log::warn("sampled Jacobian rank is not constant; results may straddle a rank drop");
    }
    return report;
}

SparsityPattern structural_pattern(const NetworkSystem& sys, const std::vector<int>& tree,
                                   const AnalysisParams& params) {
    if (params.pattern_samples < 1) throw InvalidArgumentError("pattern_samples must be >= 1");
    if (params.structural_threshold <= 0.0) {
        throw InvalidArgumentError("structural threshold must be positive");
    }
    const int d = sys.output_dim();
    SparsityPattern pattern;
    pattern.rows = static_cast<int>(tree.size()) * d;
    pattern.cols = sys.total_input_dim();
    pattern.num_samples = params.pattern_samples;
    pattern.threshold = params.structural_threshold;
    pattern.mask.assign(pattern.rows, std::vector<bool>(pattern.cols, false));

    const SamplerBox box = resolve_box(sys, params);
    Rng rng(params.seed);
    for (int s = 0; s < params.pattern_samples; ++s) {
        const Eigen::VectorXd x = sample_state(box, rng);
        const Eigen::MatrixXd a = edge_jacobian(sys, x) * sys.stacked_input_map(x);
        for (std::size_t t = 0; t < tree.size(); ++t) {
            for (int k = 0; k < d; ++k) {
                const int row_full = tree[t] * d + k;
                for (int c = 0; c < pattern.cols; ++c) {
                    if (std::abs(a(row_full, c)) > pattern.threshold) {
                        pattern.mask[t * d + k][c] = true;
                    }
                }
            }
        }
    }
    return pattern;
}

BipartiteStructure tree_bipartite_structure(const NetworkSystem& sys,
                                            const std::vector<int>& tree,
                                            const SparsityPattern& pattern) {
    const int d = sys.output_dim();
    BipartiteStructure bip;
    for (std::size_t t = 0; t < tree.size(); ++t) {
        for (int k = 0; k < d; ++k) bip.left.push_back({tree[t], k});
    }
    for (int i = 0; i < sys.num_agents(); ++i) {
        for (int c = 0; c < sys.agent(i).input_dim; ++c) bip.right.push_back({i, c});
    }
    for (int l = 0; l < pattern.rows; ++l) {
        for (int r = 0; r < pattern.cols; ++r) {
            if (pattern.mask[l][r]) bip.adjacency.emplace_back(l, r);
        }
    }
    return bip;
}

AdmissibilityReport matching_certificate(const NetworkSystem& sys, const AnalysisParams& params) {
    if (!is_connected(sys.graph())) throw DisconnectedGraphError();
    AdmissibilityReport report = sampled_generic_admissibility(sys, params);

    const TreeEnumeration enumeration = all_spanning_trees(sys.graph(), params.tree_cap);
    report.tree_enumeration_truncated = enumeration.truncated;
    if (enumeration.truncated) {
        log::info("spanning-tree enumeration truncated at cap " + std::to_string(params.tree_cap));
    }
    for (const auto& tree : enumeration.trees) {
        TreeCertificate cert;
        cert.tree_edges = tree;
        cert.pattern = structural_pattern(sys, tree, params);
        cert.structure = tree_bipartite_structure(sys, tree, cert.pattern);
        cert.matching = max_matching(cert.structure);
        report.trees.push_back(std::move(cert));
        if (report.trees.back().matching.size == report.required_matching) {
            report.certified_tree = static_cast<int>(report.trees.size()) - 1;
            break;
        }
    }

    if (report.certified_tree >= 0) {
        report.certified = Certification::certified_generic;
    } else if (!enumeration.truncated) {
        report.certified = Certification::refuted_structurally;
    } else {
        report.certified = Certification::inconclusive;
    }
    return report;
}

std::vector<std::string> left_vertex_names(const NetworkSystem& sys,
                                           const BipartiteStructure& bip) {
    std::vector<std::string> names;
    names.reserve(bip.left.size());
    for (const auto& label : bip.left) {
        const auto& [tail, head] = sys.graph().edges[label.edge];
        names.push_back("(" + std::to_string(tail + 1) + std::to_string(head + 1) + "," +
                        std::to_string(label.component + 1) + ")");
    }
    return names;
}

std::vector<std::string> right_vertex_names(const NetworkSystem& sys,
                                            const BipartiteStructure& bip) {
    std::vector<std::string> names;
    names.reserve(bip.right.size());
    for (const auto& label : bip.right) {
        const auto& channels = sys.agent(label.agent).input_channel_names;
        const std::string channel = label.channel < static_cast<int>(channels.size())
                                        ? channels[label.channel]
                                        : std::to_string(label.channel + 1);
        names.push_back("u_" + channel + "," + std::to_string(label.agent + 1));
    }
    return names;
}

nlohmann::ordered_json report_to_json(const AdmissibilityReport& report,
                                      const NetworkSystem& sys) {
    nlohmann::ordered_json j;
    j["verdict"] = to_string(report.certified);
    j["required_matching"] = report.required_matching;
    j["tree_enumeration_truncated"] = report.tree_enumeration_truncated;
    j["trees_examined"] = report.trees.size();

    nlohmann::ordered_json trees = nlohmann::ordered_json::array();
    for (std::size_t t = 0; t < report.trees.size(); ++t) {
        const TreeCertificate& cert = report.trees[t];
        nlohmann::ordered_json tj;
        tj["tree_edges"] = cert.tree_edges;
        tj["matching_number"] = cert.matching.size;
        tj["matching_pairs"] = cert.matching.pairs;
        const auto lnames = left_vertex_names(sys, cert.structure);
        const auto rnames = right_vertex_names(sys, cert.structure);
        nlohmann::ordered_json named = nlohmann::ordered_json::array();
        for (const auto& [l, r] : cert.matching.pairs) {
            named.push_back({lnames[l], rnames[r]});
        }
        tj["matching_named"] = named;
        if (cert.matching.deficiency_witness.has_value()) {
            const auto& witness = *cert.matching.deficiency_witness;
            nlohmann::ordered_json wj;
            wj["left_indices"] = witness;
            nlohmann::ordered_json wl = nlohmann::ordered_json::array();
            for (int l : witness) wl.push_back(lnames[l]);
            wj["left_named"] = wl;
            const auto gamma = neighbor_set(cert.structure, witness);
            wj["neighborhood_size"] = gamma.size();
            nlohmann::ordered_json gl = nlohmann::ordered_json::array();
            for (int r : gamma) gl.push_back(rnames[r]);
            wj["neighborhood_named"] = gl;
            tj["hall_witness"] = wj;
        }
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : cert.pattern.mask) {
            std::string bits;
            for (bool v : row) bits.push_back(v ? '1' : '0');
            rows.push_back(bits);
        }
        tj["pattern_rows"] = rows;
        tj["certifying"] = static_cast<int>(t) == report.certified_tree;
        trees.push_back(std::move(tj));
    }
    j["trees"] = trees;

    nlohmann::ordered_json sampled;
    sampled["num_samples"] = report.num_samples;
    sampled["seed"] = report.seed;
    sampled["modal_rank_lift"] = report.modal_rank_lift;
    sampled["modal_rank_jacobian"] = report.modal_rank_jacobian;
    sampled["exact_admissible_fraction"] = report.exact_admissible_fraction;
    sampled["rank_jump"] = report.rank_jump;
    sampled["rank_lift_samples"] = report.rank_lift_samples;
    sampled["rank_jacobian_samples"] = report.rank_jacobian_samples;
    j["sampled"] = sampled;
    return j;
}

}  // namespace edgelift
