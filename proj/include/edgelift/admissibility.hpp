#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgelift/edge_space.hpp"
#include "edgelift/graph.hpp"
#include "edgelift/rng.hpp"

namespace edgelift {

/// Structural nonzeros of the tree lift matrix, taken as the union over
/// sampled states of entries exceeding the threshold (guards against
/// coincidental zeros at a single sample).
struct SparsityPattern {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<bool>> mask;  // rows x cols
    int num_samples = 0;
    double threshold = 0.0;
};

struct PointAdmissibility {
    int rank_lift = 0;      // rank A
    int rank_jacobian = 0;  // rank J
    bool admissible = false;
};

enum class Certification { certified_generic, refuted_structurally, inconclusive };

std::string to_string(Certification c);

/// One examined spanning tree with its bipartite structure and matching.
struct TreeCertificate {
    std::vector<int> tree_edges;
    SparsityPattern pattern;
    BipartiteStructure structure;
    MatchingResult matching;
};

struct AdmissibilityReport {
    // sampled numeric side
    int num_samples = 0;
    std::uint64_t seed = 0;
    std::vector<int> rank_lift_samples;
    std::vector<int> rank_jacobian_samples;
    int modal_rank_lift = 0;
    int modal_rank_jacobian = 0;
    double exact_admissible_fraction = 0.0;
    bool rank_jump = false;  // sampled Jacobian rank not constant

    // combinatorial side
    int required_matching = 0;  // (N-1) d
    std::vector<TreeCertificate> trees;
    int certified_tree = -1;  // index into trees, -1 if none certified
    bool tree_enumeration_truncated = false;
    Certification certified = Certification::inconclusive;
};

/// Per-coordinate sampling box for random states.
struct SamplerBox {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
};

/// Hopf agents sample r in [0.5, 1.5] and theta in [0, 2pi); everything
/// else samples [-1, 1] per coordinate.
SamplerBox default_sampler_box(const NetworkSystem& sys);

Eigen::VectorXd sample_state(const SamplerBox& box, Rng& rng);

struct AnalysisParams {
    int num_samples = 100;
    std::uint64_t seed = 0;
    int tree_cap = 1000;
    double structural_threshold = 1e-9;
    int pattern_samples = 5;
    ToleranceParams tol;
    std::optional<SamplerBox> box;
};

/// rank A = rank J test at one state (Im A is always contained in Im J,
/// so rank equality is equivalent to image equality).
PointAdmissibility exact_admissibility_at(const NetworkSystem& sys, const Eigen::VectorXd& x,
                                          const ToleranceParams& tol = {});

/// Numeric side only: seeded rank sampling with modal ranks and the
/// fraction of samples where the ranks agree.
AdmissibilityReport sampled_generic_admissibility(const NetworkSystem& sys,
                                                  const AnalysisParams& params);

/// Union-over-samples sparsity pattern of the tree rows of A.
SparsityPattern structural_pattern(const NetworkSystem& sys, const std::vector<int>& tree,
                                   const AnalysisParams& params);

/// Bipartite graph of the pattern: left = tree-edge output coordinates,
/// right = input channels, edges = structural nonzeros.
BipartiteStructure tree_bipartite_structure(const NetworkSystem& sys,
                                            const std::vector<int>& tree,
                                            const SparsityPattern& pattern);

/// Full certificate: enumerate spanning trees (capped), match each
/// pattern, certify on the first tree with a full matching; refute only
/// when enumeration was complete and every tree fell short. Sampled
/// numeric ranks are always cross-reported.
AdmissibilityReport matching_certificate(const NetworkSystem& sys, const AnalysisParams& params);

/// Human-readable vertex names for reports and DOT output.
std::vector<std::string> left_vertex_names(const NetworkSystem& sys,
                                           const BipartiteStructure& bip);
std::vector<std::string> right_vertex_names(const NetworkSystem& sys,
                                            const BipartiteStructure& bip);

nlohmann::ordered_json report_to_json(const AdmissibilityReport& report,
                                      const NetworkSystem& sys);

}  // namespace edgelift
