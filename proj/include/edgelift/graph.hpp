#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace edgelift {

/// Undirected graph with a fixed orientation per edge. Node indices are
/// 0-based internally; scenario files use 1-based labels and are converted
/// on parse. Edge order is the canonical edge indexing everywhere
/// downstream.
struct Graph {
    int num_nodes = 0;
    std::vector<std::pair<int, int>> edges;  // (tail, head)

    Graph() = default;
    Graph(int n, std::vector<std::pair<int, int>> e);

    int num_edges() const { return static_cast<int>(edges.size()); }
};

/// Node-by-edge incidence matrix: column e has -1 at the tail, +1 at the
/// head of edge e.
Eigen::MatrixXd incidence_matrix(const Graph& g);

bool is_connected(const Graph& g);

/// Deterministic spanning tree: breadth-first from node 0, ties broken by
/// ascending edge index. Throws DisconnectedGraphError.
std::vector<int> spanning_tree(const Graph& g);

struct TreeEnumeration {
    std::vector<std::vector<int>> trees;  // each ascending edge-index list
    bool truncated = false;
};

/// All spanning trees in deterministic order (lexicographic by edge
/// index, include-before-exclude), stopping after `cap` trees with the
/// truncation flag set when more exist.
TreeEnumeration all_spanning_trees(const Graph& g, int cap);

/// Bipartite pattern between disagreement coordinates (left) and input
/// channels (right). Labels keep the provenance of each vertex so reports
/// and DOT output can name them.
struct BipartiteStructure {
    struct LeftLabel {
        int edge = 0;       // edge index in the source graph
        int component = 0;  // output coordinate, 0-based
    };
    struct RightLabel {
        int agent = 0;
        int channel = 0;  // input channel, 0-based
    };

    std::vector<LeftLabel> left;
    std::vector<RightLabel> right;
    std::vector<std::pair<int, int>> adjacency;  // (left index, right index)

    void validate() const;
};

struct MatchingResult {
    int size = 0;
    std::vector<std::pair<int, int>> pairs;  // (left, right), vertex-disjoint
    /// Present iff size < |left|: a subset S of left indices with
    /// |neighbors(S)| < |S| (Hall violation).
    std::optional<std::vector<int>> deficiency_witness;
};

/// Maximum-cardinality matching via Hopcroft–Karp. When the matching does
/// not saturate the left side, the deficiency witness is extracted by
/// alternating reachability from the first unmatched left vertex.
MatchingResult max_matching(const BipartiteStructure& bip);

/// Right-side neighborhood of a left subset, ascending and deduplicated.
std::vector<int> neighbor_set(const BipartiteStructure& bip, const std::vector<int>& left_subset);

/// Graphviz rendering: gray edges for structural nonzeros, highlighted
/// edges for the matching. Label vectors may be empty (indices are used).
std::string to_dot(const BipartiteStructure& bip, const MatchingResult& match,
                   const std::vector<std::string>& left_names = {},
                   const std::vector<std::string>& right_names = {});

}  // namespace edgelift
