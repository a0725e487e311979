#include "edgelift/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "edgelift/errors.hpp"

namespace edgelift {

Graph::Graph(int n, std::vector<std::pair<int, int>> e) : num_nodes(n), edges(std::move(e)) {
    if (num_nodes < 1) throw InvalidArgumentError("graph needs at least one node");
    std::set<std::pair<int, int>> seen;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto [i, j] = edges[k];
        if (i < 0 || i >= num_nodes || j < 0 || j >= num_nodes) {
            throw InvalidArgumentError("edge " + std::to_string(k) + " references a node out of range");
        }
        if (i == j) throw InvalidArgumentError("edge " + std::to_string(k) + " is a self-loop");
        const auto key = std::minmax(i, j);
        if (!seen.insert({key.first, key.second}).second) {
            throw InvalidArgumentError("edge " + std::to_string(k) + " duplicates an earlier edge");
        }
    }
}

Eigen::MatrixXd incidence_matrix(const Graph& g) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(g.num_nodes, g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e) {
        b(g.edges[e].first, e) = -1.0;
        b(g.edges[e].second, e) = 1.0;
    }
    return b;
}

bool is_connected(const Graph& g) {
    if (g.num_nodes == 1) return true;
    std::vector<std::vector<int>> adj(g.num_nodes);
    for (const auto& [i, j] : g.edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    std::vector<bool> seen(g.num_nodes, false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    int count = 1;
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v : adj[u]) {
            if (!seen[v]) {
                seen[v] = true;
                ++count;
                q.push(v);
            }
        }
    }
    return count == g.num_nodes;
}

std::vector<int> spanning_tree(const Graph& g) {
    if (!is_connected(g)) throw DisconnectedGraphError();
    // incident edge lists kept in ascending edge index for the tie-break
    std::vector<std::vector<int>> incident(g.num_nodes);
    for (int e = 0; e < g.num_edges(); ++e) {
        incident[g.edges[e].first].push_back(e);
        incident[g.edges[e].second].push_back(e);
    }
    std::vector<bool> visited(g.num_nodes, false);
    std::vector<int> tree;
    std::queue<int> q;
    visited[0] = true;
    q.push(0);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int e : incident[u]) {
            const int v = g.edges[e].first == u ? g.edges[e].second : g.edges[e].first;
            if (!visited[v]) {
                visited[v] = true;
                tree.push_back(e);
                q.push(v);
            }
        }
    }
    std::sort(tree.begin(), tree.end());
    return tree;
}

namespace {

struct Dsu {
    std::vector<int> parent;

    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }

    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

// True when the included edges plus the still-undecided suffix can connect
// every node; dead branches are cut on this check.
bool can_still_span(const Graph& g, const Dsu& included, int next_edge) {
    Dsu d = included;
    int components = 0;
    for (int v = 0; v < g.num_nodes; ++v) {
        if (d.find(v) == v) ++components;
    }
    for (int e = next_edge; e < g.num_edges(); ++e) {
        if (d.unite(g.edges[e].first, g.edges[e].second)) --components;
    }
    return components == 1;
}

struct TreeSearch {
    const Graph& g;
    int cap;
    TreeEnumeration out;
    std::vector<int> current;

    bool full() const { return static_cast<int>(out.trees.size()) >= cap; }

    // include-first recursion over ascending edge indices
    void run(int idx, Dsu dsu, int included) {
        if (included == g.num_nodes - 1) {
            if (full()) {
                out.truncated = true;
                return;
            }
            out.trees.push_back(current);
            return;
        }
        if (idx == g.num_edges() || out.truncated) return;
        if (!can_still_span(g, dsu, idx)) return;

        Dsu with = dsu;
        if (with.unite(g.edges[idx].first, g.edges[idx].second)) {
            current.push_back(idx);
            run(idx + 1, with, included + 1);
            current.pop_back();
            if (out.truncated) return;
        }
        run(idx + 1, dsu, included);
    }
};

}  // namespace

TreeEnumeration all_spanning_trees(const Graph& g, int cap) {
    if (cap < 1) throw InvalidArgumentError("tree cap must be positive");
    if (!is_connected(g)) throw DisconnectedGraphError();
    TreeSearch search{g, cap, {}, {}};
    if (g.num_nodes == 1) {
        search.out.trees.push_back({});
        return search.out;
    }
    search.run(0, Dsu(g.num_nodes), 0);
    return search.out;
}

void BipartiteStructure::validate() const {
    for (const auto& [l, r] : adjacency) {
        if (l < 0 || l >= static_cast<int>(left.size()) || r < 0 ||
            r >= static_cast<int>(right.size())) {
            throw InvalidArgumentError("bipartite adjacency references an invalid vertex");
        }
    }
}

namespace {

constexpr int kFree = -1;

struct HopcroftKarp {
    int nl, nr;
    std::vector<std::vector<int>> adj;  // left -> rights
    std::vector<int> match_l, match_r;  // partner or kFree
    std::vector<int> dist;

    explicit HopcroftKarp(const BipartiteStructure& bip)
        : nl(static_cast<int>(bip.left.size())),
          nr(static_cast<int>(bip.right.size())),
          adj(nl),
          match_l(nl, kFree),
          match_r(nr, kFree),
          dist(nl) {
        for (const auto& [l, r] : bip.adjacency) adj[l].push_back(r);
        for (auto& list : adj) {
            std::sort(list.begin(), list.end());
            list.erase(std::unique(list.begin(), list.end()), list.end());
        }
    }

    bool bfs() {
        std::deque<int> q;
        bool reachable_free_right = false;
        for (int l = 0; l < nl; ++l) {
            if (match_l[l] == kFree) {
                dist[l] = 0;
                q.push_back(l);
            } else {
                dist[l] = -1;
            }
        }
        while (!q.empty()) {
            const int l = q.front();
            q.pop_front();
            for (int r : adj[l]) {
                const int next = match_r[r];
                if (next == kFree) {
                    reachable_free_right = true;
                } else if (dist[next] == -1) {
                    dist[next] = dist[l] + 1;
                    q.push_back(next);
                }
            }
        }
        return reachable_free_right;
    }

    bool dfs(int l) {
        for (int r : adj[l]) {
            const int next = match_r[r];
            if (next == kFree || (dist[next] == dist[l] + 1 && dfs(next))) {
                match_l[l] = r;
                match_r[r] = l;
                return true;
            }
        }
        dist[l] = -1;
        return false;
    }

    int solve() {
        int size = 0;
        while (bfs()) {
            for (int l = 0; l < nl; ++l) {
                if (match_l[l] == kFree && dfs(l)) ++size;
            }
        }
        return size;
    }

    // Alternating reachability (non-matching edges left->right, matching
    // edges right->left) from one unmatched left vertex. The visited left
    // set S then has |N(S)| = |S| - 1.
    std::vector<int> witness_from(int start) const {
        std::vector<bool> seen_l(nl, false), seen_r(nr, false);
        std::deque<int> q{start};
        seen_l[start] = true;
        while (!q.empty()) {
            const int l = q.front();
            q.pop_front();
            for (int r : adj[l]) {
                if (seen_r[r]) continue;
                seen_r[r] = true;
                const int next = match_r[r];
                if (next != kFree && !seen_l[next]) {
                    seen_l[next] = true;
                    q.push_back(next);
                }
            }
        }
        std::vector<int> s;
        for (int l = 0; l < nl; ++l) {
            if (seen_l[l]) s.push_back(l);
        }
        return s;
    }
};

}  // namespace

MatchingResult max_matching(const BipartiteStructure& bip) {
    bip.validate();
    HopcroftKarp hk(bip);
    MatchingResult result;
    result.size = hk.solve();
    for (int l = 0; l < hk.nl; ++l) {
        if (hk.match_l[l] != kFree) result.pairs.emplace_back(l, hk.match_l[l]);
    }
    if (result.size < hk.nl) {
        for (int l = 0; l < hk.nl; ++l) {
            if (hk.match_l[l] == kFree) {
                result.deficiency_witness = hk.witness_from(l);
                break;
            }
        }
    }
    return result;
}

std::vector<int> neighbor_set(const BipartiteStructure& bip, const std::vector<int>& left_subset) {
    std::set<int> members(left_subset.begin(), left_subset.end());
    std::set<int> neighbors;
    for (const auto& [l, r] : bip.adjacency) {
        if (members.count(l) != 0) neighbors.insert(r);
    }
    return {neighbors.begin(), neighbors.end()};
}

std::string to_dot(const BipartiteStructure& bip, const MatchingResult& match,
                   const std::vector<std::string>& left_names,
                   const std::vector<std::string>& right_names) {
    auto lname = [&](int l) {
        return l < static_cast<int>(left_names.size()) ? left_names[l]
                                                       : "L" + std::to_string(l);
    };
    auto rname = [&](int r) {
        return r < static_cast<int>(right_names.size()) ? right_names[r]
                                                        : "R" + std::to_string(r);
    };
    std::set<std::pair<int, int>> matched(match.pairs.begin(), match.pairs.end());
    std::ostringstream os;
    os << "graph bipartite {\n";
    os << "  rankdir=LR;\n";
    os << "  node [shape=circle, fontsize=10];\n";
    for (std::size_t l = 0; l < bip.left.size(); ++l) {
        os << "  l" << l << " [label=\"" << lname(static_cast<int>(l)) << "\"];\n";
    }
    for (std::size_t r = 0; r < bip.right.size(); ++r) {
        os << "  r" << r << " [label=\"" << rname(static_cast<int>(r)) << "\"];\n";
    }
    for (const auto& [l, r] : bip.adjacency) {
        if (matched.count({l, r}) != 0) {
            os << "  l" << l << " -- r" << r << " [color=blue, penwidth=2.0];\n";
        } else {
            os << "  l" << l << " -- r" << r << " [color=gray60];\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace edgelift
