#include "graphfp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

namespace gfp {

namespace {

// Breadth-first distances from `start`; -1 marks unreachable vertices.
std::vector<int> bfs_distances(int n, const std::vector<std::vector<int>>& adj, int start) {
    std::vector<int> dist(n, -1);
    std::queue<int> q;
    dist[start] = 0;
    q.push(start);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : adj[v]) {
            if (dist[u] < 0) {
                dist[u] = dist[v] + 1;
                q.push(u);
            }
        }
    }
    return dist;
}

} // namespace

Graph::Graph(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 2) throw std::invalid_argument("Graph: need at least 2 vertices");
    std::set<Edge> seen;
    for (auto& [i, j] : edges) {
        if (i == j) throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(i));
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw std::invalid_argument("Graph: edge endpoint out of range");
        if (i > j) std::swap(i, j);
        if (!seen.insert({i, j}).second)
            throw std::invalid_argument("Graph: duplicate edge {" + std::to_string(i) + "," +
                                        std::to_string(j) + "}");
    }
    edges_.assign(seen.begin(), seen.end());

    adj_.resize(n_);
    for (const auto& [i, j] : edges_) {
        adj_[i].push_back(j);
        adj_[j].push_back(i);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());

    // Connectivity plus diameter in one all-pairs BFS sweep.
    diameter_ = 0;
    for (int s = 0; s < n_; ++s) {
        auto dist = bfs_distances(n_, adj_, s);
        for (int v = 0; v < n_; ++v) {
            if (dist[v] < 0) throw std::invalid_argument("Graph: not connected");
            diameter_ = std::max(diameter_, dist[v]);
        }
    }
}

Graph Graph::path(int n) {
    std::vector<Edge> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return Graph(n, std::move(e));
}

Graph Graph::cycle(int n) {
    if (n < 3) throw std::invalid_argument("Graph::cycle: need at least 3 vertices");
    std::vector<Edge> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    e.push_back({0, n - 1});
    return Graph(n, std::move(e));
}

Graph Graph::complete(int n) {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.push_back({i, j});
    return Graph(n, std::move(e));
}

Graph Graph::erdos_renyi(int n, double edge_prob, SplitMix64& rng) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<Edge> e;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.next_double() < edge_prob) e.push_back({i, j});
        try {
            return Graph(n, std::move(e));
        } catch (const std::invalid_argument&) {
            continue; // disconnected draw, resample
        }
    }
    throw std::invalid_argument("erdos_renyi: no connected draw in 10000 attempts");
}

int Graph::max_degree() const {
    int d = 0;
    for (int i = 0; i < n_; ++i) d = std::max(d, degree(i));
    return d;
}

bool Graph::has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
}

EdgeWeights::EdgeWeights(const Graph& g, Eigen::MatrixXd w) : w_(std::move(w)) {
    const int n = g.vertex_count();
    if (w_.rows() != n || w_.cols() != n)
        throw std::invalid_argument("EdgeWeights: matrix size does not match graph");
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double v = w_(i, j);
            if (!std::isfinite(v)) throw std::invalid_argument("EdgeWeights: non-finite entry");
            if (v != w_(j, i)) throw std::invalid_argument("EdgeWeights: not symmetric");
            if (i == j) {
                if (v != 0.0) throw std::invalid_argument("EdgeWeights: nonzero diagonal");
            } else if (g.has_edge(i, j)) {
                if (v <= 0.0)
                    throw std::invalid_argument("EdgeWeights: nonpositive weight on edge {" +
                                                std::to_string(i) + "," + std::to_string(j) + "}");
            } else if (v != 0.0) {
                throw std::invalid_argument("EdgeWeights: weight off the edge set at {" +
                                            std::to_string(i) + "," + std::to_string(j) + "}");
            }
        }
    }
}

EdgeWeights EdgeWeights::uniform(const Graph& g, double value) {
    const int n = g.vertex_count();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [i, j] : g.edges()) {
        w(i, j) = value;
        w(j, i) = value;
    }
    return EdgeWeights(g, std::move(w));
}

} // namespace gfp
