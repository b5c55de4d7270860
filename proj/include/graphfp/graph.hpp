#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "graphfp/rng.hpp"

namespace gfp {

/// Simple connected undirected graph on vertices 0..n-1.
/// Immutable after construction; no self-loops, no duplicate edges.
class Graph {
public:
    using Edge = std::pair<int, int>; // stored with first < second

    Graph(int n, std::vector<Edge> edges);

    static Graph path(int n);
    static Graph cycle(int n);
    static Graph complete(int n);
    /// Test helper: resamples until the graph comes out connected.
    static Graph erdos_renyi(int n, double edge_prob, SplitMix64& rng);

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int i) const { return adj_[i]; }
    int degree(int i) const { return static_cast<int>(adj_[i].size()); }
    int max_degree() const;
    bool has_edge(int i, int j) const;
    /// Graph diameter (hop count), computed once by all-pairs BFS.
    int diameter() const { return diameter_; }

    bool operator==(const Graph& other) const {
        return n_ == other.n_ && edges_ == other.edges_;
    }

private:
    int n_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
    int diameter_;
};

/// Positive weights on the edges of a graph, held as the full symmetric
/// matrix: w_ij > 0 exactly on edges, 0 elsewhere.
class EdgeWeights {
public:
    EdgeWeights(const Graph& g, Eigen::MatrixXd w);

    static EdgeWeights uniform(const Graph& g, double value);

    const Eigen::MatrixXd& matrix() const { return w_; }
    double at(int i, int j) const { return w_(i, j); }
    int size() const { return static_cast<int>(w_.rows()); }

private:
    Eigen::MatrixXd w_;
};

} // namespace gfp
