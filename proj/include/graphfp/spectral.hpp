#pragma once

#include <vector>

#include <Eigen/Core>

#include "graphfp/graph.hpp"

namespace gfp {

/// Full spectrum of a Laplacian-like matrix, nondecreasing order.
struct SpectralSummary {
    std::vector<double> eigenvalues;
    double lambda2;  // second smallest (spectral gap for connected graphs)
    double lambda_n; // largest
};

/// Closed-form lower bounds on the spectral gap of the unweighted Laplacian.
struct SpectralGapBounds {
    // d_max - sqrt(d_max^2 - i^2) with i the isoperimetric number (falls
    // back to the universal i >= 2/n past the enumeration cap)
    double degree_bound;
    double diameter_bound; // 2N / (2 + N(N-1)d - 2Md), d = diameter, M = #edges
    double cycle_bound;    // 2(1 - cos(pi/N))
    // For simple graphs the diameter-bound denominator is provably >= 2,
    // but the formula is guarded anyway and flagged if it ever degenerates.
    bool diameter_bound_valid;
};

struct IsoperimetricBound {
    double iso_number;   // min cut-weight / |X| over |X| <= N/2
    double bound;        // delta_bar - sqrt(delta_bar^2 - i^2)
    double chained;      // i^2 / (2 delta_bar), the weaker chained form
    double max_diagonal; // delta_bar of the weighted Laplacian
};

Eigen::MatrixXd laplacian(const Graph& g);
Eigen::MatrixXd weighted_laplacian(const Graph& g, const EdgeWeights& w);

/// Spectrum of a symmetric zero-row-sum matrix. Throws NumericalError on
/// eigensolver failure and DisconnectedError when lambda2 falls inside the
/// kernel tolerance |lambda| <= 1e-9 * max(1, lambda_n).
SpectralSummary spectral_summary(const Eigen::MatrixXd& m);

SpectralGapBounds spectral_gap_lower_bounds(const Graph& g, int cap = 20);

/// Brute-force isoperimetric number; enumeration is 2^(n-1) subsets so the
/// vertex count is capped (default 20, overridable).
double isoperimetric_number(const Graph& g, const EdgeWeights& w, int cap = 20);

IsoperimetricBound isoperimetric_spectral_bound(const Graph& g, const EdgeWeights& w,
                                                int cap = 20);

} // namespace gfp
