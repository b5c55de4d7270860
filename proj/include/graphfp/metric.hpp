#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "graphfp/energy.hpp"
#include "graphfp/graph.hpp"

namespace gfp {

/// Rule assigning a distribution its metric edge weights. Potential-rule
/// metrics upwind each edge by a vertex potential Phi(rho) (constant for
/// the d_psi geometry, psi + beta log rho for the d_psibar one) and use the
/// logarithmic mean on ties; the lower-bound metric takes max(rho_i, rho_j).
class MetricKind {
public:
    static MetricKind lower_bound();
    static MetricKind fixed_potential(Eigen::VectorXd phi);
    static MetricKind free_energy_potential(Eigen::VectorXd psi, double beta);

    bool is_lower_bound() const { return lower_bound_; }
    Eigen::VectorXd potential_at(const Distribution& rho) const;
    const std::string& name() const { return name_; }

private:
    MetricKind() = default;
    bool lower_bound_ = false;
    std::function<Eigen::VectorXd(const Distribution&)> phi_;
    std::string name_;
};

/// Zero-sum vector: an element of the simplex tangent space.
class TangentVector {
public:
    explicit TangentVector(Eigen::VectorXd sigma); // rejects |sum| > 1e-12
    /// Removes the mean so arbitrary vectors can enter the tangent space.
    static TangentVector project(const Eigen::VectorXd& v);

    const Eigen::VectorXd& values() const { return sigma_; }
    int size() const { return static_cast<int>(sigma_.size()); }

private:
    Eigen::VectorXd sigma_;
};

/// Interior-knot polyline between two distributions.
struct DiscreteCurve {
    std::vector<Distribution> knots; // K+1 points, K >= 1 segments

    int segments() const { return static_cast<int>(knots.size()) - 1; }
};

/// (r1 - r2) / (log r1 - log r2), continuously extended on the diagonal;
/// sits between min and max of its arguments.
double logarithmic_mean(double r1, double r2);

EdgeWeights metric_weights(const Graph& g, const MetricKind& kind, const Distribution& rho);

/// sigma = p L(G, w(rho)); constants in p map to zero.
TangentVector identify(const Graph& g, const MetricKind& kind, const Distribution& rho,
                       const Eigen::VectorXd& p);

/// Unique zero-sum p solving p L(G, w(rho)) = sigma. Throws NumericalError
/// when the residual exceeds 1e-9 (near-singular weights).
Eigen::VectorXd invert_identification(const Graph& g, const MetricKind& kind,
                                      const Distribution& rho, const TangentVector& sigma);

/// g_rho(sigma1, sigma2) = p1 . sigma2 with p1 from the inverse
/// identification; symmetric positive-definite on the tangent space.
double metric_form(const Graph& g, const MetricKind& kind, const Distribution& rho,
                   const TangentVector& sigma1, const TangentVector& sigma2);

/// Midpoint-rule arc length: sum over segments of sqrt(g at knot midpoint
/// applied to the knot difference).
double curve_length(const Graph& g, const MetricKind& kind, const DiscreteCurve& curve);

struct GeodesicConfig {
    int segments = 64;
    int max_iters = 400;
    double energy_tol = 1e-10;     // relative energy decrease stopping rule
    double interior_margin = 1e-8; // knots are projected to stay this far inside
};

struct GeodesicResult {
    double distance_upper; // length of the optimized curve (upper bound)
    double chord_upper;    // sqrt(max 1/lambda2 along the chord) * |rho1-rho2|
    DiscreteCurve curve;
    int iterations = 0;
    bool converged = false;
    bool margin_active = false; // some knot sat on the interior margin

    double distance() const {
        return distance_upper < chord_upper ? distance_upper : chord_upper;
    }
};

/// Upper bound on the geodesic distance by energy descent over interior
/// knots (endpoints fixed), started from the straight chord.
GeodesicResult geodesic_distance(const Graph& g, const MetricKind& kind,
                                 const Distribution& rho1, const Distribution& rho2,
                                 const GeodesicConfig& cfg = {});

/// Explicit global constant K = M(DN^3+4)/(2 lambda2 m) log(18M/m^3).
double talagrand_global_constant(const Graph& g, const Distribution& mu);

struct TalagrandReport {
    double lhs; // squared distance upper bound
    double rhs; // K * H(nu|mu)
    double constant;
    double entropy;
    bool holds;
    int segments_used;
};

/// d_m^2(nu, mu) <= K H(nu|mu) with distance upper bounds: holds = true is
/// a genuine certificate. On failure the curve is refined with doubled
/// segment counts before reporting.
TalagrandReport check_talagrand_global(const Graph& g, const Distribution& mu,
                                       const Distribution& nu, const GeodesicConfig& cfg = {});

struct LocalTalagrandConfig {
    double margin = 0.1;      // compact set {rho : rho_i >= margin}
    int sample_resolution = 128; // low-discrepancy samples of the enlargement
    GeodesicConfig geodesic;
};

struct LocalTalagrandReport {
    double lhs;
    double rhs;
    double constant;  // K = 2T C1/C2 + 2T
    double t_horizon; // T = (1/C) log(4M/m)
    double rate;      // C entering T
    double c1;        // max sampled 1/lambda2
    double c2;        // min sampled 1/lambda_n
    bool holds;
    int samples_used;
};

/// Constructive local inequality d_psi^2(mu, nu) <= K H(nu|mu) with
/// psi = -log mu, beta = 1; nu must lie in the margin set.
LocalTalagrandReport check_talagrand_local(const Graph& g, const Distribution& mu,
                                           const Distribution& nu,
                                           const LocalTalagrandConfig& cfg = {});

} // namespace gfp
