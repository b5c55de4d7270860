#pragma once

#include <Eigen/Core>

#include "graphfp/graph.hpp"
#include "graphfp/rng.hpp"

namespace gfp {

/// Strictly positive probability vector — a point of the open simplex.
/// Construction rejects coordinates at or below 1e-300 (true zeros only;
/// the dynamics module enforces its own, much larger working floor) and
/// sums off by more than 1e-12.
class Distribution {
public:
    explicit Distribution(Eigen::VectorXd rho);

    static Distribution uniform(int n);
    /// Scales a positive vector to unit sum.
    static Distribution normalized(const Eigen::VectorXd& positive);
    static Distribution random_interior(int n, SplitMix64& rng);

    const Eigen::VectorXd& values() const { return rho_; }
    double operator[](int i) const { return rho_(i); }
    int size() const { return static_cast<int>(rho_.size()); }
    double min_coord() const { return rho_.minCoeff(); }
    double max_coord() const { return rho_.maxCoeff(); }

private:
    Eigen::VectorXd rho_;
};

/// Vertex potential with noise strength beta > 0 and the derived Gibbs
/// equilibrium, cached at construction.
class PotentialSystem {
public:
    PotentialSystem(Eigen::VectorXd psi, double beta);

    const Eigen::VectorXd& psi() const { return psi_; }
    double beta() const { return beta_; }
    const Distribution& equilibrium() const { return gibbs_; }
    int size() const { return static_cast<int>(psi_.size()); }

private:
    Eigen::VectorXd psi_;
    double beta_;
    Distribution gibbs_;
};

struct DiscrepancyReport {
    double weighted_l2_sq; // sum (rho_i/ref_i - 1)^2 ref_i
    double rel_entropy;    // sum rho_i log(rho_i/ref_i)
    double euclidean_sq;
};

/// Gibbs density of (psi, beta); shift-invariant in psi, overflow-guarded.
Distribution gibbs(const Eigen::VectorXd& psi, double beta);

/// F(rho) = sum psi_i rho_i + beta sum rho_i log rho_i.
double free_energy(const PotentialSystem& ps, const Distribution& rho);

double weighted_l2_sq(const Distribution& rho, const Distribution& ref);
double relative_entropy(const Distribution& nu, const Distribution& mu);
double euclidean_sq(const Distribution& rho, const Distribution& ref);
DiscrepancyReport discrepancy(const Distribution& rho, const Distribution& ref);

/// Edge-pairing form sum_i sum_{j~i} (log f_i - log f_j)(f_i - f_j) ref_i.
/// Nonnegative; zero exactly on constants (connected g). f must be positive.
double dirichlet_form(const Graph& g, const Distribution& ref, const Eigen::VectorXd& f);

/// Ent f = E_ref(f log f) - (E_ref f) log(E_ref f); degree-1 homogeneous.
double entropy_functional(const Distribution& ref, const Eigen::VectorXd& f);

} // namespace gfp
