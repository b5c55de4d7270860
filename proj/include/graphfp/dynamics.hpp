#pragma once

#include <vector>

#include <Eigen/Core>

#include "graphfp/energy.hpp"
#include "graphfp/graph.hpp"

namespace gfp {

/// The two flows differ only in which potential picks the upwind
/// direction per edge: equation I switches on psi, equation II on
/// psi_i + beta log rho_i.
enum class FpeVariant { EquationI = 1, EquationII = 2 };

struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double t_end = 10.0;
    double max_step = 1.0;
    double floor = 1e-13;   // positivity guard; steps crossing it are rejected
    int sample_stride = 1;  // record every k-th accepted step (plus first/last)
};

/// Time-stamped states with per-sample diagnostics against the Gibbs
/// equilibrium. Free energy is nonincreasing along samples within the
/// integrator tolerance.
struct Trajectory {
    std::vector<double> times;
    std::vector<Distribution> states;
    std::vector<double> free_energy;
    std::vector<double> weighted_l2_sq; // vs rho*
    std::vector<double> rel_entropy;    // vs rho*
    int accepted_steps = 0;
    int rejected_steps = 0;

    int samples() const { return static_cast<int>(times.size()); }
};

Eigen::VectorXd rhs_fpe1(const Graph& g, const PotentialSystem& ps, const Distribution& rho);
Eigen::VectorXd rhs_fpe2(const Graph& g, const PotentialSystem& ps, const Distribution& rho);

/// Adaptive embedded Runge-Kutta 5(4). Steps are rejected when the error
/// estimate fails, when any component would cross cfg.floor, or when free
/// energy rises beyond 10*rel_tol; the mass defect of each accepted step is
/// removed by a uniform additive correction of magnitude <= 10*abs_tol.
Trajectory integrate(const Graph& g, const PotentialSystem& ps, FpeVariant variant,
                     const Distribution& rho0, const IntegratorConfig& cfg);

/// Sup-norm of the right-hand side; certifies equilibria.
double stationarity_residual(const Graph& g, const PotentialSystem& ps, FpeVariant variant,
                             const Distribution& rho);

} // namespace gfp
