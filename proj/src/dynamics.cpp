#include "graphfp/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "graphfp/errors.hpp"
#include "graphfp/kahan.hpp"

namespace gfp {

namespace {

// Potentials closer than this are the same branch of equation I; float
// noise must not flip the equal-potential (linear diffusion) term.
constexpr double kTieTol = 1e-12;

void rhs_raw(const Graph& g, const Eigen::VectorXd& psi, double beta, FpeVariant variant,
             const Eigen::VectorXd& rho, Eigen::VectorXd& out) {
    const Eigen::VectorXd logs = rho.array().log();
    out.setZero(rho.size());
    // Per edge the two endpoint contributions are exact negations, so the
    // components sum to zero identically.
    for (const auto& [i, j] : g.edges()) {
        const double bar_i = psi(i) + beta * logs(i);
        const double bar_j = psi(j) + beta * logs(j);
        double into_i = 0.0;
        if (variant == FpeVariant::EquationI) {
            if (psi(j) > psi(i) + kTieTol) {
                into_i = (bar_j - bar_i) * rho(j);
            } else if (psi(i) > psi(j) + kTieTol) {
                into_i = (bar_j - bar_i) * rho(i);
            } else {
                into_i = beta * (rho(j) - rho(i));
            }
        } else {
            const double d = bar_j - bar_i; // positive/negative parts, no tie branch
            into_i = d > 0.0 ? d * rho(j) : d * rho(i);
        }
        out(i) += into_i;
        out(j) -= into_i;
    }
}

std::string state_string(double t, const Eigen::VectorXd& y) {
    std::ostringstream os;
    os << "t = " << t << ", state = [";
    for (int i = 0; i < y.size(); ++i) os << (i ? ", " : "") << y(i);
    os << "]";
    return os.str();
}

double kahan_total(const Eigen::VectorXd& y) {
    KahanSum s;
    for (int i = 0; i < y.size(); ++i) s.add(y(i));
    return s.value();
}

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;

} // namespace

Eigen::VectorXd rhs_fpe1(const Graph& g, const PotentialSystem& ps, const Distribution& rho) {
    if (g.vertex_count() != rho.size() || ps.size() != rho.size())
        throw std::invalid_argument("rhs_fpe1: dimension mismatch");
    Eigen::VectorXd out;
    rhs_raw(g, ps.psi(), ps.beta(), FpeVariant::EquationI, rho.values(), out);
    return out;
}

Eigen::VectorXd rhs_fpe2(const Graph& g, const PotentialSystem& ps, const Distribution& rho) {
    if (g.vertex_count() != rho.size() || ps.size() != rho.size())
        throw std::invalid_argument("rhs_fpe2: dimension mismatch");
    Eigen::VectorXd out;
    rhs_raw(g, ps.psi(), ps.beta(), FpeVariant::EquationII, rho.values(), out);
    return out;
}

double stationarity_residual(const Graph& g, const PotentialSystem& ps, FpeVariant variant,
                             const Distribution& rho) {
    Eigen::VectorXd out;
    rhs_raw(g, ps.psi(), ps.beta(), variant, rho.values(), out);
    return out.cwiseAbs().maxCoeff();
}

Trajectory integrate(const Graph& g, const PotentialSystem& ps, FpeVariant variant,
                     const Distribution& rho0, const IntegratorConfig& cfg) {
    if (!(cfg.rel_tol > 0) || !(cfg.abs_tol > 0))
        throw std::invalid_argument("integrate: tolerances must be positive");
    if (!(cfg.t_end > 0)) throw std::invalid_argument("integrate: t_end must be positive");
    if (!(cfg.max_step > 0) || cfg.sample_stride < 1 || !(cfg.floor > 0))
        throw std::invalid_argument("integrate: bad step/floor/stride configuration");
    if (g.vertex_count() != rho0.size() || ps.size() != rho0.size())
        throw std::invalid_argument("integrate: dimension mismatch");
    if (rho0.min_coord() <= cfg.floor)
        throw std::invalid_argument("integrate: initial state already at the positivity floor");

    const int n = rho0.size();
    const Distribution& star = ps.equilibrium();
    const auto& psi = ps.psi();
    const double beta = ps.beta();

    Trajectory traj;
    auto record = [&](double t, const Eigen::VectorXd& y, double f_val) {
        Distribution state(y);
        traj.times.push_back(t);
        traj.free_energy.push_back(f_val);
        traj.weighted_l2_sq.push_back(weighted_l2_sq(state, star));
        traj.rel_entropy.push_back(relative_entropy(state, star));
        traj.states.push_back(std::move(state));
    };

    Eigen::VectorXd y = rho0.values();
    double t = 0.0;
    double f_prev = free_energy(ps, rho0);
    record(t, y, f_prev);

    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), stage(n), y5(n), err(n);
    rhs_raw(g, psi, beta, variant, y, k1);

    double h = std::min({cfg.max_step, cfg.t_end, 1e-2});
    const double mass_budget = 10.0 * cfg.abs_tol;

    while (t < cfg.t_end) {
        if (h < 1e-14 * std::max(1.0, t))
            throw NumericalError("integrate: step-size underflow, " + state_string(t, y));
        h = std::min(h, cfg.t_end - t);

        // Stage sweep; abandon the step if a stage leaves the interior.
        bool stage_ok = true;
        auto eval = [&](const Eigen::VectorXd& arg, Eigen::VectorXd& k) {
            if (arg.minCoeff() <= cfg.floor) {
                stage_ok = false;
                return;
            }
            rhs_raw(g, psi, beta, variant, arg, k);
        };
        stage = y + h * (A21 * k1);
        eval(stage, k2);
        if (stage_ok) {
            stage = y + h * (A31 * k1 + A32 * k2);
            eval(stage, k3);
        }
        if (stage_ok) {
            stage = y + h * (A41 * k1 + A42 * k2 + A43 * k3);
            eval(stage, k4);
        }
        if (stage_ok) {
            stage = y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4);
            eval(stage, k5);
        }
        if (stage_ok) {
            stage = y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5);
            eval(stage, k6);
        }
        if (stage_ok) {
            y5 = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
            eval(y5, k7);
        }
        if (!stage_ok) {
            ++traj.rejected_steps;
            h *= 0.5;
            continue;
        }

        err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y(i)), std::abs(y5(i)));
            const double r = err(i) / sc;
            acc += r * r;
        }
        const double err_norm = std::sqrt(acc / n);
        if (!std::isfinite(err_norm) || err_norm > 1.0) {
            ++traj.rejected_steps;
            const double shrink = std::isfinite(err_norm)
                                      ? std::max(0.2, 0.9 * std::pow(err_norm, -0.2))
                                      : 0.2;
            h *= std::min(shrink, 0.9);
            continue;
        }

        // Mass defect is pure roundoff (the rhs is exactly zero-sum); remove
        // it by a uniform additive correction within the stated budget.
        const double defect = kahan_total(y5) - 1.0;
        if (std::abs(defect) > mass_budget)
            throw NumericalError("integrate: mass defect " + std::to_string(defect) +
                                 " exceeds renormalization budget, " + state_string(t, y5));
        y5.array() -= defect / n;

        if (y5.minCoeff() <= cfg.floor) {
            ++traj.rejected_steps;
            h *= 0.5;
            if (h < 1e-14 * std::max(1.0, t))
                throw NumericalError("integrate: positivity floor violation unresolvable by "
                                     "step halving, " +
                                     state_string(t, y5));
            continue;
        }

        KahanSum f_acc;
        for (int i = 0; i < n; ++i) f_acc.add(psi(i) * y5(i) + beta * y5(i) * std::log(y5(i)));
        const double f_new = f_acc.value();
        const double f_tol = 10.0 * cfg.rel_tol * std::abs(f_prev) +
                             4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(f_prev));
        if (f_new > f_prev + f_tol) {
            ++traj.rejected_steps;
            h *= 0.5;
            continue;
        }

        t += h;
        y = y5;
        f_prev = f_new;
        ++traj.accepted_steps;
        if (traj.accepted_steps % cfg.sample_stride == 0 || t >= cfg.t_end) record(t, y, f_new);

        rhs_raw(g, psi, beta, variant, y, k1);
        h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err_norm, 1e-10), -0.2)));
        h = std::min(h, cfg.max_step);
    }

    return traj;
}

} // namespace gfp
