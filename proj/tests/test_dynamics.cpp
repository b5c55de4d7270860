#include <doctest.h>

#include <cmath>

#include "graphfp/dynamics.hpp"
#include "graphfp/energy.hpp"
#include "graphfp/graph.hpp"
#include "graphfp/kahan.hpp"
#include "graphfp/rng.hpp"
#include "support/oracles.hpp"

using namespace gfp;

namespace {

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

PotentialSystem random_system(int n, SplitMix64& rng, double amp = 1.5) {
    Eigen::VectorXd psi(n);
    for (int i = 0; i < n; ++i) psi(i) = rng.next_in(-amp, amp);
    return PotentialSystem(psi, rng.next_in(0.4, 2.5));
}

} // namespace

TEST_CASE("equation I right-hand side: equal-potential diffusion on K2") {
    const Graph k2 = Graph::path(2);
    const PotentialSystem ps(Eigen::VectorXd::Zero(2), 1.0);
    const Eigen::VectorXd r = rhs_fpe1(k2, ps, Distribution(vec2(0.9, 0.1)));
    CHECK(r(0) == doctest::Approx(-0.8).epsilon(1e-14));
    CHECK(r(1) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("equation II right-hand side: upwind value on K2") {
    const Graph k2 = Graph::path(2);
    const PotentialSystem ps(Eigen::VectorXd::Zero(2), 1.0);
    const Eigen::VectorXd r = rhs_fpe2(k2, ps, Distribution(vec2(0.9, 0.1)));
    CHECK(r(0) == doctest::Approx(-std::log(9.0) * 0.9).epsilon(1e-14));
    CHECK(r(1) == doctest::Approx(std::log(9.0) * 0.9).epsilon(1e-14));
}

TEST_CASE("both flows vanish at the Gibbs equilibrium") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + int(rng.next_below(5));
        const Graph g = Graph::erdos_renyi(n, 0.6, rng);
        const PotentialSystem ps = random_system(n, rng);
        CHECK(stationarity_residual(g, ps, FpeVariant::EquationI, ps.equilibrium()) < 1e-12);
        CHECK(stationarity_residual(g, ps, FpeVariant::EquationII, ps.equilibrium()) < 1e-12);
        const Distribution off = Distribution::random_interior(n, rng);
        if (euclidean_sq(off, ps.equilibrium()) > 1e-6) {
            CHECK(stationarity_residual(g, ps, FpeVariant::EquationI, off) > 0.0);
            CHECK(stationarity_residual(g, ps, FpeVariant::EquationII, off) > 0.0);
        }
    }
}

TEST_CASE("two-vertex flow points back toward equilibrium") {
    // independent scalar form on K2 with psi = (0, 1), beta = 1:
    // drho_1/dt = (1 + log(rho_1/rho_0)) * (upwind mass), upwind = rho_1 side
    const Graph k2 = Graph::path(2);
    const PotentialSystem ps(vec2(0.0, 1.0), 1.0);
    const Distribution star = ps.equilibrium();
    for (double delta : {0.05, -0.05, 0.01, -0.01}) {
        const Distribution rho(vec2(star[0] - delta, star[1] + delta));
        const Eigen::VectorXd r = rhs_fpe1(k2, ps, rho);
        // vertex 1 carries the higher potential, so rho_1 is the upwind mass
        const double scalar = (1.0 + std::log(rho[1] / rho[0])) * rho[1];
        CHECK(r(0) == doctest::Approx(scalar).epsilon(1e-12));
        // the perturbation shrinks: d(rho_1)/dt has the opposite sign of delta
        CHECK(r(1) * delta < 0.0);
    }
}

TEST_CASE("mass conservation of the right-hand sides") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 10000; ++trial) {
        const int n = 2 + int(rng.next_below(5));
        const Graph g = Graph::erdos_renyi(n, 0.6, rng);
        const PotentialSystem ps = random_system(n, rng);
        const Distribution rho = Distribution::random_interior(n, rng);
        const Eigen::VectorXd r1 = rhs_fpe1(g, ps, rho);
        const Eigen::VectorXd r2 = rhs_fpe2(g, ps, rho);
        KahanSum s1, s2;
        for (int i = 0; i < n; ++i) {
            s1.add(r1(i));
            s2.add(r2(i));
        }
        CHECK(std::abs(s1.value()) < 1e-13);
        CHECK(std::abs(s2.value()) < 1e-13);
    }
}

TEST_CASE("equation II is continuous across a potential tie") {
    // crossing a psi-bar tie flips the upwind branch; the positive-part
    // form must move by O(perturbation) anyway
    const Graph k2 = Graph::path(2);
    const PotentialSystem ps(Eigen::VectorXd::Zero(2), 1.0);
    const double h = 1e-9;
    const Eigen::VectorXd above = rhs_fpe2(k2, ps, Distribution(vec2(0.5 + h, 0.5 - h)));
    const Eigen::VectorXd below = rhs_fpe2(k2, ps, Distribution(vec2(0.5 - h, 0.5 + h)));
    CHECK((above + below).cwiseAbs().maxCoeff() < 1e-8); // odd symmetry through the tie
    CHECK(above.cwiseAbs().maxCoeff() < 1e-8);           // O(h) magnitude
}

TEST_CASE("integrator reproduces the K2 closed form") {
    const Graph k2 = Graph::path(2);
    const PotentialSystem ps(Eigen::VectorXd::Zero(2), 1.0);
    const Distribution rho0(vec2(0.9, 0.1));
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
        IntegratorConfig cfg;
        cfg.t_end = t;
        const Trajectory traj = integrate(k2, ps, FpeVariant::EquationI, rho0, cfg);
        const double expected = oracle::k2_closed_form(0.9, 1.0, t);
        CHECK(traj.states.back()[0] == doctest::Approx(expected).epsilon(1e-8));
        CHECK(traj.times.back() == doctest::Approx(t).epsilon(1e-14));
    }
}

TEST_CASE("starting at the equilibrium stays there") {
    SplitMix64 rng(31);
    const Graph g = Graph::cycle(4);
    const PotentialSystem ps = random_system(4, rng);
    IntegratorConfig cfg;
    cfg.t_end = 3.0;
    for (FpeVariant v : {FpeVariant::EquationI, FpeVariant::EquationII}) {
        const Trajectory traj = integrate(g, ps, v, ps.equilibrium(), cfg);
        for (const Distribution& state : traj.states)
            CHECK((state.values() - ps.equilibrium().values()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("both variants converge to the same Gibbs state") {
    // slow modes on P3 decay at rate ~0.5 for unlucky potentials, so the
    // 1e-6 neighbourhood arrives only tens of time units in
    SplitMix64 rng(37);
    const Graph p3 = Graph::path(3);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd psi(3);
        for (int i = 0; i < 3; ++i) psi(i) = rng.next_in(-1, 1);
        const PotentialSystem ps(psi, 1.0);
        const Distribution rho0 = Distribution::random_interior(3, rng);
        IntegratorConfig cfg;
        cfg.t_end = 60.0;
        for (FpeVariant v : {FpeVariant::EquationI, FpeVariant::EquationII}) {
            const Trajectory traj = integrate(p3, ps, v, rho0, cfg);
            CHECK((traj.states.back().values() - ps.equilibrium().values())
                      .cwiseAbs()
                      .maxCoeff() < 1e-6);
        }
    }
}

TEST_CASE("trajectory structural invariants on a random corpus") {
    SplitMix64 rng(41);
    IntegratorConfig cfg;
    cfg.t_end = 4.0;
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 2 + int(rng.next_below(4));
        const Graph g = Graph::erdos_renyi(n, 0.7, rng);
        const PotentialSystem ps = random_system(n, rng);
        const Distribution rho0 = Distribution::random_interior(n, rng);
        for (FpeVariant v : {FpeVariant::EquationI, FpeVariant::EquationII}) {
            const Trajectory traj = integrate(g, ps, v, rho0, cfg);
            REQUIRE(traj.samples() >= 2);
            for (int k = 0; k < traj.samples(); ++k) {
                KahanSum mass;
                for (int i = 0; i < n; ++i) mass.add(traj.states[k][i]);
                CHECK(std::abs(mass.value() - 1.0) <= 1e-10);
                CHECK(traj.states[k].min_coord() > cfg.floor);
                if (k > 0) {
                    CHECK(traj.times[k] > traj.times[k - 1]);
                    CHECK(traj.free_energy[k] <=
                          traj.free_energy[k - 1] +
                              10 * cfg.rel_tol * std::abs(traj.free_energy[k - 1]) + 1e-14);
                }
            }
        }
    }
}

TEST_CASE("stationarity residual decays along a converging trajectory tail") {
    const Graph k2 = Graph::path(2);
    const PotentialSystem ps(Eigen::VectorXd::Zero(2), 1.0);
    IntegratorConfig cfg;
    cfg.t_end = 6.0;
    const Trajectory traj =
        integrate(k2, ps, FpeVariant::EquationI, Distribution(vec2(0.9, 0.1)), cfg);
    const int m = traj.samples();
    double prev = stationarity_residual(k2, ps, FpeVariant::EquationI, traj.states[m / 2]);
    for (int k = m / 2 + 1; k < m; ++k) {
        const double cur = stationarity_residual(k2, ps, FpeVariant::EquationI, traj.states[k]);
        CHECK(cur <= prev * (1.0 + 1e-9) + 1e-15);
        prev = cur;
    }
}

TEST_CASE("integrator rejects broken configurations") {
    const Graph k2 = Graph::path(2);
    const PotentialSystem ps(Eigen::VectorXd::Zero(2), 1.0);
    const Distribution rho0 = Distribution::uniform(2);
    IntegratorConfig cfg;
    cfg.t_end = -1.0;
    CHECK_THROWS_AS(integrate(k2, ps, FpeVariant::EquationI, rho0, cfg), std::invalid_argument);
    cfg.t_end = 1.0;
    cfg.rel_tol = 0.0;
    CHECK_THROWS_AS(integrate(k2, ps, FpeVariant::EquationI, rho0, cfg), std::invalid_argument);
    cfg.rel_tol = 1e-9;
    cfg.floor = 0.6; // initial state sits below the floor
    CHECK_THROWS_AS(integrate(k2, ps, FpeVariant::EquationI, rho0, cfg), std::invalid_argument);
}
