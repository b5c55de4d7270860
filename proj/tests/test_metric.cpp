#include <doctest.h>

#include <cmath>

#include "graphfp/energy.hpp"
#include "graphfp/errors.hpp"
#include "graphfp/graph.hpp"
#include "graphfp/metric.hpp"
#include "graphfp/rng.hpp"
#include "graphfp/spectral.hpp"
#include "support/oracles.hpp"

using namespace gfp;

namespace {

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

MetricKind random_kind(int n, SplitMix64& rng) {
    const auto pick = rng.next_below(3);
    if (pick == 0) return MetricKind::lower_bound();
    Eigen::VectorXd psi(n);
    for (int i = 0; i < n; ++i) psi(i) = rng.next_in(-1, 1);
    if (pick == 1) return MetricKind::fixed_potential(psi);
    return MetricKind::free_energy_potential(psi, rng.next_in(0.5, 2.0));
}

} // namespace

TEST_CASE("logarithmic mean: value, diagonal, betweenness") {
    CHECK(logarithmic_mean(0.9, 0.1) == doctest::Approx(0.8 / std::log(9.0)).epsilon(1e-14));
    CHECK(logarithmic_mean(0.37, 0.37) == 0.37);
    CHECK_THROWS_AS(logarithmic_mean(0.0, 1.0), std::invalid_argument);
    SplitMix64 rng(79);
    for (int trial = 0; trial < 1000; ++trial) {
        const double a = rng.next_in(1e-6, 2.0), b = rng.next_in(1e-6, 2.0);
        const double e = logarithmic_mean(a, b);
        CHECK(e >= std::min(a, b) - 1e-15);
        CHECK(e <= std::max(a, b) + 1e-15);
    }
}

TEST_CASE("metric weights follow the branch rules") {
    const Graph k2 = Graph::path(2);
    const Distribution rho(vec2(0.9, 0.1));

    CHECK(metric_weights(k2, MetricKind::lower_bound(), rho).at(0, 1) == 0.9);

    const MetricKind flat = MetricKind::fixed_potential(Eigen::VectorXd::Zero(2));
    CHECK(metric_weights(k2, flat, Distribution::uniform(2)).at(0, 1) == 0.5);
    CHECK(metric_weights(k2, flat, rho).at(0, 1) ==
          doctest::Approx(0.8 / std::log(9.0)).epsilon(1e-14));

    const MetricKind tilted = MetricKind::fixed_potential(vec2(0.0, 1.0));
    CHECK(metric_weights(k2, tilted, rho).at(0, 1) == 0.1); // mass of the high side

    SplitMix64 rng(83);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + int(rng.next_below(5));
        const Graph g = Graph::erdos_renyi(n, 0.6, rng);
        const Distribution r = Distribution::random_interior(n, rng);
        const EdgeWeights w = metric_weights(g, random_kind(n, rng), r);
        for (const auto& [i, j] : g.edges()) {
            CHECK(w.at(i, j) >= std::min(r[i], r[j]) - 1e-15);
            CHECK(w.at(i, j) <= std::max(r[i], r[j]) + 1e-15);
        }
    }
}

TEST_CASE("identification: worked case, kernel, shift invariance") {
    const Graph k2 = Graph::path(2);
    const MetricKind lb = MetricKind::lower_bound();
    const Distribution rho(vec2(0.9, 0.1));

    const TangentVector sigma = identify(k2, lb, rho, vec2(1.0, 0.0));
    CHECK(sigma.values()(0) == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(sigma.values()(1) == doctest::Approx(-0.9).epsilon(1e-14));

    SplitMix64 rng(89);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + int(rng.next_below(5));
        const Graph g = Graph::erdos_renyi(n, 0.6, rng);
        const MetricKind kind = random_kind(n, rng);
        const Distribution r = Distribution::random_interior(n, rng);
        const Eigen::VectorXd c = Eigen::VectorXd::Constant(n, rng.next_in(-3, 3));
        CHECK(identify(g, kind, r, c).values().cwiseAbs().maxCoeff() < 1e-12);

        Eigen::VectorXd p(n);
        for (int i = 0; i < n; ++i) p(i) = rng.next_in(-2, 2);
        const TangentVector s1 = identify(g, kind, r, p);
        const TangentVector s2 = identify(g, kind, r, (p + c).eval());
        CHECK((s1.values() - s2.values()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("inverse identification: worked case and round trips") {
    const Graph k2 = Graph::path(2);
    const MetricKind lb = MetricKind::lower_bound();
    const Distribution rho(vec2(0.9, 0.1));

    const Eigen::VectorXd p = invert_identification(k2, lb, rho, TangentVector(vec2(0.9, -0.9)));
    CHECK(p(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p(1) == doctest::Approx(-0.5).epsilon(1e-12));

    const Eigen::VectorXd zero =
        invert_identification(k2, lb, rho, TangentVector(vec2(0.0, 0.0)));
    CHECK(zero.cwiseAbs().maxCoeff() < 1e-15);

    SplitMix64 rng(97);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + int(rng.next_below(5));
        const Graph g = Graph::erdos_renyi(n, 0.6, rng);
        const MetricKind kind = random_kind(n, rng);
        const Distribution r = Distribution::random_interior(n, rng);

        Eigen::VectorXd p0(n);
        for (int i = 0; i < n; ++i) p0(i) = rng.next_in(-2, 2);
        const Eigen::VectorXd back =
            invert_identification(g, kind, r, identify(g, kind, r, p0));
        const Eigen::VectorXd gauge = p0.array() - p0.mean();
        CHECK((back - gauge).cwiseAbs().maxCoeff() < 1e-10);

        const TangentVector sigma = TangentVector::project(
            Eigen::VectorXd::NullaryExpr(n, [&](Eigen::Index) { return rng.next_in(-1, 1); }));
        const TangentVector again =
            identify(g, kind, r, invert_identification(g, kind, r, sigma));
        CHECK((again.values() - sigma.values()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("inverse identification flags near-singular weights") {
    // a star whose center and three leaves carry almost no mass: the
    // lower-bound weights on those edges collapse and the solve loses
    // conditioning
    const Graph star(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    Eigen::VectorXd rho(5);
    rho << 1e-13, 1e-13, 1e-13, 1e-13, 1.0 - 4e-13;
    const TangentVector sigma = TangentVector::project(
        (Eigen::VectorXd(5) << 1.0, -0.5, 0.25, -0.5, -0.25).finished());
    CHECK_THROWS_AS(
        invert_identification(star, MetricKind::lower_bound(), Distribution(rho), sigma),
        NumericalError);
}

TEST_CASE("metric form: 1-D reduction, symmetry, eigenvalue sandwich") {
    const Graph k2 = Graph::path(2);
    const MetricKind lb = MetricKind::lower_bound();
    const Distribution rho(vec2(0.9, 0.1));
    for (double s : {0.3, -1.2, 0.01}) {
        const TangentVector sigma(vec2(s, -s));
        CHECK(metric_form(k2, lb, rho, sigma, sigma) ==
              doctest::Approx(s * s / 0.9).epsilon(1e-12));
    }

    SplitMix64 rng(101);
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 2 + int(rng.next_below(5));
        const Graph g = Graph::erdos_renyi(n, 0.6, rng);
        const MetricKind kind = random_kind(n, rng);
        const Distribution r = Distribution::random_interior(n, rng);
        auto rand_tangent = [&]() {
            Eigen::VectorXd v(n);
            for (int i = 0; i < n; ++i) v(i) = rng.next_in(-1, 1);
            return TangentVector::project(v);
        };
        const TangentVector s1 = rand_tangent(), s2 = rand_tangent();

        const double g12 = metric_form(g, kind, r, s1, s2);
        const double g21 = metric_form(g, kind, r, s2, s1);
        CHECK(std::abs(g12 - g21) < 1e-12);

        const double g11 = metric_form(g, kind, r, s1, s1);
        const double norm_sq = s1.values().squaredNorm();
        if (norm_sq > 1e-12) CHECK(g11 > 0.0);
        const SpectralSummary spec =
            spectral_summary(weighted_laplacian(g, metric_weights(g, kind, r)));
        CHECK(g11 >= norm_sq / spec.lambda_n - 1e-9);
        CHECK(g11 <= norm_sq / spec.lambda2 + 1e-9);
    }
}

TEST_CASE("curve length: degenerate, quadrature oracle, reparameterization") {
    const Graph k2 = Graph::path(2);
    const MetricKind lb = MetricKind::lower_bound();

    DiscreteCurve flat;
    for (int k = 0; k < 5; ++k) flat.knots.emplace_back(Distribution::uniform(2));
    CHECK(curve_length(k2, lb, flat) == 0.0);

    const int K = 2048;
    const double expected = oracle::k2_lower_bound_distance(0.5, 0.9);
    DiscreteCurve linear; // constant-speed knots in rho
    for (int k = 0; k <= K; ++k) {
        const double x = 0.5 + 0.4 * k / K;
        linear.knots.emplace_back(Distribution(vec2(x, 1.0 - x)));
    }
    CHECK(curve_length(k2, lb, linear) == doctest::Approx(expected).epsilon(1e-4));

    DiscreteCurve skew; // same image, quadratically clustered knots
    for (int k = 0; k <= K; ++k) {
        const double t = double(k) / K;
        const double x = 0.5 + 0.4 * t * t;
        skew.knots.emplace_back(Distribution(vec2(x, 1.0 - x)));
    }
    CHECK(curve_length(k2, lb, skew) == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("geodesic distance: identical endpoints and the K2 oracle") {
    const Graph k2 = Graph::path(2);
    const MetricKind lb = MetricKind::lower_bound();
    const Distribution a = Distribution::uniform(2);
    const Distribution b(vec2(0.9, 0.1));

    const GeodesicResult zero = geodesic_distance(k2, lb, a, a);
    CHECK(zero.distance() == 0.0);

    GeodesicConfig cfg;
    cfg.segments = 256;
    const GeodesicResult res = geodesic_distance(k2, lb, a, b, cfg);
    CHECK(res.distance() ==
          doctest::Approx(oracle::k2_lower_bound_distance(0.5, 0.9)).epsilon(2e-4));
    CHECK(res.distance_upper <= res.chord_upper + 1e-12);
}

TEST_CASE("lower-bound metric sits below the potential metrics") {
    SplitMix64 rng(103);
    GeodesicConfig cfg;
    cfg.segments = 32;
    cfg.max_iters = 200;
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 2 + int(rng.next_below(4));
        const Graph g = Graph::erdos_renyi(n, 0.6, rng);
        const Distribution r1 = Distribution::random_interior(n, rng);
        const Distribution r2 = Distribution::random_interior(n, rng);
        Eigen::VectorXd psi(n);
        for (int i = 0; i < n; ++i) psi(i) = rng.next_in(-1, 1);

        const double dm =
            geodesic_distance(g, MetricKind::lower_bound(), r1, r2, cfg).distance();
        const double dpsi =
            geodesic_distance(g, MetricKind::fixed_potential(psi), r1, r2, cfg).distance();
        const double dbar =
            geodesic_distance(g, MetricKind::free_energy_potential(psi, 1.0), r1, r2, cfg)
                .distance();
        CHECK(dm <= dpsi + 2e-3);
        CHECK(dm <= dbar + 2e-3);
    }
}

TEST_CASE("geodesic upper bounds nearly satisfy the triangle inequality") {
    SplitMix64 rng(107);
    GeodesicConfig cfg;
    cfg.segments = 32;
    cfg.max_iters = 200;
    const Graph g = Graph::cycle(4);
    const MetricKind lb = MetricKind::lower_bound();
    for (int trial = 0; trial < 6; ++trial) {
        const Distribution a = Distribution::random_interior(4, rng);
        const Distribution b = Distribution::random_interior(4, rng);
        const Distribution c = Distribution::random_interior(4, rng);
        const double ab = geodesic_distance(g, lb, a, b, cfg).distance();
        const double bc = geodesic_distance(g, lb, b, c, cfg).distance();
        const double ac = geodesic_distance(g, lb, a, c, cfg).distance();
        CHECK(ac <= ab + bc + 3 * 2e-3);
    }
}

TEST_CASE("global Talagrand constant: worked value and monotonicity") {
    const Graph k2 = Graph::path(2);
    CHECK(talagrand_global_constant(k2, Distribution::uniform(2)) ==
          doctest::Approx(3.0 * std::log(72.0)).epsilon(1e-12));

    double previous = 0.0;
    for (double m : {0.4, 0.3, 0.2, 0.1, 0.05}) {
        const double k = talagrand_global_constant(k2, Distribution(vec2(1.0 - m, m)));
        CHECK(k > previous);
        previous = k;
    }

    // label invariance
    SplitMix64 rng(109);
    const Graph g(4, {{0, 1}, {1, 2}, {2, 3}, {0, 2}});
    const Graph h(4, {{3, 2}, {2, 1}, {1, 0}, {3, 1}}); // same graph, relabeled by reversal
    Eigen::VectorXd mu(4);
    for (int i = 0; i < 4; ++i) mu(i) = rng.next_in(0.1, 1.0);
    Eigen::VectorXd rev = mu.reverse();
    CHECK(talagrand_global_constant(g, Distribution::normalized(mu)) ==
          doctest::Approx(talagrand_global_constant(h, Distribution::normalized(rev)))
              .epsilon(1e-12));
}

TEST_CASE("global Talagrand certificate: degenerate, worked, randomized") {
    const Graph k2 = Graph::path(2);
    const Distribution mu = Distribution::uniform(2);

    const TalagrandReport same = check_talagrand_global(k2, mu, mu);
    CHECK(same.holds);
    CHECK(same.lhs == 0.0);
    CHECK(same.rhs == 0.0);

    GeodesicConfig cfg;
    cfg.segments = 256;
    const TalagrandReport worked = check_talagrand_global(k2, mu, Distribution(vec2(0.9, 0.1)), cfg);
    CHECK(worked.holds);
    CHECK(worked.lhs == doctest::Approx(0.233437).epsilon(1e-3));
    CHECK(worked.rhs == doctest::Approx(4.722263).epsilon(1e-3));

    SplitMix64 rng(113);
    GeodesicConfig quick;
    quick.segments = 32;
    quick.max_iters = 150;
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + int(rng.next_below(4));
        const Graph g = Graph::erdos_renyi(n, 0.6, rng);
        const Distribution m = Distribution::random_interior(n, rng);
        const Distribution v = Distribution::random_interior(n, rng);
        CHECK(check_talagrand_global(g, m, v, quick).holds);
    }
}

TEST_CASE("local Talagrand check on K2 and margin growth") {
    const Graph k2 = Graph::path(2);
    const Distribution mu = Distribution::uniform(2);

    LocalTalagrandConfig cfg;
    cfg.margin = 0.2;
    cfg.geodesic.segments = 64;

    const LocalTalagrandReport same = check_talagrand_local(k2, mu, mu, cfg);
    CHECK(same.holds);

    for (double x : {0.2, 0.35, 0.5, 0.65, 0.8}) {
        const LocalTalagrandReport rep =
            check_talagrand_local(k2, mu, Distribution(vec2(x, 1.0 - x)), cfg);
        CHECK(rep.holds);
        CHECK(rep.constant > 0.0);
    }

    // constants blow up as the compact set approaches the boundary
    double previous = 0.0;
    for (double margin : {0.2, 0.1, 0.05, 0.02}) {
        LocalTalagrandConfig shrink = cfg;
        shrink.margin = margin;
        const LocalTalagrandReport rep =
            check_talagrand_local(k2, mu, Distribution(vec2(0.7, 0.3)), shrink);
        CHECK(rep.constant > previous);
        previous = rep.constant;
    }

    // nu outside the compact set is rejected
    LocalTalagrandConfig tight = cfg;
    tight.margin = 0.3;
    CHECK_THROWS_AS(check_talagrand_local(k2, mu, Distribution(vec2(0.9, 0.1)), tight),
                    std::invalid_argument);
}
