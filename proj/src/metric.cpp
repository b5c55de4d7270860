#include "graphfp/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "graphfp/errors.hpp"
#include "graphfp/kahan.hpp"
#include "graphfp/rates.hpp"
#include "graphfp/rng.hpp"
#include "graphfp/spectral.hpp"

namespace gfp {

namespace {

constexpr double kPhiTieTol = 1e-12; // same tie rule as the equation-I branches
constexpr double kResidualTol = 1e-9;

double logmean_deriv_first(double a, double b) {
    // d/da (a-b)/(log a - log b); 1/2 on the diagonal.
    if (std::abs(a - b) <= 1e-9 * (a + b)) return 0.5;
    const double dl = std::log(a) - std::log(b);
    return (dl - (a - b) / a) / (dl * dl);
}

/// Edge-weight rule with its derivative wrt the two endpoint coordinates.
/// Branch indicators are locally constant, so their derivative is zero
/// almost everywhere and omitted.
struct WeightRule {
    bool lower;
    Eigen::VectorXd phi; // evaluated at the working point; unused when lower

    double weight(const Eigen::VectorXd& rho, int i, int j) const {
        if (lower) return std::max(rho(i), rho(j));
        if (phi(i) > phi(j) + kPhiTieTol) return rho(i);
        if (phi(j) > phi(i) + kPhiTieTol) return rho(j);
        return logarithmic_mean(rho(i), rho(j));
    }

    void weight_deriv(const Eigen::VectorXd& rho, int i, int j, double& di, double& dj) const {
        if (lower) {
            if (rho(i) > rho(j)) {
                di = 1.0;
                dj = 0.0;
            } else if (rho(j) > rho(i)) {
                di = 0.0;
                dj = 1.0;
            } else {
                di = dj = 0.5;
            }
            return;
        }
        if (phi(i) > phi(j) + kPhiTieTol) {
            di = 1.0;
            dj = 0.0;
        } else if (phi(j) > phi(i) + kPhiTieTol) {
            di = 0.0;
            dj = 1.0;
        } else {
            di = logmean_deriv_first(rho(i), rho(j));
            dj = logmean_deriv_first(rho(j), rho(i));
        }
    }
};

WeightRule make_rule(const MetricKind& kind, const Eigen::VectorXd& rho) {
    WeightRule r;
    r.lower = kind.is_lower_bound();
    if (!r.lower) r.phi = kind.potential_at(Distribution(rho));
    return r;
}

Eigen::MatrixXd metric_laplacian(const Graph& g, const WeightRule& rule,
                                 const Eigen::VectorXd& rho) {
    const int n = g.vertex_count();
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [i, j] : g.edges()) {
        const double w = rule.weight(rho, i, j);
        l(i, j) -= w;
        l(j, i) -= w;
        l(i, i) += w;
        l(j, j) += w;
    }
    return l;
}

/// Solves p L = sigma with sum(p) = 0 via the rank-completing shift
/// L + (1/n) 1 1^T, plus one iterative-refinement pass.
Eigen::VectorXd kernel_gauged_solve(const Eigen::MatrixXd& l, const Eigen::VectorXd& sigma) {
    const int n = static_cast<int>(l.rows());
    Eigen::MatrixXd shifted = l;
    shifted.array() += 1.0 / n;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(shifted);
    if (ldlt.info() != Eigen::Success)
        throw NumericalError("invert_identification: factorization failed");
    Eigen::VectorXd p = ldlt.solve(sigma);
    p.array() -= p.mean();
    Eigen::VectorXd r = sigma - l * p;
    p += ldlt.solve(r);
    p.array() -= p.mean();
    const double residual = (l * p - sigma).cwiseAbs().maxCoeff();
    if (residual > kResidualTol)
        throw NumericalError("invert_identification: residual " + std::to_string(residual) +
                             " exceeds tolerance (near-singular weights)");
    return p;
}

/// Energy K * sum_k g_mid(d_k, d_k) of a knot matrix (rows are simplex
/// points); optionally accumulates the exact gradient.
double curve_energy(const Graph& g, const MetricKind& kind, const Eigen::MatrixXd& knots,
                    Eigen::MatrixXd* grad) {
    const int segments = static_cast<int>(knots.rows()) - 1;
    const double inv_dt = static_cast<double>(segments);
    if (grad) grad->setZero(knots.rows(), knots.cols());
    KahanSum energy;
    Eigen::VectorXd mid, delta, q;
    for (int k = 0; k < segments; ++k) {
        mid = 0.5 * (knots.row(k) + knots.row(k + 1));
        delta = knots.row(k + 1) - knots.row(k);
        const WeightRule rule = make_rule(kind, mid);
        const Eigen::MatrixXd l = metric_laplacian(g, rule, mid);
        const Eigen::VectorXd p = kernel_gauged_solve(l, delta);
        energy.add(inv_dt * p.dot(delta));
        if (!grad) continue;
        // dg/drho_m = -sum_edges dw_ij/drho_m (p_i - p_j)^2, midpoint chain
        // rule contributes 1/2 to both adjacent knots.
        q.setZero(knots.cols());
        for (const auto& [i, j] : g.edges()) {
            double di, dj;
            rule.weight_deriv(mid, i, j, di, dj);
            const double s = p(i) - p(j);
            q(i) += di * s * s;
            q(j) += dj * s * s;
        }
        grad->row(k) += inv_dt * (-2.0 * p - 0.5 * q).transpose();
        grad->row(k + 1) += inv_dt * (2.0 * p - 0.5 * q).transpose();
    }
    return energy.value();
}

/// Euclidean projection onto {x : sum x = 1, x_i >= margin}.
void project_interior(Eigen::VectorXd& x, double margin) {
    const int n = static_cast<int>(x.size());
    const double total = 1.0 - n * margin;
    if (total <= 0.0) throw std::invalid_argument("geodesic: interior margin too large");
    Eigen::VectorXd z = x.array() - margin;
    std::vector<double> sorted(z.data(), z.data() + n);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double prefix = 0.0, tau = 0.0;
    for (int k = 0; k < n; ++k) {
        prefix += sorted[k];
        const double cand = (prefix - total) / (k + 1);
        if (k + 1 == n || sorted[k + 1] - cand <= 0.0) {
            tau = cand;
            if (k + 1 == n || sorted[k] - cand > 0.0) break;
        }
    }
    for (int i = 0; i < n; ++i) x(i) = std::max(z(i) - tau, 0.0) + margin;
}

double chord_gap_bound(const Graph& g, const MetricKind& kind, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b, int segments) {
    // max over chord knots and midpoints of 1/lambda2 of the metric weights
    double c1 = 0.0;
    const int samples = 2 * segments + 1;
    for (int s = 0; s < samples; ++s) {
        const double t = static_cast<double>(s) / (samples - 1);
        const Eigen::VectorXd x = (1.0 - t) * a + t * b;
        const WeightRule rule = make_rule(kind, x);
        const SpectralSummary spec = spectral_summary(metric_laplacian(g, rule, x));
        c1 = std::max(c1, 1.0 / spec.lambda2);
    }
    return std::sqrt(c1) * (a - b).norm();
}

} // namespace

double logarithmic_mean(double r1, double r2) {
    if (!(r1 > 0.0) || !(r2 > 0.0))
        throw std::invalid_argument("logarithmic_mean: needs positive arguments");
    // Near the diagonal the quotient cancels; the midpoint is exact to
    // second order there.
    if (std::abs(r1 - r2) <= 1e-9 * (r1 + r2)) return 0.5 * (r1 + r2);
    return (r1 - r2) / (std::log(r1) - std::log(r2));
}

MetricKind MetricKind::lower_bound() {
    MetricKind k;
    k.lower_bound_ = true;
    k.name_ = "lower_bound";
    return k;
}

MetricKind MetricKind::fixed_potential(Eigen::VectorXd phi) {
    MetricKind k;
    k.phi_ = [phi = std::move(phi)](const Distribution& rho) -> Eigen::VectorXd {
        if (phi.size() != rho.size())
            throw std::invalid_argument("MetricKind: potential size mismatch");
        return phi;
    };
    k.name_ = "fixed_potential";
    return k;
}

MetricKind MetricKind::free_energy_potential(Eigen::VectorXd psi, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("MetricKind: beta must be positive");
    MetricKind k;
    k.phi_ = [psi = std::move(psi), beta](const Distribution& rho) -> Eigen::VectorXd {
        if (psi.size() != rho.size())
            throw std::invalid_argument("MetricKind: potential size mismatch");
        return psi + beta * rho.values().array().log().matrix();
    };
    k.name_ = "free_energy_potential";
    return k;
}

Eigen::VectorXd MetricKind::potential_at(const Distribution& rho) const {
    if (lower_bound_) throw std::logic_error("MetricKind: lower-bound rule has no potential");
    return phi_(rho);
}

TangentVector::TangentVector(Eigen::VectorXd sigma) : sigma_(std::move(sigma)) {
    KahanSum s;
    for (int i = 0; i < sigma_.size(); ++i) s.add(sigma_(i));
    if (std::abs(s.value()) > 1e-12)
        throw std::invalid_argument("TangentVector: components sum to " +
                                    std::to_string(s.value()) + ", not 0");
}

TangentVector TangentVector::project(const Eigen::VectorXd& v) {
    return TangentVector(v.array() - v.mean());
}

EdgeWeights metric_weights(const Graph& g, const MetricKind& kind, const Distribution& rho) {
    if (g.vertex_count() != rho.size())
        throw std::invalid_argument("metric_weights: dimension mismatch");
    const WeightRule rule = make_rule(kind, rho.values());
    const int n = g.vertex_count();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [i, j] : g.edges()) {
        const double wij = rule.weight(rho.values(), i, j);
        w(i, j) = wij;
        w(j, i) = wij;
    }
    return EdgeWeights(g, std::move(w));
}

TangentVector identify(const Graph& g, const MetricKind& kind, const Distribution& rho,
                       const Eigen::VectorXd& p) {
    if (g.vertex_count() != rho.size() || p.size() != rho.size())
        throw std::invalid_argument("identify: dimension mismatch");
    const WeightRule rule = make_rule(kind, rho.values());
    const Eigen::MatrixXd l = metric_laplacian(g, rule, rho.values());
    Eigen::VectorXd sigma = l * p; // symmetric, so p L == L p
    // Row sums of L vanish, so the result is zero-sum up to roundoff.
    sigma.array() -= sigma.mean();
    return TangentVector(std::move(sigma));
}

Eigen::VectorXd invert_identification(const Graph& g, const MetricKind& kind,
                                      const Distribution& rho, const TangentVector& sigma) {
    if (g.vertex_count() != rho.size() || sigma.size() != rho.size())
        throw std::invalid_argument("invert_identification: dimension mismatch");
    const WeightRule rule = make_rule(kind, rho.values());
    return kernel_gauged_solve(metric_laplacian(g, rule, rho.values()), sigma.values());
}

double metric_form(const Graph& g, const MetricKind& kind, const Distribution& rho,
                   const TangentVector& sigma1, const TangentVector& sigma2) {
    const Eigen::VectorXd p1 = invert_identification(g, kind, rho, sigma1);
    return p1.dot(sigma2.values());
}

double curve_length(const Graph& g, const MetricKind& kind, const DiscreteCurve& curve) {
    if (curve.segments() < 1) throw std::invalid_argument("curve_length: need >= 1 segment");
    KahanSum length;
    for (int k = 0; k < curve.segments(); ++k) {
        const Eigen::VectorXd mid =
            0.5 * (curve.knots[k].values() + curve.knots[k + 1].values());
        const Eigen::VectorXd delta = curve.knots[k + 1].values() - curve.knots[k].values();
        const WeightRule rule = make_rule(kind, mid);
        const Eigen::VectorXd p = kernel_gauged_solve(metric_laplacian(g, rule, mid), delta);
        length.add(std::sqrt(std::max(0.0, p.dot(delta))));
    }
    return length.value();
}

GeodesicResult geodesic_distance(const Graph& g, const MetricKind& kind,
                                 const Distribution& rho1, const Distribution& rho2,
                                 const GeodesicConfig& cfg) {
    const int n = g.vertex_count();
    if (rho1.size() != n || rho2.size() != n)
        throw std::invalid_argument("geodesic_distance: dimension mismatch");
    if (cfg.segments < 1) throw std::invalid_argument("geodesic_distance: need >= 1 segment");

    const int K = cfg.segments;
    Eigen::MatrixXd knots(K + 1, n);
    for (int k = 0; k <= K; ++k) {
        const double t = static_cast<double>(k) / K;
        knots.row(k) = ((1.0 - t) * rho1.values() + t * rho2.values()).transpose();
    }
    GeodesicResult result;
    for (int k = 1; k < K; ++k) {
        Eigen::VectorXd row = knots.row(k);
        project_interior(row, cfg.interior_margin);
        knots.row(k) = row.transpose();
    }

    // Energy descent over the free interior knots: same minimizer as arc
    // length, without the square-root kinks.
    Eigen::MatrixXd grad;
    double energy = curve_energy(g, kind, knots, &grad);
    double alpha = 0.01 / K;
    Eigen::MatrixXd candidate = knots;
    for (result.iterations = 1; result.iterations <= cfg.max_iters; ++result.iterations) {
        // project the direction into the per-knot tangent space
        for (int k = 1; k < K; ++k) grad.row(k).array() -= grad.row(k).mean();

        bool accepted = false;
        double new_energy = energy;
        for (int bt = 0; bt < 60; ++bt) {
            candidate = knots;
            for (int k = 1; k < K; ++k) {
                Eigen::VectorXd row = knots.row(k) - alpha * grad.row(k);
                project_interior(row, cfg.interior_margin);
                candidate.row(k) = row.transpose();
            }
            const double moved = (candidate - knots).squaredNorm();
            if (moved == 0.0) break;
            new_energy = curve_energy(g, kind, candidate, nullptr);
            if (new_energy <= energy - 1e-4 * moved / alpha) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
            if (alpha < 1e-18) break;
        }
        if (!accepted) {
            result.converged = true; // projected-stationary point
            break;
        }
        const double drop = energy - new_energy;
        knots.swap(candidate);
        energy = new_energy;
        alpha = std::min(alpha * 1.5, 1e3);
        if (drop <= cfg.energy_tol * std::max(energy, 1e-300)) {
            result.converged = true;
            break;
        }
        energy = curve_energy(g, kind, knots, &grad);
    }

    result.margin_active = false;
    for (int k = 1; k < K; ++k)
        if (knots.row(k).minCoeff() <= cfg.interior_margin * (1.0 + 1e-12))
            result.margin_active = true;

    result.curve.knots.clear();
    result.curve.knots.reserve(K + 1);
    result.curve.knots.emplace_back(rho1);
    for (int k = 1; k < K; ++k) {
        Eigen::VectorXd row = knots.row(k);
        row /= row.sum(); // absorb projection roundoff
        result.curve.knots.emplace_back(Distribution(row));
    }
    result.curve.knots.emplace_back(rho2);

    result.distance_upper = curve_length(g, kind, result.curve);
    result.chord_upper = chord_gap_bound(g, kind, rho1.values(), rho2.values(), K);
    return result;
}

double talagrand_global_constant(const Graph& g, const Distribution& mu) {
    if (g.vertex_count() != mu.size())
        throw std::invalid_argument("talagrand_global_constant: dimension mismatch");
    const double m = mu.min_coord();
    const double big = mu.max_coord();
    const double n = g.vertex_count();
    const double deg = g.max_degree();
    const double lambda2 = spectral_summary(laplacian(g)).lambda2;
    return big * (deg * n * n * n + 4.0) / (2.0 * lambda2 * m) * std::log(18.0 * big / (m * m * m));
}

TalagrandReport check_talagrand_global(const Graph& g, const Distribution& mu,
                                       const Distribution& nu, const GeodesicConfig& cfg) {
    TalagrandReport report{};
    report.constant = talagrand_global_constant(g, mu);
    report.entropy = relative_entropy(nu, mu);
    report.rhs = report.constant * report.entropy;

    GeodesicConfig attempt = cfg;
    const MetricKind kind = MetricKind::lower_bound();
    for (int refine = 0; refine < 3; ++refine) {
        const GeodesicResult geo = geodesic_distance(g, kind, nu, mu, attempt);
        const double d = geo.distance();
        report.lhs = d * d;
        report.segments_used = attempt.segments;
        report.holds = report.lhs <= report.rhs;
        if (report.holds) break;
        attempt.segments *= 2; // distances are upper bounds; refine before failing
        attempt.max_iters *= 2;
    }
    return report;
}

LocalTalagrandReport check_talagrand_local(const Graph& g, const Distribution& mu,
                                           const Distribution& nu,
                                           const LocalTalagrandConfig& cfg) {
    const int n = g.vertex_count();
    if (mu.size() != n || nu.size() != n)
        throw std::invalid_argument("check_talagrand_local: dimension mismatch");
    if (!(cfg.margin > 0.0) || !(cfg.margin < 1.0 / n))
        throw std::invalid_argument("check_talagrand_local: margin must lie in (0, 1/n)");
    if (nu.min_coord() < cfg.margin - 1e-12)
        throw std::invalid_argument("check_talagrand_local: nu outside the compact set");

    // The proof's choice of potential: psi = -log mu with beta = 1, making
    // mu the equilibrium and F = H(.|mu).
    const Eigen::VectorXd psi = -mu.values().array().log();
    const PotentialSystem ps(psi, 1.0);
    const EpsilonLadder ladder = epsilon_ladder_from_floor(ps, cfg.margin);

    const double m = mu.min_coord();
    const double big = mu.max_coord();
    const double lambda2 = spectral_summary(laplacian(g)).lambda2;

    LocalTalagrandReport report{};
    report.rate = lambda2 * (m / big) * ladder.eps[n - 1] / (1.0 - ladder.eps[1]);
    report.t_horizon = std::log(4.0 * big / m) / report.rate;

    // Deterministic covering sample of the ladder set: distinguished points
    // plus low-discrepancy simplex points pulled toward uniform until they
    // pass the membership test.
    std::vector<Eigen::VectorXd> samples;
    const Eigen::VectorXd uniform_v = Eigen::VectorXd::Constant(n, 1.0 / n);
    auto push_if_member = [&](const Eigen::VectorXd& x) {
        if (x.minCoeff() <= 0.0) return;
        Eigen::VectorXd y = x / x.sum();
        if (ladder.contains(Distribution(y), 0.0)) samples.push_back(std::move(y));
    };
    push_if_member(uniform_v);
    push_if_member(mu.values());
    push_if_member(nu.values());
    for (int v = 0; v < n; ++v) {
        Eigen::VectorXd peak = Eigen::VectorXd::Constant(n, ladder.eps[1] / (n - 1));
        peak(v) = 1.0 - ladder.eps[1];
        push_if_member(peak);
        Eigen::VectorXd pit = Eigen::VectorXd::Constant(n, (1.0 - ladder.eps[n - 1]) / (n - 1));
        pit(v) = ladder.eps[n - 1];
        push_if_member(pit);
    }
    std::vector<unsigned> primes = {2};
    for (unsigned c = 3; static_cast<int>(primes.size()) < n - 1; c += 2) {
        bool is_prime = true;
        for (unsigned p : primes)
            if (c % p == 0) {
                is_prime = false;
                break;
            }
        if (is_prime) primes.push_back(c);
    }
    for (int idx = 0; idx < cfg.sample_resolution; ++idx) {
        std::vector<double> u(n - 1);
        for (int j = 0; j < n - 1; ++j) u[j] = halton(static_cast<std::uint64_t>(idx), primes[j]);
        std::sort(u.begin(), u.end());
        Eigen::VectorXd x(n);
        double prev = 0.0;
        for (int j = 0; j < n - 1; ++j) {
            x(j) = std::max(u[j] - prev, 1e-12);
            prev = u[j];
        }
        x(n - 1) = std::max(1.0 - prev, 1e-12);
        x /= x.sum();
        if (ladder.contains(Distribution(x), 0.0)) {
            samples.push_back(x);
            continue;
        }
        // bisect toward uniform for a point on the boundary of the set
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 40; ++it) {
            const double mid = 0.5 * (lo + hi);
            Eigen::VectorXd y = (1.0 - mid) * x + mid * uniform_v;
            if (ladder.contains(Distribution(y), 0.0))
                hi = mid;
            else
                lo = mid;
        }
        push_if_member((1.0 - hi) * x + hi * uniform_v);
    }

    const MetricKind kind = MetricKind::fixed_potential(psi);
    double c1 = 0.0;
    double c2 = std::numeric_limits<double>::infinity();
    for (const auto& x : samples) {
        const WeightRule rule = make_rule(kind, x);
        const SpectralSummary spec = spectral_summary(metric_laplacian(g, rule, x));
        c1 = std::max(c1, 1.0 / spec.lambda2);
        c2 = std::min(c2, 1.0 / spec.lambda_n);
    }
    report.c1 = c1;
    report.c2 = c2;
    report.samples_used = static_cast<int>(samples.size());
    report.constant = 2.0 * report.t_horizon * c1 / c2 + 2.0 * report.t_horizon;

    const GeodesicResult geo = geodesic_distance(g, kind, mu, nu, cfg.geodesic);
    const double d = geo.distance();
    report.lhs = d * d;
    report.rhs = report.constant * relative_entropy(nu, mu);
    report.holds = report.lhs <= report.rhs;
    return report;
}

} // namespace gfp
