#include "graphfp/energy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "graphfp/kahan.hpp"

namespace gfp {

namespace {

constexpr double kSumTol = 1e-12;
constexpr double kInteriorFloor = 1e-300; // rejects true zeros only

void require_same_size(int a, int b, const char* where) {
    if (a != b)
        throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                    std::to_string(a) + " vs " + std::to_string(b) + ")");
}

} // namespace

Distribution::Distribution(Eigen::VectorXd rho) : rho_(std::move(rho)) {
    if (rho_.size() < 2) throw std::invalid_argument("Distribution: need length >= 2");
    KahanSum total;
    for (int i = 0; i < rho_.size(); ++i) {
        const double v = rho_(i);
        if (!std::isfinite(v)) throw std::invalid_argument("Distribution: non-finite entry");
        if (v <= kInteriorFloor)
            throw std::invalid_argument("Distribution: entry " + std::to_string(i) +
                                        " not strictly positive");
        total.add(v);
    }
    if (std::abs(total.value() - 1.0) > kSumTol)
        throw std::invalid_argument("Distribution: coordinates sum to " +
                                    std::to_string(total.value()) + ", not 1");
}

Distribution Distribution::uniform(int n) {
    return Distribution(Eigen::VectorXd::Constant(n, 1.0 / n));
}

Distribution Distribution::normalized(const Eigen::VectorXd& positive) {
    KahanSum total;
    for (int i = 0; i < positive.size(); ++i) {
        if (!(positive(i) > 0.0))
            throw std::invalid_argument("Distribution::normalized: nonpositive entry");
        total.add(positive(i));
    }
    return Distribution(positive / total.value());
}

Distribution Distribution::random_interior(int n, SplitMix64& rng) {
    // Dirichlet(1,...,1) via normalized exponentials; resample the rare
    // draws with a coordinate too close to the boundary for downstream logs.
    while (true) {
        Eigen::VectorXd e(n);
        for (int i = 0; i < n; ++i) e(i) = -std::log(rng.next_open());
        Eigen::VectorXd rho = e / e.sum();
        if (rho.minCoeff() > 1e-12) return Distribution::normalized(rho);
    }
}

PotentialSystem::PotentialSystem(Eigen::VectorXd psi, double beta)
    : psi_(std::move(psi)), beta_(beta), gibbs_(gibbs(psi_, beta)) {}

Distribution gibbs(const Eigen::VectorXd& psi, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("gibbs: beta must be positive");
    if (psi.size() < 2) throw std::invalid_argument("gibbs: need length >= 2");
    for (int i = 0; i < psi.size(); ++i)
        if (!std::isfinite(psi(i))) throw std::invalid_argument("gibbs: non-finite potential");
    // Shift by the max exponent before exponentiating; the normalization
    // cancels the shift, so overflow is impossible for finite psi.
    Eigen::VectorXd z = -psi / beta;
    const double shift = z.maxCoeff();
    Eigen::VectorXd w = (z.array() - shift).exp();
    return Distribution::normalized(w);
}

double free_energy(const PotentialSystem& ps, const Distribution& rho) {
    require_same_size(ps.size(), rho.size(), "free_energy");
    KahanSum acc;
    for (int i = 0; i < rho.size(); ++i) {
        const double r = rho[i];
        acc.add(ps.psi()(i) * r + ps.beta() * r * std::log(r));
    }
    return acc.value();
}

double weighted_l2_sq(const Distribution& rho, const Distribution& ref) {
    require_same_size(rho.size(), ref.size(), "weighted_l2_sq");
    KahanSum acc;
    for (int i = 0; i < rho.size(); ++i) {
        const double d = rho[i] - ref[i];
        acc.add(d * d / ref[i]);
    }
    return acc.value();
}

double relative_entropy(const Distribution& nu, const Distribution& mu) {
    require_same_size(nu.size(), mu.size(), "relative_entropy");
    // Bregman form of sum nu log(nu/mu): every term mu((1+d)log1p(d) - d)
    // is nonnegative and second order in d = (nu-mu)/mu. The textbook sum
    // carries a linear term (sum nu - sum mu) ~ 1e-16 of normalization
    // roundoff that would swamp entropies late in a converged trajectory.
    KahanSum acc;
    for (int i = 0; i < nu.size(); ++i) {
        const double d = (nu[i] - mu[i]) / mu[i];
        const double l = std::log1p(d);
        acc.add(mu[i] * ((1.0 + d) * l - d));
    }
    return acc.value();
}

double euclidean_sq(const Distribution& rho, const Distribution& ref) {
    require_same_size(rho.size(), ref.size(), "euclidean_sq");
    KahanSum acc;
    for (int i = 0; i < rho.size(); ++i) {
        const double d = rho[i] - ref[i];
        acc.add(d * d);
    }
    return acc.value();
}

DiscrepancyReport discrepancy(const Distribution& rho, const Distribution& ref) {
    return {weighted_l2_sq(rho, ref), relative_entropy(rho, ref), euclidean_sq(rho, ref)};
}

double dirichlet_form(const Graph& g, const Distribution& ref, const Eigen::VectorXd& f) {
    require_same_size(g.vertex_count(), ref.size(), "dirichlet_form");
    require_same_size(static_cast<int>(f.size()), ref.size(), "dirichlet_form");
    for (int i = 0; i < f.size(); ++i)
        if (!(f(i) > 0.0)) throw std::invalid_argument("dirichlet_form: f must be positive");
    // The ordered double sum visits each edge from both endpoints, once
    // weighted by ref_i and once by ref_j.
    KahanSum acc;
    for (const auto& [i, j] : g.edges()) {
        const double term = (std::log(f(i)) - std::log(f(j))) * (f(i) - f(j));
        acc.add(term * (ref[i] + ref[j]));
    }
    return acc.value();
}

double entropy_functional(const Distribution& ref, const Eigen::VectorXd& f) {
    require_same_size(static_cast<int>(f.size()), ref.size(), "entropy_functional");
    for (int i = 0; i < f.size(); ++i)
        if (!(f(i) > 0.0)) throw std::invalid_argument("entropy_functional: f must be positive");
    KahanSum mean, flogf;
    for (int i = 0; i < f.size(); ++i) {
        mean.add(ref[i] * f(i));
        flogf.add(ref[i] * f(i) * std::log(f(i)));
    }
    return flogf.value() - mean.value() * std::log(mean.value());
}

} // namespace gfp
