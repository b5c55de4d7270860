#include "graphfp/corpus.hpp"

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "graphfp/errors.hpp"
#include "graphfp/io.hpp"

namespace gfp {

nlohmann::json CellReport::to_json() const {
    nlohmann::json j;
    j["graph"] = graph;
    j["potential_index"] = potential_index;
    j["beta"] = beta;
    j["variant"] = variant == FpeVariant::EquationI ? 1 : 2;
    j["seed"] = seed;
    j["rate_fpe2"] = rate_fpe2;
    j["rate_fpe1_literal"] = rate_fpe1_literal;
    j["rate_fpe1_corrected"] = rate_fpe1_corrected;
    j["gamma_hat"] = gamma_hat;
    j["entropy_rate"] = entropy_rate;
    j["l2_envelope_ok"] = l2_envelope_ok;
    j["entropy_envelope_ok"] = entropy_envelope_ok;
    j["compact_set_ok"] = compact_set_ok;
    j["l2_worst_ratio"] = l2_worst_ratio;
    j["empirical_rate"] = empirical_rate;
    j["fit_residual"] = fit_residual;
    j["samples"] = samples;
    j["passed"] = passed();
    return j;
}

CorpusSpec parse_corpus_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp.string() : (base / fp).string();
    };

    CorpusSpec spec;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        const std::string at = path + ":" + std::to_string(lineno);
        if (tag == "graph") {
            std::string p;
            if (!(ls >> p)) throw ParseError(at + ": expected 'graph <path>'");
            spec.graphs.push_back(read_graph(resolve(p)));
            spec.graph_labels.push_back(std::filesystem::path(p).stem().string());
        } else if (tag == "potential") {
            std::string p;
            if (!(ls >> p)) throw ParseError(at + ": expected 'potential <path>'");
            spec.potentials.push_back(read_vector(resolve(p)));
        } else if (tag == "random_potentials") {
            if (!(ls >> spec.random_potentials >> spec.potential_amplitude))
                throw ParseError(at + ": expected 'random_potentials <count> <amplitude>'");
        } else if (tag == "beta") {
            double b;
            while (ls >> b) spec.betas.push_back(b);
            if (spec.betas.empty()) throw ParseError(at + ": expected 'beta <v...>'");
        } else if (tag == "variant") {
            int v;
            while (ls >> v) {
                if (v != 1 && v != 2) throw ParseError(at + ": variant must be 1 or 2");
                spec.variants.push_back(v == 1 ? FpeVariant::EquationI : FpeVariant::EquationII);
            }
        } else if (tag == "t_end") {
            if (!(ls >> spec.t_end)) throw ParseError(at + ": expected 't_end <v>'");
        } else if (tag == "rel_tol") {
            if (!(ls >> spec.rel_tol)) throw ParseError(at + ": expected 'rel_tol <v>'");
        } else if (tag == "abs_tol") {
            if (!(ls >> spec.abs_tol)) throw ParseError(at + ": expected 'abs_tol <v>'");
        } else if (tag == "seed") {
            if (!(ls >> spec.seed)) throw ParseError(at + ": expected 'seed <v>'");
        } else if (tag == "rho0") {
            std::string mode;
            if (!(ls >> mode) || (mode != "uniform" && mode != "random"))
                throw ParseError(at + ": expected 'rho0 uniform|random'");
            spec.rho0_uniform = mode == "uniform";
        } else {
            throw ParseError(at + ": unknown directive '" + tag + "'");
        }
    }
    if (spec.graphs.empty()) throw ParseError(path + ": no graphs listed");
    if (spec.betas.empty()) throw ParseError(path + ": no beta values listed");
    if (spec.variants.empty()) throw ParseError(path + ": no variants listed");
    if (spec.potentials.empty() && spec.random_potentials == 0)
        throw ParseError(path + ": no potentials listed or generated");
    return spec;
}

CellReport run_corpus_cell(const Graph& g, const std::string& label,
                           const Eigen::VectorXd& psi, int potential_index, double beta,
                           FpeVariant variant, const Distribution& rho0,
                           const CorpusSpec& spec, std::uint64_t cell_seed) {
    CellReport cell;
    cell.graph = label;
    cell.potential_index = potential_index;
    cell.beta = beta;
    cell.variant = variant;
    cell.seed = cell_seed;

    const PotentialSystem ps(psi, beta);
    IntegratorConfig icfg;
    icfg.rel_tol = spec.rel_tol;
    icfg.abs_tol = spec.abs_tol;
    icfg.t_end = spec.t_end;
    const Trajectory traj = integrate(g, ps, variant, rho0, icfg);
    cell.samples = traj.samples();

    cell.rate_fpe2 = rate_constant_fpe2(g, ps);
    const Fpe1RateConstants c1 = rate_constant_fpe1(g, ps, rho0);
    cell.rate_fpe1_literal = c1.paper_literal;
    cell.rate_fpe1_corrected = c1.corrected;

    const double l2_constant =
        variant == FpeVariant::EquationII ? cell.rate_fpe2 : cell.rate_fpe1_corrected;
    // states near equilibrium are only accurate to ~rel_tol, so the
    // quadratic diagnostics carry a ~rel_tol^2 floor the envelopes must
    // sit above
    const double floor_slack = std::max(1e-24, 100.0 * spec.rel_tol * spec.rel_tol);
    const EnvelopeCheck l2 =
        check_envelope(traj, DecayDiagnostic::WeightedL2, l2_constant, 1e-6, floor_slack);
    cell.l2_envelope_ok = l2.holds;
    cell.l2_worst_ratio = l2.worst_ratio;

    const RateReport fit = fit_decay_rate(traj, DecayDiagnostic::WeightedL2, l2_constant);
    cell.empirical_rate = fit.empirical_rate;
    cell.fit_residual = fit.fit_residual;

    if (variant == FpeVariant::EquationI) {
        cell.compact_set_ok = check_compact_set(traj, epsilon_ladder(ps, rho0)).holds;
    } else {
        MlsiConfig mcfg = spec.mlsi;
        mcfg.seed ^= cell_seed;
        cell.gamma_hat = estimate_mlsi(g, ps.equilibrium(), mcfg).gamma_hat;
        cell.entropy_rate = entropy_rate_constant(g, ps, cell.gamma_hat);
        cell.entropy_envelope_ok = check_envelope(traj, DecayDiagnostic::RelativeEntropy,
                                                  cell.entropy_rate, 1e-6, floor_slack)
                                       .holds;
    }
    return cell;
}

std::vector<CellReport> run_corpus(const CorpusSpec& spec) {
    struct Cell {
        int graph_index;
        int potential_index; // >= file count means random draw
        double beta;
        FpeVariant variant;
    };
    std::vector<Cell> cells;
    const int potentials_per_graph =
        static_cast<int>(spec.potentials.size()) + spec.random_potentials;
    for (int gi = 0; gi < static_cast<int>(spec.graphs.size()); ++gi)
        for (int pi = 0; pi < potentials_per_graph; ++pi) {
            if (pi < static_cast<int>(spec.potentials.size()) &&
                spec.potentials[pi].size() != spec.graphs[gi].vertex_count())
                continue; // file potential for a different graph size
            for (double beta : spec.betas)
                for (FpeVariant v : spec.variants) cells.push_back({gi, pi, beta, v});
        }

    std::vector<CellReport> reports(cells.size());
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        while (true) {
            const std::size_t idx = cursor.fetch_add(1);
            if (idx >= cells.size()) return;
            const Cell& c = cells[idx];
            try {
                const Graph& g = spec.graphs[c.graph_index];
                const int n = g.vertex_count();
                SplitMix64 rng = SplitMix64(spec.seed).fork(idx);
                Eigen::VectorXd psi;
                if (c.potential_index < static_cast<int>(spec.potentials.size())) {
                    psi = spec.potentials[c.potential_index];
                } else {
                    // Per-(graph, draw) stream independent of beta/variant so
                    // every beta and variant sees the same potential.
                    SplitMix64 prng =
                        SplitMix64(spec.seed ^ 0x706f74ull)
                            .fork(static_cast<std::uint64_t>(c.graph_index) * 1000 +
                                  c.potential_index);
                    psi.resize(n);
                    for (int i = 0; i < n; ++i)
                        psi(i) = prng.next_in(-spec.potential_amplitude,
                                              spec.potential_amplitude);
                }
                SplitMix64 rrng = SplitMix64(spec.seed ^ 0x72686f30ull)
                                      .fork(static_cast<std::uint64_t>(c.graph_index) * 1000 +
                                            c.potential_index);
                const Distribution rho0 = spec.rho0_uniform
                                              ? Distribution::uniform(n)
                                              : Distribution::random_interior(n, rrng);
                reports[idx] = run_corpus_cell(g, spec.graph_labels.empty()
                                                      ? "g" + std::to_string(c.graph_index)
                                                      : spec.graph_labels[c.graph_index],
                                               psi, c.potential_index, c.beta, c.variant, rho0,
                                               spec, rng.next());
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    unsigned jobs = spec.jobs > 0 ? static_cast<unsigned>(spec.jobs)
                                  : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, std::max<std::size_t>(cells.size(), 1));
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return reports;
}

} // namespace gfp
