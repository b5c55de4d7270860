#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "graphfp/dynamics.hpp"
#include "graphfp/graph.hpp"
#include "graphfp/rates.hpp"

namespace gfp {

/// Cross-product sweep: graphs x potentials x betas x variants. Potentials
/// are either files (matched to graphs by length) or per-graph random draws
/// from the recorded seed.
struct CorpusSpec {
    std::vector<Graph> graphs;
    std::vector<std::string> graph_labels;
    std::vector<Eigen::VectorXd> potentials; // from files
    int random_potentials = 0;
    double potential_amplitude = 1.0;
    std::vector<double> betas;
    std::vector<FpeVariant> variants;
    double t_end = 5.0;
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    bool rho0_uniform = false; // otherwise random interior per cell
    std::uint64_t seed = 1;
    MlsiConfig mlsi;
    int jobs = 0; // 0 = hardware concurrency
};

struct CellReport {
    std::string graph;
    int potential_index = 0;
    double beta = 1.0;
    FpeVariant variant = FpeVariant::EquationI;
    std::uint64_t seed = 0;

    double rate_fpe2 = 0.0;
    double rate_fpe1_literal = 0.0;
    double rate_fpe1_corrected = 0.0;
    double gamma_hat = 0.0;      // variant II only
    double entropy_rate = 0.0;   // variant II only

    bool l2_envelope_ok = false;
    bool entropy_envelope_ok = true;  // variant II only, trivially true otherwise
    bool compact_set_ok = true;       // variant I only
    double l2_worst_ratio = 0.0;
    double empirical_rate = 0.0;
    double fit_residual = 0.0;
    int samples = 0;

    bool passed() const { return l2_envelope_ok && entropy_envelope_ok && compact_set_ok; }
    nlohmann::json to_json() const;
};

/// Corpus definition text: `graph <path>`, `potential <path>`,
/// `random_potentials <count> <amplitude>`, `beta <v...>`, `variant <1|2...>`,
/// `t_end <v>`, `rel_tol <v>`, `abs_tol <v>`, `rho0 uniform|random`,
/// '#' comments. Relative paths resolve against the definition file.
CorpusSpec parse_corpus_file(const std::string& path);

/// Runs every cell on a bounded worker pool; the report order is the
/// deterministic cell order regardless of scheduling.
std::vector<CellReport> run_corpus(const CorpusSpec& spec);

CellReport run_corpus_cell(const Graph& g, const std::string& label,
                           const Eigen::VectorXd& psi, int potential_index, double beta,
                           FpeVariant variant, const Distribution& rho0,
                           const CorpusSpec& spec, std::uint64_t cell_seed);

} // namespace gfp
