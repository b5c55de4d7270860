#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "graphfp/corpus.hpp"
#include "graphfp/errors.hpp"
#include "graphfp/io.hpp"

using namespace gfp;

namespace {

struct TempDir {
    std::filesystem::path dir;
    TempDir() {
        dir = std::filesystem::temp_directory_path() /
              ("graphfp_corpus_" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir);
    }
    ~TempDir() { std::filesystem::remove_all(dir); }
    std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

} // namespace

TEST_CASE("corpus definition files parse with path resolution") {
    TempDir tmp;
    write_graph(Graph::path(3), tmp / "p3.txt");
    write_graph(Graph::complete(4), tmp / "k4.txt");
    {
        std::ofstream spec(tmp / "corpus.txt");
        spec << "# comment line\n"
             << "graph p3.txt\n"
             << "graph k4.txt\n"
             << "random_potentials 2 1.0\n"
             << "beta 0.5 1\n"
             << "variant 1 2\n"
             << "t_end 2.5\n"
             << "rel_tol 1e-8\n"
             << "seed 42\n"
             << "rho0 random\n";
    }
    const CorpusSpec spec = parse_corpus_file(tmp / "corpus.txt");
    CHECK(spec.graphs.size() == 2);
    CHECK(spec.graph_labels[0] == "p3");
    CHECK(spec.random_potentials == 2);
    CHECK(spec.betas == std::vector<double>{0.5, 1.0});
    CHECK(spec.variants.size() == 2);
    CHECK(spec.t_end == 2.5);
    CHECK(spec.rel_tol == 1e-8);
    CHECK(spec.seed == 42);
    CHECK_FALSE(spec.rho0_uniform);

    {
        std::ofstream spec2(tmp / "bad.txt");
        spec2 << "graph p3.txt\nbogus_directive 1\n";
    }
    CHECK_THROWS_WITH_AS(parse_corpus_file(tmp / "bad.txt"), doctest::Contains("bad.txt:2"),
                         ParseError);
    {
        std::ofstream spec3(tmp / "empty.txt");
        spec3 << "beta 1\nvariant 1\nrandom_potentials 1 1\n";
    }
    CHECK_THROWS_AS(parse_corpus_file(tmp / "empty.txt"), ParseError); // no graphs
}

TEST_CASE("corpus runner produces deterministic passing reports") {
    CorpusSpec spec;
    spec.graphs = {Graph::path(3), Graph::cycle(4)};
    spec.graph_labels = {"p3", "c4"};
    spec.random_potentials = 2;
    spec.potential_amplitude = 1.0;
    spec.betas = {1.0};
    spec.variants = {FpeVariant::EquationI, FpeVariant::EquationII};
    spec.t_end = 3.0;
    spec.seed = 7;
    spec.mlsi.starts = 16;
    spec.mlsi.validation_samples = 2000;

    const std::vector<CellReport> first = run_corpus(spec);
    CHECK(first.size() == 2 * 2 * 1 * 2);
    for (const auto& cell : first) {
        CHECK(cell.l2_envelope_ok);
        CHECK(cell.entropy_envelope_ok);
        CHECK(cell.compact_set_ok);
        CHECK(cell.passed());
        if (cell.variant == FpeVariant::EquationII) CHECK(cell.gamma_hat > 0.0);
    }

    spec.jobs = 1; // scheduling must not change any value
    const std::vector<CellReport> second = run_corpus(spec);
    REQUIRE(second.size() == first.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].graph == second[i].graph);
        CHECK(first[i].to_json() == second[i].to_json());
    }
}
