#include "graphfp/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "graphfp/errors.hpp"

namespace gfp {

namespace {

std::string location(const std::string& origin, int line) {
    return origin + ":" + std::to_string(line);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Strips a trailing '#' comment and surrounding whitespace.
std::string strip(const std::string& raw) {
    std::string s = raw;
    if (auto pos = s.find('#'); pos != std::string::npos) s.erase(pos);
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw ParseError("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

Graph parse_graph(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    int n = -1;
    std::vector<Graph::Edge> edges;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip(raw);
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "n") {
            if (n >= 0) throw ParseError(location(origin, lineno) + ": duplicate 'n' line");
            if (!(ls >> n) || n < 2)
                throw ParseError(location(origin, lineno) + ": expected 'n <N>' with N >= 2");
        } else if (tag == "e") {
            if (n < 0)
                throw ParseError(location(origin, lineno) + ": edge before the 'n' line");
            int i, j;
            if (!(ls >> i >> j))
                throw ParseError(location(origin, lineno) + ": expected 'e <i> <j>'");
            edges.push_back({i, j});
        } else {
            throw ParseError(location(origin, lineno) + ": unknown directive '" + tag + "'");
        }
        std::string extra;
        if (ls >> extra)
            throw ParseError(location(origin, lineno) + ": trailing token '" + extra + "'");
    }
    if (n < 0) throw ParseError(origin + ": missing 'n' line");
    try {
        return Graph(n, std::move(edges));
    } catch (const std::invalid_argument& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

Graph read_graph(const std::string& path) { return parse_graph(read_file(path), path); }

std::string format_graph(const Graph& g) {
    std::ostringstream out;
    out << "n " << g.vertex_count() << "\n";
    for (const auto& [i, j] : g.edges()) out << "e " << i << " " << j << "\n";
    return out.str();
}

void write_graph(const Graph& g, const std::string& path) {
    atomic_write(path, format_graph(g));
}

Eigen::VectorXd parse_vector(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::vector<double> values;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip(raw);
        if (line.empty()) continue;
        std::istringstream ls(line);
        double v;
        if (!(ls >> v))
            throw ParseError(location(origin, lineno) + ": expected one real, got '" + line + "'");
        std::string extra;
        if (ls >> extra)
            throw ParseError(location(origin, lineno) + ": trailing token '" + extra + "'");
        values.push_back(v);
    }
    if (values.empty()) throw ParseError(origin + ": empty vector file");
    return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Eigen::VectorXd read_vector(const std::string& path) {
    return parse_vector(read_file(path), path);
}

std::string format_vector(const Eigen::VectorXd& v) {
    std::ostringstream out;
    for (int i = 0; i < v.size(); ++i) out << format_double(v(i)) << "\n";
    return out.str();
}

void write_vector(const Eigen::VectorXd& v, const std::string& path) {
    atomic_write(path, format_vector(v));
}

std::string format_trajectory_csv(const Trajectory& traj) {
    std::ostringstream out;
    const int n = traj.states.empty() ? 0 : traj.states.front().size();
    out << "t";
    for (int i = 0; i < n; ++i) out << ",rho_" << i;
    out << ",F,l2sq,relent\n";
    for (int k = 0; k < traj.samples(); ++k) {
        out << format_double(traj.times[k]);
        for (int i = 0; i < n; ++i) out << "," << format_double(traj.states[k][i]);
        out << "," << format_double(traj.free_energy[k]) << ","
            << format_double(traj.weighted_l2_sq[k]) << ","
            << format_double(traj.rel_entropy[k]) << "\n";
    }
    return out.str();
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    atomic_write(path, format_trajectory_csv(traj));
}

} // namespace gfp
