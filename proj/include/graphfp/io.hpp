#pragma once

#include <string>

#include <Eigen/Core>

#include "graphfp/dynamics.hpp"
#include "graphfp/graph.hpp"

namespace gfp {

/// Shortest text that round-trips the double exactly (17 significant digits).
std::string format_double(double x);

/// Writes via a temporary file in the same directory plus an atomic rename;
/// no partial output survives an error.
void atomic_write(const std::string& path, const std::string& content);

/// Graph text format: `n <N>` then `e <i> <j>` lines, '#' comments.
/// The writer is canonical (sorted edges), so format(parse(format(g)))
/// round-trips byte-exactly.
Graph parse_graph(const std::string& text, const std::string& origin = "<string>");
Graph read_graph(const std::string& path);
std::string format_graph(const Graph& g);
void write_graph(const Graph& g, const std::string& path);

/// Plain text, one real per line, '#' comments.
Eigen::VectorXd parse_vector(const std::string& text, const std::string& origin = "<string>");
Eigen::VectorXd read_vector(const std::string& path);
std::string format_vector(const Eigen::VectorXd& v);
void write_vector(const Eigen::VectorXd& v, const std::string& path);

/// CSV with header t,rho_0..rho_{n-1},F,l2sq,relent at 17 significant digits.
std::string format_trajectory_csv(const Trajectory& traj);
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

} // namespace gfp
