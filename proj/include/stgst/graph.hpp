#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <tuple>
#include <vector>

namespace stgst {

/// Undirected weighted graph. Adjacency is stored dense and symmetric,
/// with nonnegative weights and a zero diagonal.
struct Graph {
    int n = 0;
    Eigen::MatrixXd adjacency;
};

using Edge = std::tuple<int, int, double>; // (i, j, weight)

// Throws std::invalid_argument when the stored adjacency is asymmetric,
// has negative weights, or has nonzero diagonal entries.
void validate_graph(const Graph& g);

// Path graph on T nodes: edges between consecutive time stamps, weight 1.
Graph build_line_graph(int t);

// Symmetric adjacency from an edge list. Both (i,j) and (j,i) are set;
// duplicate edges overwrite (last write wins).
Graph build_graph_from_edges(int n, const std::vector<Edge>& edges);

// 20-joint human skeleton topology (torso chain, two arms, two legs, head).
// Canned spatial graph for demos and stability checks.
Graph skeleton_graph_20();

// Per-node degree = row sum of the adjacency.
Eigen::VectorXd degrees(const Graph& g);

// Deterministic random connected graph: a random spanning tree plus about
// n/2 extra chords, unit weights.
Graph random_connected_graph(int n, std::uint64_t seed);

} // namespace stgst
