#include "stgst/graph.hpp"

#include "stgst/rng.hpp"

#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace stgst {

void validate_graph(const Graph& g) {
    if (g.n <= 0) throw std::invalid_argument("graph: node count must be positive");
    if (g.adjacency.rows() != g.n || g.adjacency.cols() != g.n)
        throw std::invalid_argument("graph: adjacency shape does not match node count");
    for (int i = 0; i < g.n; ++i) {
        if (g.adjacency(i, i) != 0.0)
            throw std::invalid_argument("graph: nonzero diagonal at node " + std::to_string(i));
        for (int j = 0; j < g.n; ++j) {
            if (g.adjacency(i, j) != g.adjacency(j, i))
                throw std::invalid_argument("graph: adjacency not symmetric");
            if (g.adjacency(i, j) < 0.0)
                throw std::invalid_argument("graph: negative edge weight");
        }
    }
}

Graph build_line_graph(int t) {
    if (t < 1) throw std::invalid_argument("build_line_graph: need at least one node");
    Graph g;
    g.n = t;
    g.adjacency = Eigen::MatrixXd::Zero(t, t);
    for (int i = 0; i + 1 < t; ++i) {
        g.adjacency(i, i + 1) = 1.0;
        g.adjacency(i + 1, i) = 1.0;
    }
    return g;
}

Graph build_graph_from_edges(int n, const std::vector<Edge>& edges) {
    if (n <= 0) throw std::invalid_argument("build_graph_from_edges: node count must be positive");
    Graph g;
    g.n = n;
    g.adjacency = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [i, j, w] : edges) {
        if (i < 0 || i >= n || j < 0 || j >= n)
            throw std::invalid_argument("build_graph_from_edges: node index out of range");
        if (i == j)
            throw std::invalid_argument("build_graph_from_edges: self-loops not allowed");
        if (!(w > 0.0))
            throw std::invalid_argument("build_graph_from_edges: edge weight must be positive");
        g.adjacency(i, j) = w;
        g.adjacency(j, i) = w;
    }
    return g;
}

Graph skeleton_graph_20() {
    // Joints: 0 hip-center, 1 spine, 2 shoulder-center, 3 head,
    // 4-7 left arm (shoulder, elbow, wrist, hand),
    // 8-11 right arm, 12-15 left leg (hip, knee, ankle, foot), 16-19 right leg.
    std::vector<Edge> bones = {
        {0, 1, 1.0},   {1, 2, 1.0},   {2, 3, 1.0},
        {2, 4, 1.0},   {4, 5, 1.0},   {5, 6, 1.0},   {6, 7, 1.0},
        {2, 8, 1.0},   {8, 9, 1.0},   {9, 10, 1.0},  {10, 11, 1.0},
        {0, 12, 1.0},  {12, 13, 1.0}, {13, 14, 1.0}, {14, 15, 1.0},
        {0, 16, 1.0},  {16, 17, 1.0}, {17, 18, 1.0}, {18, 19, 1.0},
    };
    return build_graph_from_edges(20, bones);
}

Eigen::VectorXd degrees(const Graph& g) {
    return g.adjacency.rowwise().sum();
}

Graph random_connected_graph(int n, std::uint64_t seed) {
    if (n <= 0) throw std::invalid_argument("random_connected_graph: need at least one node");
    auto rng = make_engine(seed, 0);
    std::vector<Edge> edges;
    std::set<std::pair<int, int>> seen;
    for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> pick(0, i - 1);
        const int j = pick(rng);
        edges.emplace_back(j, i, 1.0);
        seen.insert({j, i});
    }
    std::uniform_int_distribution<int> node(0, n - 1);
    int extra = n / 2;
    int guard = 10 * n;
    while (extra > 0 && guard-- > 0) {
        int a = node(rng), b = node(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (!seen.insert({a, b}).second) continue;
        edges.emplace_back(a, b, 1.0);
        --extra;
    }
    return build_graph_from_edges(n, edges);
}

} // namespace stgst
