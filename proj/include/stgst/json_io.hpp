#pragma once

#include "stgst/graph.hpp"
#include "stgst/shift.hpp"
#include "stgst/stability.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace stgst {

// Graph JSON: {"n": int, "edges": [[i, j, w], ...]}.
Graph load_graph_json(const std::string& path);
Graph parse_graph_json(const std::string& text);
void save_graph_json(const Graph& g, const std::string& path);

// Shift JSON: {"kind": name, "n": int, "symmetric": bool, "matrix": [[...]]}.
void save_shift_json(const ShiftMatrix& s, const std::string& path);
ShiftMatrix load_shift_json(const std::string& path);

// Feature CSV with header sample_id,label,f0,f1,...
struct FeatureTable {
    std::vector<std::string> ids;
    std::vector<int> labels;
    Eigen::MatrixXd features;
};

void write_features_csv(const FeatureTable& table, const std::string& path);
FeatureTable read_features_csv(const std::string& path);

// JSON array of verification reports.
std::string reports_to_json(const std::vector<StabilityReport>& reports);

} // namespace stgst
