#pragma once

#include "stgst/classify.hpp"
#include "stgst/dataset.hpp"
#include "stgst/pipeline.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stgst {

struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_sweep_csv(const SweepTable& table, const std::string& path);

// Accuracy as a function of the training fraction; columns x,accuracy.
SweepTable training_ratio_sweep(const Dataset& ds, const Graph& spatial_graph,
                                const PipelineConfig& cfg, ClassifyOptions options,
                                const std::vector<double>& ratios);

// Accuracy under additive test-time noise at the given SNR levels (dB),
// training on clean features; columns x,accuracy. A leading row with
// x = +inf carries the unperturbed accuracy.
SweepTable snr_sweep(const Dataset& ds, const Graph& spatial_graph, const PipelineConfig& cfg,
                     const ClassifyOptions& options, const std::vector<double>& snr_levels_db,
                     std::uint64_t seed);

// Structure-perturbation bound sweep on one random signal over the graph;
// columns x,lhs,rhs. epsilon 0 maps to E = 0.
SweepTable epsilon_sweep(const Graph& spatial_graph, const PipelineConfig& cfg, int n_time,
                         const std::vector<double>& epsilons, std::uint64_t seed);

} // namespace stgst
