#pragma once

#include "stgst/graph.hpp"
#include "stgst/signal.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stgst {

struct Sample {
    std::string id;
    int label = 0;
    StSignal signal;
    int original_time = 0; // frames before zero-padding to the shared T
};

/// A set of clips sharing N and C; shorter clips are zero-padded to the
/// dataset-wide T (the maximum time index + 1 over all samples).
struct Dataset {
    int n_spatial = 0;
    int channels = 0;
    int n_time = 0;
    std::vector<Sample> samples;
};

// Manifest JSON: {"n_spatial": N, "channels": C, "samples": [{"id", "label",
// "path"}, ...]}; sample paths resolve relative to the manifest directory.
// Each sample is a long-format CSV with header channel,node,time,value;
// missing (c, n, t) triples are zeros. Parse errors name file and line.
Dataset load_dataset(const std::string& manifest_path);

// Writes manifest.json, graph.json and one CSV per sample into out_dir.
void write_dataset(const Dataset& ds, const Graph& spatial_graph, const std::string& out_dir);

struct SyntheticParams {
    int n_samples = 200;
    int n_spatial = 20;
    int n_time = 64;
    int channels = 1;
    int n_classes = 2;
    double noise_sigma = 0.1;
    std::uint64_t seed = 7;
};

struct SyntheticDataset {
    Dataset data;
    Graph spatial_graph;
};

// Labeled clips on a random connected graph: each sample is a smooth random
// graph profile (low-frequency Laplacian mixture) carrying a class-specific
// temporal frequency with per-node random phase, plus i.i.d. Gaussian noise.
// Deterministic in the seed.
SyntheticDataset generate_synthetic_dataset(const SyntheticParams& params);

} // namespace stgst
