#pragma once

#include "stgst/product.hpp"
#include "stgst/signal.hpp"
#include "stgst/wavelets.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace stgst {

enum class Pooling { SpatialAvg, TemporalAvg, FullAvg };

std::string pooling_name(Pooling pooling);
Pooling parse_pooling(const std::string& name);

enum class ScatteringMode { Separable, Joint };

struct ScatteringConfig {
    ScatteringMode mode = ScatteringMode::Separable;
    ProductKind product = ProductKind::Strong; // joint mode only
    int layers = 1;                            // L
    int spatial_scales = 1;                    // Js
    int temporal_scales = 1;                   // Jt
    int joint_scales = 1;                      // J, joint mode
    WaveletFamily spatial_family = WaveletFamily::Geometric;
    WaveletFamily temporal_family = WaveletFamily::Geometric;
    WaveletFamily joint_family = WaveletFamily::Geometric;
    Pooling pooling = Pooling::SpatialAvg;
    bool linear_bypass = false;   // skip the absolute value (ablation switch)
    bool keep_tree_signals = false;

    int scales_per_node() const {
        return mode == ScatteringMode::Separable ? spatial_scales * temporal_scales
                                                 : joint_scales;
    }
};

void validate_config(const ScatteringConfig& cfg);

/// Path from the root to a tree node: one (j1, j2) scale pair per layer,
/// 1-based. Joint paths use (j, 0). Empty path is the root.
struct TreePath {
    std::vector<std::pair<int, int>> steps;
    std::string to_string() const;
};

struct FeatureEntry {
    TreePath path;
    Eigen::VectorXd phi; // channel blocks concatenated: [c0 | c1 | ...]
};

/// Ordered feature map: entries breadth-first by layer, lexicographic by
/// path within a layer. Entry count is sum_{l=0}^{L-1} J^l regardless of
/// channel count; channels concatenate inside each entry.
struct FeatureMap {
    std::vector<FeatureEntry> entries;
    std::int64_t total_dim = 0;
    // Populated only when keep_tree_signals is set: per entry, the node's
    // signal for every channel (N x T matrices).
    std::vector<std::vector<Eigen::MatrixXd>> node_signals;

    Eigen::VectorXd flattened() const;
};

// Average pooling: SpatialAvg gives the T column means, TemporalAvg the N
// row means, FullAvg the grand mean as a 1-vector.
Eigen::VectorXd pool(const Eigen::MatrixXd& z, Pooling pooling);

// Elementwise absolute value; identity when bypass is set. Preserves the
// Frobenius norm and is non-expansive.
Eigen::MatrixXd nonlinearity_apply(const Eigen::MatrixXd& z, bool bypass = false);

// Number of tree nodes sum_{l=0}^{L-1} J^l.
std::int64_t tree_node_count(int scales_per_node, int layers);

// Total flattened feature length: C * (per-entry base dim) * node count.
std::int64_t feature_dimension(const ScatteringConfig& cfg, int n, int t, int channels);

// Separable forward pass: children are sigma(H_j1 Z G_j2^T) in lexicographic
// (j1, j2) order; every node, root included, contributes a pooled feature.
FeatureMap scatter_separable(const StSignal& x, const ScatteringConfig& cfg,
                             const FilterBank& spatial_bank, const FilterBank& temporal_bank);

// Joint forward pass over a product shift: signals are flattened length-NT
// vectors, children are sigma(H_j z), pooling happens after unflattening.
FeatureMap scatter_joint(const StSignal& x, const ScatteringConfig& cfg,
                         const FilterBank& joint_bank);

} // namespace stgst
