#include "stgst/scattering.hpp"

#include <functional>
#include <limits>
#include <stdexcept>

namespace stgst {

std::string pooling_name(Pooling pooling) {
    switch (pooling) {
        case Pooling::SpatialAvg: return "spatial_avg";
        case Pooling::TemporalAvg: return "temporal_avg";
        case Pooling::FullAvg: return "full_avg";
    }
    throw std::logic_error("unknown pooling");
}

Pooling parse_pooling(const std::string& name) {
    if (name == "spatial_avg") return Pooling::SpatialAvg;
    if (name == "temporal_avg") return Pooling::TemporalAvg;
    if (name == "full_avg") return Pooling::FullAvg;
    throw std::invalid_argument("unknown pooling: " + name);
}

void validate_config(const ScatteringConfig& cfg) {
    if (cfg.layers < 1) throw std::invalid_argument("config: layers must be >= 1");
    if (cfg.mode == ScatteringMode::Separable) {
        if (cfg.spatial_scales < 1 || cfg.temporal_scales < 1)
            throw std::invalid_argument("config: separable scales must be >= 1");
    } else {
        if (cfg.joint_scales < 1)
            throw std::invalid_argument("config: joint scales must be >= 1");
    }
}

std::string TreePath::to_string() const {
    std::string out;
    for (const auto& [j1, j2] : steps) {
        if (!out.empty()) out += ".";
        out += "(" + std::to_string(j1) + "," + std::to_string(j2) + ")";
    }
    return out.empty() ? "root" : out;
}

Eigen::VectorXd FeatureMap::flattened() const {
    Eigen::VectorXd v(total_dim);
    Eigen::Index at = 0;
    for (const auto& e : entries) {
        v.segment(at, e.phi.size()) = e.phi;
        at += e.phi.size();
    }
    return v;
}

Eigen::VectorXd pool(const Eigen::MatrixXd& z, Pooling pooling) {
    switch (pooling) {
        case Pooling::SpatialAvg: return z.colwise().mean().transpose();
        case Pooling::TemporalAvg: return z.rowwise().mean();
        case Pooling::FullAvg: {
            Eigen::VectorXd v(1);
            v(0) = z.mean();
            return v;
        }
    }
    throw std::logic_error("unknown pooling");
}

Eigen::MatrixXd nonlinearity_apply(const Eigen::MatrixXd& z, bool bypass) {
    if (bypass) return z;
    return z.cwiseAbs();
}

std::int64_t tree_node_count(int scales_per_node, int layers) {
    std::int64_t count = 0;
    std::int64_t layer = 1;
    for (int l = 0; l < layers; ++l) {
        if (count > std::numeric_limits<std::int64_t>::max() - layer)
            throw std::invalid_argument("tree_node_count: node count overflows");
        count += layer;
        if (l + 1 < layers) {
            if (layer > std::numeric_limits<std::int64_t>::max() / scales_per_node)
                throw std::invalid_argument("tree_node_count: node count overflows");
            layer *= scales_per_node;
        }
    }
    return count;
}

std::int64_t feature_dimension(const ScatteringConfig& cfg, int n, int t, int channels) {
    validate_config(cfg);
    std::int64_t base = 1;
    switch (cfg.pooling) {
        case Pooling::SpatialAvg: base = t; break;
        case Pooling::TemporalAvg: base = n; break;
        case Pooling::FullAvg: base = 1; break;
    }
    return static_cast<std::int64_t>(channels) * base *
           tree_node_count(cfg.scales_per_node(), cfg.layers);
}

namespace {

int base_feature_dim(Pooling pooling, int n, int t) {
    switch (pooling) {
        case Pooling::SpatialAvg: return t;
        case Pooling::TemporalAvg: return n;
        case Pooling::FullAvg: return 1;
    }
    throw std::logic_error("unknown pooling");
}

struct TreeLayout {
    int layers;
    std::int64_t branch;                 // children per node
    std::vector<std::int64_t> offsets;   // first entry index of each layer

    std::int64_t entry_index(int depth, std::int64_t rank_in_layer) const {
        return offsets[depth] + rank_in_layer;
    }
};

TreeLayout make_layout(int scales_per_node, int layers) {
    TreeLayout layout;
    layout.layers = layers;
    layout.branch = scales_per_node;
    layout.offsets.resize(layers);
    std::int64_t acc = 0, width = 1;
    for (int l = 0; l < layers; ++l) {
        layout.offsets[l] = acc;
        acc += width;
        width *= scales_per_node;
    }
    return layout;
}

} // namespace

FeatureMap scatter_separable(const StSignal& x, const ScatteringConfig& cfg,
                             const FilterBank& spatial_bank, const FilterBank& temporal_bank) {
    validate_config(cfg);
    validate_signal(x);
    if (cfg.mode != ScatteringMode::Separable)
        throw std::invalid_argument("scatter_separable: config is not separable");
    if (cfg.layers > 1) {
        if (!spatial_bank.materialized() || !temporal_bank.materialized())
            throw std::invalid_argument("scatter_separable: banks must be materialized");
        if (spatial_bank.scales != cfg.spatial_scales ||
            temporal_bank.scales != cfg.temporal_scales)
            throw std::invalid_argument("scatter_separable: bank scales do not match config");
        if (spatial_bank.dim() != x.n_spatial || temporal_bank.dim() != x.n_time)
            throw std::invalid_argument("scatter_separable: bank dimension does not match signal");
    }

    const int js = cfg.spatial_scales, jt = cfg.temporal_scales;
    const std::int64_t node_count = tree_node_count(cfg.scales_per_node(), cfg.layers);
    const int base = base_feature_dim(cfg.pooling, x.n_spatial, x.n_time);
    const TreeLayout layout = make_layout(cfg.scales_per_node(), cfg.layers);

    FeatureMap map;
    map.entries.resize(static_cast<std::size_t>(node_count));
    map.total_dim = node_count * base * x.channels;
    if (cfg.keep_tree_signals) map.node_signals.resize(static_cast<std::size_t>(node_count));

    // Depth-first walk; entry slots are addressed by layer offset plus the
    // node's rank within its layer, so traversal order never affects output.
    auto emit = [&](const std::vector<Eigen::MatrixXd>& signals, const TreePath& path,
                    int depth, std::int64_t rank) {
        const std::int64_t idx = layout.entry_index(depth, rank);
        FeatureEntry& entry = map.entries[static_cast<std::size_t>(idx)];
        entry.path = path;
        entry.phi.resize(static_cast<Eigen::Index>(base) * x.channels);
        for (int c = 0; c < x.channels; ++c)
            entry.phi.segment(static_cast<Eigen::Index>(c) * base, base) =
                pool(signals[static_cast<std::size_t>(c)], cfg.pooling);
        if (cfg.keep_tree_signals) map.node_signals[static_cast<std::size_t>(idx)] = signals;
    };

    std::function<void(const std::vector<Eigen::MatrixXd>&, TreePath&, int, std::int64_t)> visit =
        [&](const std::vector<Eigen::MatrixXd>& signals, TreePath& path, int depth,
            std::int64_t rank) {
            emit(signals, path, depth, rank);
            if (depth + 1 >= cfg.layers) return;
            std::vector<Eigen::MatrixXd> spatial_filtered(static_cast<std::size_t>(x.channels));
            std::vector<Eigen::MatrixXd> child(static_cast<std::size_t>(x.channels));
            for (int j1 = 1; j1 <= js; ++j1) {
                for (int c = 0; c < x.channels; ++c)
                    spatial_filtered[c] = spatial_bank.filters[j1 - 1] * signals[c];
                for (int j2 = 1; j2 <= jt; ++j2) {
                    for (int c = 0; c < x.channels; ++c)
                        child[c] = nonlinearity_apply(
                            spatial_filtered[c] * temporal_bank.filters[j2 - 1].transpose(),
                            cfg.linear_bypass);
                    const std::int64_t step = static_cast<std::int64_t>(j1 - 1) * jt + (j2 - 1);
                    path.steps.emplace_back(j1, j2);
                    visit(child, path, depth + 1, rank * layout.branch + step);
                    path.steps.pop_back();
                }
            }
        };

    TreePath root;
    visit(x.data, root, 0, 0);
    return map;
}

FeatureMap scatter_joint(const StSignal& x, const ScatteringConfig& cfg,
                         const FilterBank& joint_bank) {
    validate_config(cfg);
    validate_signal(x);
    if (cfg.mode != ScatteringMode::Joint)
        throw std::invalid_argument("scatter_joint: config is not joint");
    const Eigen::Index nt = static_cast<Eigen::Index>(x.n_spatial) * x.n_time;
    if (cfg.layers > 1) {
        if (joint_bank.scales != cfg.joint_scales)
            throw std::invalid_argument("scatter_joint: bank scales do not match config");
        if (joint_bank.dim() != nt)
            throw std::invalid_argument("scatter_joint: bank dimension does not match N*T");
    }

    const std::int64_t node_count = tree_node_count(cfg.scales_per_node(), cfg.layers);
    const int base = base_feature_dim(cfg.pooling, x.n_spatial, x.n_time);
    const TreeLayout layout = make_layout(cfg.scales_per_node(), cfg.layers);

    FeatureMap map;
    map.entries.resize(static_cast<std::size_t>(node_count));
    map.total_dim = node_count * base * x.channels;
    if (cfg.keep_tree_signals) map.node_signals.resize(static_cast<std::size_t>(node_count));

    auto emit = [&](const std::vector<Eigen::VectorXd>& signals, const TreePath& path,
                    int depth, std::int64_t rank) {
        const std::int64_t idx = layout.entry_index(depth, rank);
        FeatureEntry& entry = map.entries[static_cast<std::size_t>(idx)];
        entry.path = path;
        entry.phi.resize(static_cast<Eigen::Index>(base) * x.channels);
        std::vector<Eigen::MatrixXd> as_matrices;
        if (cfg.keep_tree_signals) as_matrices.reserve(signals.size());
        for (int c = 0; c < x.channels; ++c) {
            Eigen::MatrixXd z = unflatten(signals[static_cast<std::size_t>(c)],
                                          x.n_spatial, x.n_time);
            entry.phi.segment(static_cast<Eigen::Index>(c) * base, base) = pool(z, cfg.pooling);
            if (cfg.keep_tree_signals) as_matrices.push_back(std::move(z));
        }
        if (cfg.keep_tree_signals)
            map.node_signals[static_cast<std::size_t>(idx)] = std::move(as_matrices);
    };

    std::function<void(const std::vector<Eigen::VectorXd>&, TreePath&, int, std::int64_t)> visit =
        [&](const std::vector<Eigen::VectorXd>& signals, TreePath& path, int depth,
            std::int64_t rank) {
            emit(signals, path, depth, rank);
            if (depth + 1 >= cfg.layers) return;
            std::vector<Eigen::VectorXd> child(static_cast<std::size_t>(x.channels));
            for (int j = 1; j <= cfg.joint_scales; ++j) {
                for (int c = 0; c < x.channels; ++c) {
                    Eigen::VectorXd filtered = apply_bank_joint(joint_bank, j - 1, signals[c]);
                    child[c] = cfg.linear_bypass ? filtered : filtered.cwiseAbs();
                }
                path.steps.emplace_back(j, 0);
                visit(child, path, depth + 1, rank * layout.branch + (j - 1));
                path.steps.pop_back();
            }
        };

    std::vector<Eigen::VectorXd> root_signals;
    root_signals.reserve(static_cast<std::size_t>(x.channels));
    for (const auto& z : x.data) root_signals.push_back(flatten(z));
    TreePath root;
    visit(root_signals, root, 0, 0);
    return map;
}

} // namespace stgst
