#include "stgst/sweeps.hpp"

#include "stgst/rng.hpp"
#include "stgst/stability.hpp"

#include <fstream>
#include <limits>
#include <stdexcept>

namespace stgst {

void write_sweep_csv(const SweepTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << '\n';
    out.precision(12);
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << '\n';
    }
}

SweepTable training_ratio_sweep(const Dataset& ds, const Graph& spatial_graph,
                                const PipelineConfig& cfg, ClassifyOptions options,
                                const std::vector<double>& ratios) {
    const Eigen::MatrixXd features = transform_dataset(ds, cfg, spatial_graph);
    std::vector<int> labels;
    labels.reserve(ds.samples.size());
    for (const auto& s : ds.samples) labels.push_back(s.label);

    SweepTable table;
    table.columns = {"x", "accuracy"};
    for (double ratio : ratios) {
        options.train_fraction = ratio;
        table.rows.push_back({ratio, classify(features, labels, options)});
    }
    return table;
}

SweepTable snr_sweep(const Dataset& ds, const Graph& spatial_graph, const PipelineConfig& cfg,
                     const ClassifyOptions& options, const std::vector<double>& snr_levels_db,
                     std::uint64_t seed) {
    const Eigen::MatrixXd clean = transform_dataset(ds, cfg, spatial_graph);
    std::vector<int> labels;
    labels.reserve(ds.samples.size());
    for (const auto& s : ds.samples) labels.push_back(s.label);

    SweepTable table;
    table.columns = {"x", "accuracy"};
    table.rows.push_back(
        {std::numeric_limits<double>::infinity(), classify(clean, labels, options)});

    for (std::size_t level = 0; level < snr_levels_db.size(); ++level) {
        Dataset noisy = ds;
        SignalPerturbation p;
        p.target_snr_db = snr_levels_db[level];
        for (std::size_t i = 0; i < noisy.samples.size(); ++i) {
            auto rng = make_engine(seed, level * noisy.samples.size() + i);
            const auto delta = realize_delta(p, noisy.samples[i].signal, rng);
            for (int c = 0; c < noisy.channels; ++c)
                noisy.samples[i].signal.data[static_cast<std::size_t>(c)] +=
                    delta[static_cast<std::size_t>(c)];
        }
        const Eigen::MatrixXd perturbed = transform_dataset(noisy, cfg, spatial_graph);
        table.rows.push_back({snr_levels_db[level],
                              classify_with_test_features(clean, perturbed, labels, options)});
    }
    return table;
}

SweepTable epsilon_sweep(const Graph& spatial_graph, const PipelineConfig& cfg, int n_time,
                         const std::vector<double>& epsilons, std::uint64_t seed) {
    if (cfg.scattering.mode != ScatteringMode::Separable)
        throw std::invalid_argument("epsilon_sweep: separable mode required");
    const SeparableBanks banks = build_separable_banks(spatial_graph, n_time, cfg);
    auto rng = make_engine(seed, 0);
    const StSignal x = random_signal(1, spatial_graph.n, n_time, rng);

    SweepTable table;
    table.columns = {"x", "lhs", "rhs"};
    for (std::size_t level = 0; level < epsilons.size(); ++level) {
        auto trial_rng = make_engine(seed, 1 + level);
        const StructurePerturbation p =
            epsilons[level] > 0.0
                ? random_diagonal_perturbation(spatial_graph.n, epsilons[level], trial_rng)
                : make_structure_perturbation(
                      Eigen::MatrixXd::Zero(spatial_graph.n, spatial_graph.n), 0.0);
        const StabilityReport r =
            check_theorem2(cfg.scattering, banks.spatial, banks.temporal, x, p);
        table.rows.push_back({epsilons[level], r.lhs, r.rhs});
    }
    return table;
}

} // namespace stgst
