#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stgst/bench.hpp"
#include "stgst/dataset.hpp"
#include "stgst/json_io.hpp"
#include "stgst/pipeline.hpp"
#include "stgst/rng.hpp"
#include "stgst/stability.hpp"
#include "stgst/sweeps.hpp"

#include <cstdlib>
#include <filesystem>

using namespace stgst;
namespace fs = std::filesystem;

namespace {

PipelineConfig basic_cfg(int js = 2, int jt = 2, int layers = 2,
                         Pooling pooling = Pooling::SpatialAvg) {
    PipelineConfig cfg;
    cfg.scattering.mode = ScatteringMode::Separable;
    cfg.scattering.spatial_scales = js;
    cfg.scattering.temporal_scales = jt;
    cfg.scattering.layers = layers;
    cfg.scattering.pooling = pooling;
    return cfg;
}

} // namespace

TEST_CASE("pipeline config parses every documented key") {
    const std::string text = R"({
        "mode": "separable", "product": "cartesian",
        "L": 3, "Js": 2, "Jt": 4, "J": 8,
        "spatial_family": "itersine", "temporal_family": "geometric",
        "joint_family": "custom_poly",
        "pooling": "temporal_avg", "linear_bypass": true,
        "spatial_shift": "normalized_laplacian",
        "monic_cubic_scale_range": [1.5, 30.0],
        "custom_joint_coeffs": [[1.0, 0.5], [0.0, 1.0, 2.0]],
        "spatial_graph": "graph.json", "seed": 99
    })";
    const PipelineConfig cfg = parse_pipeline_config(text);
    CHECK(cfg.scattering.mode == ScatteringMode::Separable);
    CHECK(cfg.scattering.product == ProductKind::Cartesian);
    CHECK(cfg.scattering.layers == 3);
    CHECK(cfg.scattering.spatial_scales == 2);
    CHECK(cfg.scattering.temporal_scales == 4);
    CHECK(cfg.scattering.joint_scales == 8);
    CHECK(cfg.scattering.spatial_family == WaveletFamily::Itersine);
    CHECK(cfg.scattering.temporal_family == WaveletFamily::Geometric);
    CHECK(cfg.scattering.pooling == Pooling::TemporalAvg);
    CHECK(cfg.scattering.linear_bypass);
    CHECK(cfg.spatial_shift == ShiftKind::NormalizedLaplacian);
    // temporal family is geometric so its shift defaults to the lazy walk
    CHECK(cfg.temporal_shift == ShiftKind::LazyRandomWalk);
    CHECK(cfg.spectral.monic_cubic_lo == 1.5);
    CHECK(cfg.custom_joint.size() == 2);
    CHECK(cfg.spatial_graph_path == "graph.json");
    CHECK(cfg.seed == 99);
}

TEST_CASE("shift kinds default per wavelet family") {
    CHECK(default_shift_kind(WaveletFamily::Geometric) == ShiftKind::LazyRandomWalk);
    CHECK(default_shift_kind(WaveletFamily::Itersine) == ShiftKind::NormalizedLaplacian);
    CHECK(default_shift_kind(WaveletFamily::MonicCubic) == ShiftKind::NormalizedLaplacian);
}

TEST_CASE("transform: grand mean for a single-layer full-average run") {
    const SyntheticDataset synth = generate_synthetic_dataset(
        {.n_samples = 1, .n_spatial = 5, .n_time = 6, .channels = 1, .n_classes = 1,
         .noise_sigma = 0.1, .seed = 5});
    PipelineConfig cfg = basic_cfg(2, 2, 1, Pooling::FullAvg);
    const Eigen::MatrixXd features =
        transform_dataset(synth.data, cfg, synth.spatial_graph);
    CHECK(features.rows() == 1);
    CHECK(features.cols() == 1);
    CHECK(features(0, 0) ==
          doctest::Approx(synth.data.samples[0].signal.data[0].mean()).epsilon(1e-12));
}

TEST_CASE("transform shape follows the feature dimension formula") {
    SyntheticDataset synth = generate_synthetic_dataset(
        {.n_samples = 4, .n_spatial = 6, .n_time = 8, .channels = 1, .n_classes = 2,
         .noise_sigma = 0.1, .seed = 6});
    PipelineConfig cfg = basic_cfg(2, 2, 2, Pooling::SpatialAvg);
    const Eigen::MatrixXd features = transform_dataset(synth.data, cfg, synth.spatial_graph);
    CHECK(features.rows() == 4);
    CHECK(features.cols() == 5 * 8); // (1 + 4) nodes x T
    CHECK(features.cols() ==
          feature_dimension(cfg.scattering, synth.data.n_spatial, synth.data.n_time, 1));
}

TEST_CASE("duplicated samples produce identical rows") {
    SyntheticDataset synth = generate_synthetic_dataset(
        {.n_samples = 2, .n_spatial = 5, .n_time = 8, .channels = 1, .n_classes = 1,
         .noise_sigma = 0.1, .seed = 8});
    synth.data.samples[1] = synth.data.samples[0];
    synth.data.samples[1].id = "copy";
    PipelineConfig cfg = basic_cfg();
    const Eigen::MatrixXd features = transform_dataset(synth.data, cfg, synth.spatial_graph);
    CHECK(features.row(0) == features.row(1));
}

TEST_CASE("parallel transform is byte-identical to serial") {
    const SyntheticDataset synth = generate_synthetic_dataset(
        {.n_samples = 12, .n_spatial = 6, .n_time = 10, .channels = 2, .n_classes = 2,
         .noise_sigma = 0.1, .seed = 10});
    PipelineConfig cfg = basic_cfg(2, 2, 3);

    setenv("STGST_THREADS", "1", 1);
    const Eigen::MatrixXd serial = transform_dataset(synth.data, cfg, synth.spatial_graph);
    setenv("STGST_THREADS", "4", 1);
    const Eigen::MatrixXd parallel = transform_dataset(synth.data, cfg, synth.spatial_graph);
    unsetenv("STGST_THREADS");
    CHECK(serial == parallel);
}

TEST_CASE("mixed spectral families run through the config path") {
    const SyntheticDataset synth = generate_synthetic_dataset(
        {.n_samples = 4, .n_spatial = 7, .n_time = 9, .channels = 1, .n_classes = 2,
         .noise_sigma = 0.1, .seed = 12});
    PipelineConfig cfg = parse_pipeline_config(R"({
        "mode": "separable", "L": 2, "Js": 2, "Jt": 3,
        "spatial_family": "itersine", "temporal_family": "monic_cubic",
        "pooling": "spatial_avg"
    })");
    const Eigen::MatrixXd features = transform_dataset(synth.data, cfg, synth.spatial_graph);
    CHECK(features.rows() == 4);
    CHECK(features.cols() == 7 * 9); // (1 + 6) nodes x T
    CHECK(features.allFinite());
}

TEST_CASE("joint transform runs end to end") {
    const SyntheticDataset synth = generate_synthetic_dataset(
        {.n_samples = 3, .n_spatial = 4, .n_time = 6, .channels = 1, .n_classes = 2,
         .noise_sigma = 0.1, .seed = 11});
    PipelineConfig cfg;
    cfg.scattering.mode = ScatteringMode::Joint;
    cfg.scattering.product = ProductKind::Strong;
    cfg.scattering.joint_scales = 2;
    cfg.scattering.layers = 2;
    cfg.scattering.joint_family = WaveletFamily::Geometric;
    cfg.joint_shift = ShiftKind::LazyRandomWalk;
    const Eigen::MatrixXd features = transform_dataset(synth.data, cfg, synth.spatial_graph);
    CHECK(features.rows() == 3);
    CHECK(features.cols() == 3 * 6); // (1 + 2) nodes x T
    CHECK(features.allFinite());
}

TEST_CASE("feature CSV round trip") {
    FeatureTable table;
    table.ids = {"a", "b"};
    table.labels = {0, 1};
    table.features.resize(2, 3);
    table.features << 1.5, -2.25, 3.0000001, 0.0, 1e-17, -4.5;

    const fs::path path = fs::temp_directory_path() / "stgst_feat_test.csv";
    write_features_csv(table, path.string());
    const FeatureTable loaded = read_features_csv(path.string());
    fs::remove(path);

    CHECK(loaded.ids == table.ids);
    CHECK(loaded.labels == table.labels);
    CHECK(loaded.features == table.features);
}

TEST_CASE("bench covers both modes and respects the joint guard") {
    BenchOptions options;
    options.sizes = {{6, 10}, {80, 80}}; // second size exceeds the joint guard
    options.modes = {"separable", "joint-strong"};
    options.repeats = 1;
    options.layers = 2;
    options.spatial_scales = 2;
    options.temporal_scales = 2;
    const auto rows = bench_separable_vs_joint(options);

    int separable_rows = 0, joint_rows = 0;
    for (const auto& r : rows) {
        CHECK(r.wall_time_seconds > 0.0);
        if (r.mode == "separable") separable_rows++;
        if (r.mode == "joint-strong") joint_rows++;
    }
    CHECK(separable_rows == 2);
    CHECK(joint_rows == 1); // 80x80 skipped
}

TEST_CASE("epsilon sweep starts at exactly zero deviation") {
    PipelineConfig cfg = basic_cfg(2, 2, 2);
    cfg.scattering.spatial_family = WaveletFamily::Itersine;
    cfg.scattering.temporal_family = WaveletFamily::Itersine;
    cfg.spatial_shift = ShiftKind::NormalizedLaplacian;
    cfg.temporal_shift = ShiftKind::NormalizedLaplacian;
    const Graph g = random_connected_graph(8, 13);
    const SweepTable table = epsilon_sweep(g, cfg, 10, {0.0, 0.05}, 17);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.columns == std::vector<std::string>{"x", "lhs", "rhs"});
    CHECK(table.rows[0][1] == 0.0);
    CHECK(table.rows[1][1] <= table.rows[1][2]);
}

TEST_CASE("zero-padding: exact root-feature relations at a single layer") {
    // Loader-level: a clip padded from T to 2T keeps its values and zero pad.
    const SyntheticDataset synth = generate_synthetic_dataset(
        {.n_samples = 1, .n_spatial = 4, .n_time = 6, .channels = 1, .n_classes = 1,
         .noise_sigma = 0.1, .seed = 21});
    const Eigen::MatrixXd z = synth.data.samples[0].signal.data[0];
    Eigen::MatrixXd padded(4, 12);
    padded << z, Eigen::MatrixXd::Zero(4, 6);

    // Spatial averaging: the pad region only appends zero columns.
    const Eigen::VectorXd pooled = pool(z, Pooling::SpatialAvg);
    const Eigen::VectorXd pooled_padded = pool(padded, Pooling::SpatialAvg);
    CHECK(pooled_padded.head(6) == pooled);
    CHECK(pooled_padded.tail(6).cwiseAbs().maxCoeff() == 0.0);

    // Temporal averaging: the feature scales by exactly T / T_padded.
    const Eigen::VectorXd row_means = pool(z, Pooling::TemporalAvg);
    const Eigen::VectorXd row_means_padded = pool(padded, Pooling::TemporalAvg);
    CHECK((row_means_padded - 0.5 * row_means).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("theorem1 certification extends to multi-channel signals") {
    const Graph g = random_connected_graph(8, 23);
    PipelineConfig cfg = basic_cfg(2, 2, 2);
    cfg.scattering.spatial_family = WaveletFamily::Itersine;
    cfg.scattering.temporal_family = WaveletFamily::Itersine;
    cfg.spatial_shift = ShiftKind::NormalizedLaplacian;
    cfg.temporal_shift = ShiftKind::NormalizedLaplacian;
    const SeparableBanks banks = build_separable_banks(g, 10, cfg);
    auto rng = make_engine(24, 0);
    const StSignal x = random_signal(3, 8, 10, rng);
    const StabilityReport r = certify_theorem1(cfg.scattering, banks.spatial, banks.temporal,
                                               x, {15.0}, 10, 25);
    CHECK(r.pass);
}

TEST_CASE("bench medians are stable between repeat counts") {
    BenchOptions options;
    options.sizes = {{12, 60}};
    options.modes = {"joint-strong"}; // the slower mode gives a stable signal
    options.layers = 2;
    options.spatial_scales = 2;
    options.temporal_scales = 2;

    options.repeats = 1;
    const double once = bench_separable_vs_joint(options)[0].wall_time_seconds;
    options.repeats = 5;
    const double median5 = bench_separable_vs_joint(options)[0].wall_time_seconds;
    CHECK(once <= median5 * 1.5);
    CHECK(median5 <= once * 1.5);
}

TEST_CASE("more training data does not hurt on synthetic classes") {
    const SyntheticDataset synth = generate_synthetic_dataset(
        {.n_samples = 60, .n_spatial = 10, .n_time = 32, .channels = 1, .n_classes = 2,
         .noise_sigma = 0.1, .seed = 29});
    PipelineConfig cfg = basic_cfg(2, 2, 3);
    ClassifyOptions options;
    options.k = 3;
    options.seed = 5;
    const SweepTable table = training_ratio_sweep(synth.data, synth.spatial_graph, cfg, options,
                                                  {0.2, 0.5, 0.8});
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows.back()[1] >= table.rows.front()[1] - 0.05);
}

TEST_CASE("scattering features beat a per-node energy baseline on synthetic data") {
    const SyntheticDataset synth = generate_synthetic_dataset(
        {.n_samples = 200, .n_spatial = 20, .n_time = 64, .channels = 1, .n_classes = 2,
         .noise_sigma = 0.1, .seed = 7});
    std::vector<int> labels;
    for (const auto& s : synth.data.samples) labels.push_back(s.label);
    ClassifyOptions options;
    options.k = 5;
    options.train_fraction = 0.5;
    options.seed = 7;

    // Baseline: per-node mean square over time. Class information lives in
    // the temporal frequency, so node energies are label blind.
    Eigen::MatrixXd energy(static_cast<Eigen::Index>(synth.data.samples.size()), 20);
    for (std::size_t i = 0; i < synth.data.samples.size(); ++i)
        energy.row(static_cast<Eigen::Index>(i)) =
            synth.data.samples[i].signal.data[0].array().square().rowwise().mean().transpose();
    const double baseline = classify(energy, labels, options);
    CHECK(baseline < 0.8);

    PipelineConfig cfg = basic_cfg(2, 2, 3);
    const Eigen::MatrixXd features = transform_dataset(synth.data, cfg, synth.spatial_graph);
    const double scattering_accuracy = classify(features, labels, options);
    CHECK(scattering_accuracy >= 0.9);
    CHECK(scattering_accuracy > baseline + 0.1);
}

TEST_CASE("snr sweep's clean row equals the unperturbed accuracy exactly") {
    const SyntheticDataset synth = generate_synthetic_dataset(
        {.n_samples = 24, .n_spatial = 8, .n_time = 16, .channels = 1, .n_classes = 2,
         .noise_sigma = 0.1, .seed = 15});
    PipelineConfig cfg = basic_cfg(2, 2, 2);
    ClassifyOptions options;
    options.k = 3;

    const SweepTable table =
        snr_sweep(synth.data, synth.spatial_graph, cfg, options, {20.0}, 19);
    REQUIRE(table.rows.size() == 2);

    const Eigen::MatrixXd features =
        transform_dataset(synth.data, cfg, synth.spatial_graph);
    std::vector<int> labels;
    for (const auto& s : synth.data.samples) labels.push_back(s.label);
    CHECK(table.rows[0][1] == classify(features, labels, options));
}
