// stgst — spatio-temporal graph scattering CLI.
//
// Subcommands: graph build/skeleton, dims, transform, verify, bench,
// classify, synth, sweep. `stgst <cmd> --help` lists the flags.

#include "stgst/bench.hpp"
#include "stgst/classify.hpp"
#include "stgst/dataset.hpp"
#include "stgst/json_io.hpp"
#include "stgst/pipeline.hpp"
#include "stgst/rng.hpp"
#include "stgst/stability.hpp"
#include "stgst/sweeps.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using namespace stgst;

std::string resolve_relative(const std::string& path, const std::string& anchor_file) {
    if (path.empty() || fs::path(path).is_absolute()) return path;
    return (fs::path(anchor_file).parent_path() / path).string();
}

// Default certification setup when no --config is given: itersine banks on
// the 20-joint skeleton, (Js, Jt, L) = (2, 2, 3), spatial-average pooling.
PipelineConfig default_verify_config() {
    PipelineConfig cfg;
    cfg.scattering.mode = ScatteringMode::Separable;
    cfg.scattering.layers = 3;
    cfg.scattering.spatial_scales = 2;
    cfg.scattering.temporal_scales = 2;
    cfg.scattering.spatial_family = WaveletFamily::Itersine;
    cfg.scattering.temporal_family = WaveletFamily::Itersine;
    cfg.scattering.pooling = Pooling::SpatialAvg;
    cfg.spatial_shift = ShiftKind::NormalizedLaplacian;
    cfg.temporal_shift = ShiftKind::NormalizedLaplacian;
    return cfg;
}

Graph graph_for_config(const PipelineConfig& cfg) {
    if (!cfg.spatial_graph_path.empty()) return load_graph_json(cfg.spatial_graph_path);
    return skeleton_graph_20();
}

std::vector<std::pair<int, int>> parse_sizes(const std::string& text) {
    std::vector<std::pair<int, int>> sizes;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto x = item.find('x');
        if (x == std::string::npos)
            throw CLI::ValidationError("sizes", "expected NxT entries like 10x50");
        sizes.emplace_back(std::stoi(item.substr(0, x)), std::stoi(item.substr(x + 1)));
    }
    if (sizes.empty()) throw CLI::ValidationError("sizes", "no sizes given");
    return sizes;
}

std::vector<std::string> parse_modes(const std::string& text) {
    std::vector<std::string> modes;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) modes.push_back(item);
    return modes;
}

int run_verify(const std::string& check, PipelineConfig cfg, int n_time,
               std::vector<double> epsilons, std::vector<double> snrs, int trials,
               std::uint64_t seed) {
    const Graph graph = graph_for_config(cfg);
    std::vector<StabilityReport> reports;

    if (check == "spectral-equivalence") {
        reports.push_back(check_spectral_equivalence(6, 6, trials > 0 ? trials : 20, seed));
    } else {
        const SeparableBanks banks = build_separable_banks(graph, n_time, cfg);
        auto rng = make_engine(seed, 999);
        const StSignal x = random_signal(1, graph.n, n_time, rng);

        if (check == "frame") {
            reports.push_back(check_frame(banks.spatial, trials > 0 ? trials : 100, seed));
            reports.push_back(check_frame(banks.temporal, trials > 0 ? trials : 100, seed + 1));
            reports.push_back(
                verify_lemma1(banks.spatial, banks.temporal, trials > 0 ? trials : 100, seed + 2));
            if (banks.spatial.family == WaveletFamily::Itersine)
                reports.push_back(check_tightness(banks.spatial));
            if (banks.temporal.family == WaveletFamily::Itersine)
                reports.push_back(check_tightness(banks.temporal));
        } else if (check == "theorem1") {
            reports.push_back(certify_theorem1(cfg.scattering, banks.spatial, banks.temporal, x,
                                               snrs, trials > 0 ? trials : 100, seed));
        } else if (check == "theorem2") {
            reports.push_back(certify_theorem2(cfg.scattering, banks.spatial, banks.temporal, x,
                                               epsilons, trials > 0 ? trials : 20, seed));
        } else if (check == "permutation") {
            reports.push_back(certify_permutation_invariance(
                cfg.scattering, banks.spatial, banks.temporal, x, trials > 0 ? trials : 20, seed));
        } else if (check == "wavelet-stability") {
            reports.push_back(certify_wavelet_stability(banks.spatial_shift, banks.spatial,
                                                        banks.temporal, epsilons,
                                                        trials > 0 ? trials : 5, seed));
        } else {
            std::cerr << "unknown check: " << check << "\n";
            return 2;
        }
    }

    std::cout << reports_to_json(reports) << "\n";
    for (const auto& r : reports)
        if (!r.pass) return 1;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spatio-temporal graph scattering transform"};
    app.require_subcommand(1);

    // graph build / skeleton
    auto* graph_cmd = app.add_subcommand("graph", "graph and shift construction");
    graph_cmd->require_subcommand(1);
    auto* graph_build = graph_cmd->add_subcommand("build", "build a shift matrix from a graph");
    std::string edges_path, shift_name = "lazy_random_walk", graph_out;
    graph_build->add_option("--edges", edges_path, "graph JSON {\"n\", \"edges\"}")->required();
    graph_build->add_option("--shift", shift_name,
                            "adjacency|normalized_adjacency|lazy_random_walk|normalized_laplacian");
    graph_build->add_option("--out", graph_out, "output shift JSON")->required();

    auto* graph_skeleton =
        graph_cmd->add_subcommand("skeleton", "write the canned 20-joint skeleton graph");
    std::string skeleton_out;
    graph_skeleton->add_option("--out", skeleton_out, "output graph JSON")->required();

    // dims
    auto* dims = app.add_subcommand("dims", "print the feature dimension for a config");
    std::string dims_config;
    int dims_n = 0, dims_t = 0, dims_c = 1;
    dims->add_option("--config", dims_config, "pipeline config JSON")->required();
    dims->add_option("--n", dims_n, "spatial nodes")->required();
    dims->add_option("--t", dims_t, "time stamps")->required();
    dims->add_option("--channels", dims_c, "channels");

    // transform
    auto* transform = app.add_subcommand("transform", "scatter a dataset into feature rows");
    std::string tf_config, tf_manifest, tf_out;
    transform->add_option("--config", tf_config, "pipeline config JSON")->required();
    transform->add_option("--manifest", tf_manifest, "dataset manifest JSON")->required();
    transform->add_option("--out", tf_out, "output feature CSV")->required();

    // verify
    auto* verify = app.add_subcommand("verify", "numerical certification checks");
    std::string verify_check, verify_config;
    int verify_t = 32, verify_trials = 0;
    std::uint64_t verify_seed = 7;
    std::vector<double> verify_eps{0.01, 0.05, 0.1};
    std::vector<double> verify_snr{10.0, 20.0, 30.0};
    verify
        ->add_option("check", verify_check,
                     "frame|theorem1|theorem2|permutation|spectral-equivalence|wavelet-stability")
        ->required();
    verify->add_option("--config", verify_config, "pipeline config JSON (default: built-in)");
    verify->add_option("--t", verify_t, "temporal size for generated signals");
    verify->add_option("--epsilon", verify_eps, "structure perturbation levels");
    verify->add_option("--snr", verify_snr, "signal perturbation SNR levels (dB)");
    verify->add_option("--trials", verify_trials, "trials per level (0 = default)");
    verify->add_option("--seed", verify_seed, "Monte Carlo seed");

    // bench
    auto* bench = app.add_subcommand("bench", "separable vs joint timing");
    std::string bench_modes = "separable,joint-strong", bench_sizes = "10x50,20x100", bench_out;
    int bench_repeats = 5;
    bench->add_option("--modes", bench_modes, "comma list: separable,joint-strong,...");
    bench->add_option("--sizes", bench_sizes, "comma list of NxT sizes");
    bench->add_option("--repeats", bench_repeats, "timing repeats (median)");
    bench->add_option("--out", bench_out, "output CSV")->required();

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "evaluate features with a classifier");
    std::string cls_features, cls_method = "knn";
    ClassifyOptions cls_options;
    classify_cmd->add_option("--features", cls_features, "feature CSV")->required();
    classify_cmd->add_option("--method", cls_method, "knn|nearest_centroid");
    classify_cmd->add_option("--k", cls_options.k, "neighbors for knn");
    classify_cmd->add_option("--train-fraction", cls_options.train_fraction, "training fraction");
    classify_cmd->add_option("--seed", cls_options.seed, "split seed");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic labeled dataset");
    SyntheticParams synth_params;
    std::string synth_dir;
    synth->add_option("--classes", synth_params.n_classes, "number of classes");
    synth->add_option("--samples", synth_params.n_samples, "number of samples");
    synth->add_option("--n", synth_params.n_spatial, "spatial nodes");
    synth->add_option("--t", synth_params.n_time, "time stamps");
    synth->add_option("--channels", synth_params.channels, "channels");
    synth->add_option("--noise", synth_params.noise_sigma, "noise sigma");
    synth->add_option("--seed", synth_params.seed, "generator seed");
    synth->add_option("--out-dir", synth_dir, "output directory")->required();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "emit plot data (CSV)");
    std::string sweep_kind, sweep_config, sweep_manifest, sweep_out;
    int sweep_t = 32, sweep_k = 5;
    double sweep_fraction = 0.5;
    std::uint64_t sweep_seed = 7;
    std::vector<double> sweep_ratios{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> sweep_snrs{0.0, 5.0, 10.0, 20.0, 30.0};
    std::vector<double> sweep_eps{0.0, 0.01, 0.05, 0.1};
    sweep->add_option("--kind", sweep_kind, "training_ratio|snr|epsilon")->required();
    sweep->add_option("--config", sweep_config, "pipeline config JSON");
    sweep->add_option("--manifest", sweep_manifest, "dataset manifest (ratio/snr kinds)");
    sweep->add_option("--t", sweep_t, "temporal size (epsilon kind)");
    sweep->add_option("--k", sweep_k, "knn neighbors");
    sweep->add_option("--train-fraction", sweep_fraction, "training fraction");
    sweep->add_option("--seed", sweep_seed, "seed");
    sweep->add_option("--ratios", sweep_ratios, "training ratios");
    sweep->add_option("--snr", sweep_snrs, "SNR levels (dB)");
    sweep->add_option("--epsilon", sweep_eps, "perturbation levels");
    sweep->add_option("--out", sweep_out, "output CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*graph_build) {
            const Graph g = load_graph_json(edges_path);
            const ShiftMatrix s = make_shift(g, parse_shift_kind(shift_name));
            save_shift_json(s, graph_out);
            std::cout << "wrote " << graph_out << " (" << shift_kind_name(s.kind) << ", n=" << s.dim()
                      << (s.symmetric ? ", symmetric" : ", asymmetric") << ")\n";
        } else if (*graph_skeleton) {
            save_graph_json(skeleton_graph_20(), skeleton_out);
            std::cout << "wrote " << skeleton_out << "\n";
        } else if (*dims) {
            PipelineConfig cfg = load_pipeline_config(dims_config);
            std::cout << feature_dimension(cfg.scattering, dims_n, dims_t, dims_c) << "\n";
        } else if (*transform) {
            PipelineConfig cfg = load_pipeline_config(tf_config);
            if (cfg.spatial_graph_path.empty())
                throw std::runtime_error("transform: config must set spatial_graph");
            cfg.spatial_graph_path = resolve_relative(cfg.spatial_graph_path, tf_config);
            const Graph graph = load_graph_json(cfg.spatial_graph_path);
            const Dataset ds = load_dataset(tf_manifest);
            const FeatureTable table = transform_to_table(ds, cfg, graph);
            write_features_csv(table, tf_out);
            std::cout << "wrote " << tf_out << " (" << table.features.rows() << " x "
                      << table.features.cols() << ")\n";
        } else if (*verify) {
            PipelineConfig cfg = default_verify_config();
            if (!verify_config.empty()) {
                cfg = load_pipeline_config(verify_config);
                cfg.spatial_graph_path = resolve_relative(cfg.spatial_graph_path, verify_config);
            }
            return run_verify(verify_check, cfg, verify_t, verify_eps, verify_snr, verify_trials,
                              verify_seed);
        } else if (*bench) {
            BenchOptions options;
            options.sizes = parse_sizes(bench_sizes);
            options.modes = parse_modes(bench_modes);
            options.repeats = bench_repeats;
            const auto rows = bench_separable_vs_joint(options);
            write_bench_csv(rows, bench_out);
            std::cout << "wrote " << bench_out << " (" << rows.size() << " rows)\n";
        } else if (*classify_cmd) {
            cls_options.method = parse_classifier(cls_method);
            const FeatureTable table = read_features_csv(cls_features);
            const double accuracy = classify(table.features, table.labels, cls_options);
            std::cout.precision(6);
            std::cout << std::fixed << accuracy << "\n";
        } else if (*synth) {
            const SyntheticDataset synth_ds = generate_synthetic_dataset(synth_params);
            write_dataset(synth_ds.data, synth_ds.spatial_graph, synth_dir);
            std::cout << "wrote " << synth_dir << " (" << synth_ds.data.samples.size()
                      << " samples, N=" << synth_ds.data.n_spatial
                      << ", T=" << synth_ds.data.n_time << ")\n";
        } else if (*sweep) {
            PipelineConfig cfg = default_verify_config();
            if (!sweep_config.empty()) {
                cfg = load_pipeline_config(sweep_config);
                cfg.spatial_graph_path = resolve_relative(cfg.spatial_graph_path, sweep_config);
            }
            ClassifyOptions options;
            options.k = sweep_k;
            options.train_fraction = sweep_fraction;
            options.seed = sweep_seed;

            SweepTable table;
            if (sweep_kind == "epsilon") {
                table = epsilon_sweep(graph_for_config(cfg), cfg, sweep_t, sweep_eps, sweep_seed);
            } else {
                if (sweep_manifest.empty())
                    throw std::runtime_error("sweep: --manifest required for this kind");
                const Dataset ds = load_dataset(sweep_manifest);
                if (cfg.spatial_graph_path.empty())
                    throw std::runtime_error("sweep: config must set spatial_graph");
                const Graph graph = load_graph_json(cfg.spatial_graph_path);
                if (sweep_kind == "training_ratio")
                    table = training_ratio_sweep(ds, graph, cfg, options, sweep_ratios);
                else if (sweep_kind == "snr")
                    table = snr_sweep(ds, graph, cfg, options, sweep_snrs, sweep_seed);
                else
                    throw std::runtime_error("sweep: unknown kind " + sweep_kind);
            }
            write_sweep_csv(table, sweep_out);
            std::cout << "wrote " << sweep_out << " (" << table.rows.size() << " rows)\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "stgst: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
