#include "stgst/pipeline.hpp"

#include "stgst/parallel.hpp"
#include "stgst/product.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace stgst {

namespace {

using nlohmann::json;

std::vector<PolynomialFilter> parse_coeff_lists(const json& j) {
    std::vector<PolynomialFilter> polys;
    for (const auto& list : j) {
        PolynomialFilter p;
        for (const auto& c : list) p.coeffs.push_back(c.get<double>());
        validate_polynomial(p);
        polys.push_back(std::move(p));
    }
    return polys;
}

} // namespace

ShiftKind default_shift_kind(WaveletFamily family) {
    switch (family) {
        case WaveletFamily::Geometric: return ShiftKind::LazyRandomWalk;
        case WaveletFamily::MonicCubic:
        case WaveletFamily::Itersine: return ShiftKind::NormalizedLaplacian;
        case WaveletFamily::CustomPolynomial: return ShiftKind::NormalizedAdjacency;
    }
    throw std::logic_error("unknown wavelet family");
}

PipelineConfig parse_pipeline_config(const std::string& json_text) {
    json j = json::parse(json_text);
    PipelineConfig cfg;
    ScatteringConfig& sc = cfg.scattering;

    if (j.contains("mode")) {
        const std::string mode = j["mode"].get<std::string>();
        if (mode == "separable") sc.mode = ScatteringMode::Separable;
        else if (mode == "joint") sc.mode = ScatteringMode::Joint;
        else throw std::invalid_argument("config: unknown mode " + mode);
    }
    if (j.contains("product")) sc.product = parse_product_kind(j["product"].get<std::string>());
    if (j.contains("L")) sc.layers = j["L"].get<int>();
    if (j.contains("Js")) sc.spatial_scales = j["Js"].get<int>();
    if (j.contains("Jt")) sc.temporal_scales = j["Jt"].get<int>();
    if (j.contains("J")) sc.joint_scales = j["J"].get<int>();
    if (j.contains("spatial_family"))
        sc.spatial_family = parse_wavelet_family(j["spatial_family"].get<std::string>());
    if (j.contains("temporal_family"))
        sc.temporal_family = parse_wavelet_family(j["temporal_family"].get<std::string>());
    if (j.contains("joint_family"))
        sc.joint_family = parse_wavelet_family(j["joint_family"].get<std::string>());
    if (j.contains("pooling")) sc.pooling = parse_pooling(j["pooling"].get<std::string>());
    if (j.contains("linear_bypass")) sc.linear_bypass = j["linear_bypass"].get<bool>();
    if (j.contains("keep_tree_signals"))
        sc.keep_tree_signals = j["keep_tree_signals"].get<bool>();
    validate_config(sc);

    cfg.spatial_shift = j.contains("spatial_shift")
                            ? parse_shift_kind(j["spatial_shift"].get<std::string>())
                            : default_shift_kind(sc.spatial_family);
    cfg.temporal_shift = j.contains("temporal_shift")
                             ? parse_shift_kind(j["temporal_shift"].get<std::string>())
                             : default_shift_kind(sc.temporal_family);
    cfg.joint_shift = j.contains("joint_shift")
                          ? parse_shift_kind(j["joint_shift"].get<std::string>())
                          : default_shift_kind(sc.joint_family);

    if (j.contains("monic_cubic_scale_range")) {
        const auto& range = j["monic_cubic_scale_range"];
        if (!range.is_array() || range.size() != 2)
            throw std::invalid_argument("config: monic_cubic_scale_range must be [lo, hi]");
        cfg.spectral.monic_cubic_lo = range[0].get<double>();
        cfg.spectral.monic_cubic_hi = range[1].get<double>();
    }
    if (j.contains("custom_spatial_coeffs"))
        cfg.custom_spatial = parse_coeff_lists(j["custom_spatial_coeffs"]);
    if (j.contains("custom_temporal_coeffs"))
        cfg.custom_temporal = parse_coeff_lists(j["custom_temporal_coeffs"]);
    if (j.contains("custom_joint_coeffs"))
        cfg.custom_joint = parse_coeff_lists(j["custom_joint_coeffs"]);
    if (j.contains("spatial_graph")) cfg.spatial_graph_path = j["spatial_graph"].get<std::string>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    return cfg;
}

PipelineConfig load_pipeline_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_pipeline_config(text);
}

FilterBank build_bank(const ShiftMatrix& shift, WaveletFamily family, int num_scales,
                      const SpectralBankOptions& options,
                      const std::vector<PolynomialFilter>& custom) {
    switch (family) {
        case WaveletFamily::Geometric:
            return build_geometric_bank(shift, num_scales);
        case WaveletFamily::MonicCubic:
        case WaveletFamily::Itersine: {
            if (shift.eig) return build_spectral_bank(shift, family, num_scales, options);
            if (!shift.symmetric)
                throw std::invalid_argument("build_bank: spectral family needs a symmetric shift");
            return build_spectral_bank(eigendecompose(shift), family, num_scales, options);
        }
        case WaveletFamily::CustomPolynomial: {
            if (custom.empty())
                throw std::invalid_argument("build_bank: custom family needs coefficient lists");
            if (static_cast<int>(custom.size()) != num_scales)
                throw std::invalid_argument(
                    "build_bank: coefficient list count does not match the scale count");
            ShiftMatrix s = shift;
            if (!s.eig && s.symmetric) s = eigendecompose(s);
            return build_custom_poly_bank(s, custom);
        }
    }
    throw std::logic_error("unknown wavelet family");
}

SeparableBanks build_separable_banks(const Graph& spatial_graph, int n_time,
                                     const PipelineConfig& cfg) {
    const ScatteringConfig& sc = cfg.scattering;
    SeparableBanks banks;
    banks.spatial_shift = make_shift(spatial_graph, cfg.spatial_shift);
    banks.temporal_shift = make_shift(build_line_graph(n_time), cfg.temporal_shift);
    banks.spatial = build_bank(banks.spatial_shift, sc.spatial_family, sc.spatial_scales,
                               cfg.spectral, cfg.custom_spatial);
    banks.temporal = build_bank(banks.temporal_shift, sc.temporal_family, sc.temporal_scales,
                                cfg.spectral, cfg.custom_temporal);
    return banks;
}

JointBank build_joint_bank(const Graph& spatial_graph, int n_time, const PipelineConfig& cfg) {
    const ScatteringConfig& sc = cfg.scattering;
    const Graph temporal_graph = build_line_graph(n_time);
    const ProductGraph joint = product(spatial_graph, temporal_graph, sc.product);
    Graph as_graph;
    as_graph.n = joint.n_spatial * joint.n_time;
    as_graph.adjacency = joint.adjacency;
    JointBank out;
    out.shift = make_shift(as_graph, cfg.joint_shift);
    out.bank = build_bank(out.shift, sc.joint_family, sc.joint_scales, cfg.spectral,
                          cfg.custom_joint);
    return out;
}

Eigen::MatrixXd transform_dataset(const Dataset& ds, const PipelineConfig& cfg,
                                  const Graph& spatial_graph) {
    if (ds.samples.empty()) throw std::invalid_argument("transform_dataset: empty dataset");
    if (spatial_graph.n != ds.n_spatial)
        throw std::invalid_argument("transform_dataset: graph size does not match dataset");

    const ScatteringConfig& sc = cfg.scattering;
    const std::int64_t dim = feature_dimension(sc, ds.n_spatial, ds.n_time, ds.channels);
    Eigen::MatrixXd features(static_cast<Eigen::Index>(ds.samples.size()),
                             static_cast<Eigen::Index>(dim));

    if (sc.mode == ScatteringMode::Separable) {
        const SeparableBanks banks = build_separable_banks(spatial_graph, ds.n_time, cfg);
        parallel_for(ds.samples.size(), [&](std::size_t i) {
            const FeatureMap map =
                scatter_separable(ds.samples[i].signal, sc, banks.spatial, banks.temporal);
            features.row(static_cast<Eigen::Index>(i)) = map.flattened().transpose();
        });
    } else {
        const JointBank joint = build_joint_bank(spatial_graph, ds.n_time, cfg);
        parallel_for(ds.samples.size(), [&](std::size_t i) {
            const FeatureMap map = scatter_joint(ds.samples[i].signal, sc, joint.bank);
            features.row(static_cast<Eigen::Index>(i)) = map.flattened().transpose();
        });
    }
    return features;
}

FeatureTable transform_to_table(const Dataset& ds, const PipelineConfig& cfg,
                                const Graph& spatial_graph) {
    FeatureTable table;
    table.features = transform_dataset(ds, cfg, spatial_graph);
    table.ids.reserve(ds.samples.size());
    table.labels.reserve(ds.samples.size());
    for (const auto& s : ds.samples) {
        table.ids.push_back(s.id);
        table.labels.push_back(s.label);
    }
    return table;
}

} // namespace stgst
