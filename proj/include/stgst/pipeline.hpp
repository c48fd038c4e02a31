#pragma once

#include "stgst/dataset.hpp"
#include "stgst/json_io.hpp"
#include "stgst/scattering.hpp"
#include "stgst/wavelets.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stgst {

/// Everything a run needs beyond the data: the scattering configuration,
/// shift choices per modality, wavelet options, and the spatial graph
/// location. Shift kinds default per family (diffusion wavelets ride the
/// lazy random walk, spectral ones the normalized Laplacian).
struct PipelineConfig {
    ScatteringConfig scattering;
    ShiftKind spatial_shift = ShiftKind::LazyRandomWalk;
    ShiftKind temporal_shift = ShiftKind::LazyRandomWalk;
    ShiftKind joint_shift = ShiftKind::LazyRandomWalk;
    SpectralBankOptions spectral;
    std::vector<PolynomialFilter> custom_spatial;
    std::vector<PolynomialFilter> custom_temporal;
    std::vector<PolynomialFilter> custom_joint;
    std::string spatial_graph_path; // optional; required by transform
    std::uint64_t seed = 12345;
};

ShiftKind default_shift_kind(WaveletFamily family);

// Config JSON keys: mode, product, L, Js, Jt, J, spatial_family,
// temporal_family, joint_family, pooling, linear_bypass, keep_tree_signals,
// spatial_shift, temporal_shift, joint_shift, spatial_graph,
// monic_cubic_scale_range, custom_{spatial,temporal,joint}_coeffs, seed.
PipelineConfig parse_pipeline_config(const std::string& json_text);
PipelineConfig load_pipeline_config(const std::string& path);

// Builds a bank of the requested family over a shift, eigendecomposing
// symmetric shifts on demand for the spectral families.
FilterBank build_bank(const ShiftMatrix& shift, WaveletFamily family, int num_scales,
                      const SpectralBankOptions& options,
                      const std::vector<PolynomialFilter>& custom = {});

struct SeparableBanks {
    ShiftMatrix spatial_shift;
    ShiftMatrix temporal_shift;
    FilterBank spatial;
    FilterBank temporal;
};

SeparableBanks build_separable_banks(const Graph& spatial_graph, int n_time,
                                     const PipelineConfig& cfg);

struct JointBank {
    ShiftMatrix shift; // shift of the product graph
    FilterBank bank;
};

JointBank build_joint_bank(const Graph& spatial_graph, int n_time, const PipelineConfig& cfg);

// One scattering pass per sample; row i of the result is sample i's
// feature map in canonical order. Sample-parallel and bit-identical to a
// serial run.
Eigen::MatrixXd transform_dataset(const Dataset& ds, const PipelineConfig& cfg,
                                  const Graph& spatial_graph);

FeatureTable transform_to_table(const Dataset& ds, const PipelineConfig& cfg,
                                const Graph& spatial_graph);

} // namespace stgst
