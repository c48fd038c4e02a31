#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace stgst {

struct BenchRow {
    int n = 0;
    int t = 0;
    std::string mode; // "separable", "joint-kronecker", "joint-cartesian", "joint-strong"
    double wall_time_seconds = 0.0;
    double flops_estimate = 0.0;
};

struct BenchOptions {
    std::vector<std::pair<int, int>> sizes; // (N, T)
    std::vector<std::string> modes = {"separable", "joint-strong"};
    int repeats = 5;
    int layers = 3;
    int spatial_scales = 3;  // joint runs use J = Js * Jt filters
    int temporal_scales = 3;
    int joint_taps = 3;      // polynomial length K in joint mode
    std::uint64_t seed = 1;
};

// Times one full scattering pass per mode per size with warm banks
// (construction excluded), median over repeats. Joint sizes beyond the
// dense guard are skipped with a note on stderr.
std::vector<BenchRow> bench_separable_vs_joint(const BenchOptions& options);

void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<std::pair<double, double>>& points);

} // namespace stgst
