#include "stgst/bench.hpp"

#include "stgst/pipeline.hpp"
#include "stgst/product.hpp"
#include "stgst/rng.hpp"
#include "stgst/stability.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace stgst {

namespace {

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double time_once(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::max(std::chrono::duration<double>(stop - start).count(), 1e-9);
}

// Parent nodes actually applying filters: all but the last layer.
double filtering_parents(int scales_per_node, int layers) {
    double acc = 0.0, width = 1.0;
    for (int l = 0; l + 1 < layers; ++l) {
        acc += width;
        width *= scales_per_node;
    }
    return acc;
}

} // namespace

std::vector<BenchRow> bench_separable_vs_joint(const BenchOptions& options) {
    if (options.repeats < 1) throw std::invalid_argument("bench: repeats must be >= 1");

    std::vector<BenchRow> rows;
    for (const auto& [n, t] : options.sizes) {
        const Graph spatial_graph = random_connected_graph(n, options.seed + n);
        auto rng = make_engine(options.seed, static_cast<std::uint64_t>(n) * 1000 + t);
        const StSignal x = random_signal(1, n, t, rng);
        const int joint_scales = options.spatial_scales * options.temporal_scales;

        for (const std::string& mode : options.modes) {
            BenchRow row;
            row.n = n;
            row.t = t;
            row.mode = mode;

            if (mode == "separable") {
                PipelineConfig cfg;
                cfg.scattering.mode = ScatteringMode::Separable;
                cfg.scattering.layers = options.layers;
                cfg.scattering.spatial_scales = options.spatial_scales;
                cfg.scattering.temporal_scales = options.temporal_scales;
                cfg.scattering.spatial_family = WaveletFamily::Geometric;
                cfg.scattering.temporal_family = WaveletFamily::Geometric;
                const SeparableBanks banks = build_separable_banks(spatial_graph, t, cfg);

                auto pass = [&] {
                    scatter_separable(x, cfg.scattering, banks.spatial, banks.temporal);
                };
                pass(); // warm-up
                std::vector<double> times;
                for (int r = 0; r < options.repeats; ++r) times.push_back(time_once(pass));
                row.wall_time_seconds = median(times);

                const double parents = filtering_parents(joint_scales, options.layers);
                row.flops_estimate =
                    parents * (options.spatial_scales * 2.0 * n * n * t +
                               static_cast<double>(joint_scales) * 2.0 * n * t * t);
            } else if (mode.rfind("joint-", 0) == 0) {
                if (static_cast<long>(n) * t > kMaxJointNodes) {
                    std::cerr << "stgst: bench note: skipping " << mode << " at N=" << n
                              << " T=" << t << " (N*T exceeds the dense joint guard)\n";
                    continue;
                }
                const ProductKind kind = parse_product_kind(mode.substr(6));
                PipelineConfig cfg;
                cfg.scattering.mode = ScatteringMode::Joint;
                cfg.scattering.product = kind;
                cfg.scattering.layers = options.layers;
                cfg.scattering.joint_scales = joint_scales;
                cfg.scattering.joint_family = WaveletFamily::CustomPolynomial;
                cfg.joint_shift = ShiftKind::LazyRandomWalk;

                // Deterministic band polynomials; applied via Horner so the
                // per-filter cost stays O(K (NT)^2).
                auto coeff_rng = make_engine(options.seed, 77);
                std::uniform_real_distribution<double> coeff(0.2, 1.0);
                for (int jf = 0; jf < joint_scales; ++jf) {
                    PolynomialFilter p;
                    for (int k = 0; k < options.joint_taps; ++k)
                        p.coeffs.push_back((k % 2 ? -1.0 : 1.0) * coeff(coeff_rng));
                    cfg.custom_joint.push_back(std::move(p));
                }

                const Graph temporal_graph = build_line_graph(t);
                const ProductGraph joint = product(spatial_graph, temporal_graph, kind);
                Graph as_graph;
                as_graph.n = joint.n_spatial * joint.n_time;
                as_graph.adjacency = joint.adjacency;
                const ShiftMatrix shift = make_shift(as_graph, cfg.joint_shift);
                const FilterBank bank =
                    build_custom_poly_bank(shift, cfg.custom_joint, /*materialize_limit=*/0);

                auto pass = [&] { scatter_joint(x, cfg.scattering, bank); };
                pass();
                std::vector<double> times;
                for (int r = 0; r < options.repeats; ++r) times.push_back(time_once(pass));
                row.wall_time_seconds = median(times);

                const double parents = filtering_parents(joint_scales, options.layers);
                const double nt = static_cast<double>(n) * t;
                row.flops_estimate = parents * joint_scales * (options.joint_taps - 1) * 2.0 * nt * nt;
            } else {
                throw std::invalid_argument("bench: unknown mode " + mode);
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "N,T,mode,wall_time_seconds,flops_estimate\n";
    out.precision(9);
    for (const auto& r : rows)
        out << r.n << ',' << r.t << ',' << r.mode << ',' << r.wall_time_seconds << ','
            << r.flops_estimate << '\n';
}

double loglog_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2)
        throw std::invalid_argument("loglog_slope: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(points.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace stgst
