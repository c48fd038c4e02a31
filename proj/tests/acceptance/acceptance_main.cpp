// Acceptance suite: runs every certification criterion end to end and
// prints one PASS/FAIL line per criterion with timing. Exit code equals the
// number of failures.

#include "stgst/bench.hpp"
#include "stgst/classify.hpp"
#include "stgst/dataset.hpp"
#include "stgst/pipeline.hpp"
#include "stgst/rng.hpp"
#include "stgst/scattering.hpp"
#include "stgst/stability.hpp"
#include "stgst/wavelets.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace stgst;

namespace {

int g_criterion = 0;
int g_failures = 0;
constexpr int kTotal = 10;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(const char* name, bool pass, double seconds, double budget_seconds,
            const std::string& detail) {
    ++g_criterion;
    const bool in_budget = seconds < budget_seconds;
    if (!pass || !in_budget) ++g_failures;
    std::printf("[%2d/%2d] %s %-22s %6.2fs (< %.0fs)  %s%s\n", g_criterion, kTotal,
                pass && in_budget ? "PASS" : "FAIL", name, seconds, budget_seconds,
                detail.c_str(), in_budget ? "" : " [over time budget]");
    std::fflush(stdout);
}

ScatteringConfig cert_cfg(int js, int jt, int layers) {
    ScatteringConfig cfg;
    cfg.mode = ScatteringMode::Separable;
    cfg.spatial_scales = js;
    cfg.temporal_scales = jt;
    cfg.layers = layers;
    cfg.pooling = Pooling::SpatialAvg;
    return cfg;
}

// --- 1: itersine banks measure as tight frames ------------------------------
void criterion_frame_tightness() {
    Timer timer;
    const double tolerance = 1e-5;
    double worst = 0.0;
    const int sizes[] = {8, 17, 26, 35, 50};
    const int scales[] = {2, 3, 4, 6, 8};
    for (int i = 0; i < 5; ++i) {
        const Graph g = random_connected_graph(sizes[i], 9000 + i);
        const ShiftKind kind = i % 2 ? ShiftKind::Adjacency : ShiftKind::NormalizedLaplacian;
        const ShiftMatrix shift = eigendecompose(make_shift(g, kind));
        const FilterBank bank = build_spectral_bank(shift, WaveletFamily::Itersine, scales[i]);
        worst = std::max({worst, std::abs(bank.frame_lower - 1.0),
                          std::abs(bank.frame_upper - 1.0)});
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail), "max |A-1|,|B-1| = %.3e (tol %.0e, 5 shifts)", worst,
                  tolerance);
    report("frame_tightness", worst <= tolerance, timer.seconds(), 5.0, detail);
}

// --- 2: separable frame sandwich --------------------------------------------
void criterion_lemma1_sandwich() {
    Timer timer;
    const ShiftMatrix slap =
        eigendecompose(make_shift(random_connected_graph(12, 901), ShiftKind::NormalizedLaplacian));
    const ShiftMatrix tlap =
        eigendecompose(make_shift(build_line_graph(16), ShiftKind::NormalizedLaplacian));
    const FilterBank tight_s = build_spectral_bank(slap, WaveletFamily::Itersine, 3);
    const FilterBank tight_t = build_spectral_bank(tlap, WaveletFamily::Itersine, 3);
    const FilterBank diffusion = build_geometric_bank(
        make_shift(random_connected_graph(12, 902), ShiftKind::LazyRandomWalk), 3);

    const StabilityReport tight_pair = verify_lemma1(tight_s, tight_t, 100, 51);
    const StabilityReport mixed_pair = verify_lemma1(diffusion, tight_t, 100, 52);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "tight pair margin %.2e; geometric x itersine margin %.2e (100 trials each)",
                  tight_pair.margin, mixed_pair.margin);
    report("lemma1_sandwich", tight_pair.pass && mixed_pair.pass, timer.seconds(), 10.0, detail);
}

// --- 3: joint/spectral and separable/Kronecker route agreement --------------
void criterion_spectral_equivalence() {
    Timer timer;
    const StabilityReport r = check_spectral_equivalence(6, 6, 25, 53);
    char detail[128];
    std::snprintf(detail, sizeof(detail), "%s (normalized worst ratio %.3e)",
                  r.inputs_digest.c_str(), r.lhs);
    report("spectral_equivalence", r.pass, timer.seconds(), 2.0, detail);
}

// --- 4: signal-perturbation bound, zero violations --------------------------
void criterion_theorem1() {
    Timer timer;
    const Graph skeleton = skeleton_graph_20();
    const ShiftMatrix slap =
        eigendecompose(make_shift(skeleton, ShiftKind::NormalizedLaplacian));
    const ShiftMatrix tlap =
        eigendecompose(make_shift(build_line_graph(32), ShiftKind::NormalizedLaplacian));
    const FilterBank spatial = build_spectral_bank(slap, WaveletFamily::Itersine, 2);
    const FilterBank temporal = build_spectral_bank(tlap, WaveletFamily::Itersine, 2);

    auto rng = make_engine(54, 0);
    const StSignal x = random_signal(1, 20, 32, rng);
    const StabilityReport r = certify_theorem1(cert_cfg(2, 2, 3), spatial, temporal, x,
                                               {10.0, 20.0, 30.0}, 100, 54);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "300 trials at SNR {10,20,30} dB, worst margin %.3e (lhs %.3e <= rhs %.3e)",
                  r.margin, r.lhs, r.rhs);
    report("theorem1_signal", r.pass, timer.seconds(), 60.0, detail);
}

// --- 5: structure-perturbation bound ----------------------------------------
void criterion_theorem2() {
    Timer timer;
    const Graph skeleton = skeleton_graph_20();
    const ShiftMatrix slap =
        eigendecompose(make_shift(skeleton, ShiftKind::NormalizedLaplacian));
    const ShiftMatrix tlap =
        eigendecompose(make_shift(build_line_graph(32), ShiftKind::NormalizedLaplacian));
    const FilterBank spatial = build_spectral_bank(slap, WaveletFamily::Itersine, 2);
    const FilterBank temporal = build_spectral_bank(tlap, WaveletFamily::Itersine, 2);

    auto rng = make_engine(55, 0);
    const StSignal x = random_signal(1, 20, 32, rng);

    const StructurePerturbation zero =
        make_structure_perturbation(Eigen::MatrixXd::Zero(20, 20), 0.0);
    const StabilityReport at_zero =
        check_theorem2(cert_cfg(2, 2, 3), spatial, temporal, x, zero);
    const bool zero_exact = at_zero.lhs == 0.0;

    const StabilityReport sweep = certify_theorem2(cert_cfg(2, 2, 3), spatial, temporal, x,
                                                   {0.01, 0.05, 0.1}, 20, 55);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "60 diagonal-E trials, worst margin %.3e; lhs(eps=0) = %.1e",
                  sweep.margin, at_zero.lhs);
    report("theorem2_structure", sweep.pass && zero_exact && sweep.note.empty(),
           timer.seconds(), 120.0, detail);
}

// --- 6: permutation invariance ----------------------------------------------
void criterion_permutation() {
    Timer timer;
    const Graph skeleton = skeleton_graph_20();
    const FilterBank spatial =
        build_geometric_bank(make_shift(skeleton, ShiftKind::LazyRandomWalk), 2);
    const FilterBank temporal =
        build_geometric_bank(make_shift(build_line_graph(24), ShiftKind::LazyRandomWalk), 2);
    auto rng = make_engine(56, 0);
    const StSignal x = random_signal(1, 20, 24, rng);

    const StabilityReport r =
        certify_permutation_invariance(cert_cfg(2, 2, 3), spatial, temporal, x, 20, 56);
    char detail[128];
    std::snprintf(detail, sizeof(detail), "20 permutations, max deviation %.3e (tol 1e-10)",
                  r.lhs);
    report("permutation_invariance", r.pass, timer.seconds(), 30.0, detail);
}

// --- 7: joint vs separable coefficient structure -----------------------------
void criterion_c1_c2() {
    Timer timer;
    auto rng = make_engine(57, 0);
    std::normal_distribution<double> gauss;
    bool ok = true;
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        PolynomialFilter h{{gauss(rng), gauss(rng), gauss(rng)}};
        PolynomialFilter g{{gauss(rng), gauss(rng), gauss(rng)}};
        if (h.coeffs[0] == 0 && h.coeffs[1] == 0 && h.coeffs[2] == 0) h.coeffs[0] = 1;
        if (g.coeffs[0] == 0 && g.coeffs[1] == 0 && g.coeffs[2] == 0) g.coeffs[0] = 1;
        const auto [joint, separable] = coefficient_matrices(h, g);
        ok = ok && joint == joint.transpose().eval();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(separable);
        const double ratio = svd.singularValues()(1) / (svd.singularValues()(0) + 1e-300);
        worst_ratio = std::max(worst_ratio, ratio);
        ok = ok && ratio <= 1e-10;
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "1000 draws: joint matrix symmetric, sigma2/sigma1 <= %.2e", worst_ratio);
    report("c1_c2_structure", ok, timer.seconds(), 2.0, detail);
}

// --- 8: scattering tree combinatorics ----------------------------------------
void criterion_tree_combinatorics() {
    Timer timer;
    bool ok = true;
    std::int64_t fig2_count = 0;
    for (int js = 1; js <= 4 && ok; ++js)
        for (int jt = 1; jt <= 4 && ok; ++jt) {
            const ShiftMatrix sshift =
                make_shift(random_connected_graph(3, 800 + js), ShiftKind::LazyRandomWalk);
            const ShiftMatrix tshift =
                make_shift(build_line_graph(4), ShiftKind::LazyRandomWalk);
            const FilterBank spatial = build_geometric_bank(sshift, js);
            const FilterBank temporal = build_geometric_bank(tshift, jt);
            auto rng = make_engine(58, static_cast<std::uint64_t>(js * 10 + jt));
            const StSignal x = random_signal(1, 3, 4, rng);
            for (int layers = 1; layers <= 4 && ok; ++layers) {
                ScatteringConfig cfg = cert_cfg(js, jt, layers);
                cfg.pooling = Pooling::FullAvg;
                const FeatureMap map = scatter_separable(x, cfg, spatial, temporal);
                std::int64_t expected = 0, width = 1;
                for (int l = 0; l < layers; ++l) {
                    expected += width;
                    width *= js * jt;
                }
                ok = ok && static_cast<std::int64_t>(map.entries.size()) == expected;
                ok = ok && feature_dimension(cfg, 3, 4, 1) == expected;
                if (js == 2 && jt == 2 && layers == 3) fig2_count = expected;
            }
        }
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "all (Js,Jt,L) in {1..4}^3; (2,2,3) tree has %lld nodes",
                  static_cast<long long>(fig2_count));
    report("tree_combinatorics", ok && fig2_count == 21, timer.seconds(), 1.0, detail);
}

// --- 9: separable vs joint complexity gap ------------------------------------
void criterion_complexity_gap() {
    Timer timer;
    BenchOptions options;
    options.sizes = {{10, 50}, {15, 70}, {20, 100}};
    options.modes = {"separable", "joint-strong"};
    options.repeats = 7;
    options.layers = 3;
    options.spatial_scales = 3;
    options.temporal_scales = 3;
    const auto rows = bench_separable_vs_joint(options);

    bool separable_faster = true;
    std::vector<std::pair<double, double>> sep_points, joint_points;
    for (const auto& [n, t] : options.sizes) {
        double sep = -1, joint = -1;
        for (const auto& r : rows)
            if (r.n == n && r.t == t) (r.mode == "separable" ? sep : joint) = r.wall_time_seconds;
        separable_faster = separable_faster && sep > 0 && joint > 0 && sep < joint;
        sep_points.emplace_back(static_cast<double>(n) * t, sep);
        joint_points.emplace_back(static_cast<double>(n) * t, joint);
    }
    const double sep_slope = loglog_slope(sep_points);
    const double joint_slope = loglog_slope(joint_points);
    const bool slope_gap = joint_slope - sep_slope >= 0.5;

    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "separable slope %.2f, joint slope %.2f (gap %.2f >= 0.5); separable faster at "
                  "every size: %s",
                  sep_slope, joint_slope, joint_slope - sep_slope,
                  separable_faster ? "yes" : "no");
    report("complexity_gap", separable_faster && slope_gap, timer.seconds(), 300.0, detail);
}

// --- 10: synthetic end-to-end with the nonlinearity ablation ------------------
void criterion_synthetic_end_to_end() {
    Timer timer;
    const SyntheticDataset synth = generate_synthetic_dataset(
        {.n_samples = 200, .n_spatial = 20, .n_time = 64, .channels = 1, .n_classes = 2,
         .noise_sigma = 0.1, .seed = 7});

    PipelineConfig cfg;
    cfg.scattering = cert_cfg(2, 2, 3);
    cfg.scattering.spatial_family = WaveletFamily::Geometric;
    cfg.scattering.temporal_family = WaveletFamily::Geometric;

    std::vector<int> labels;
    for (const auto& s : synth.data.samples) labels.push_back(s.label);
    ClassifyOptions options;
    options.method = ClassifierKind::Knn;
    options.k = 5;
    options.train_fraction = 0.5;
    options.seed = 7;

    const Eigen::MatrixXd nonlinear = transform_dataset(synth.data, cfg, synth.spatial_graph);
    const double accuracy = classify(nonlinear, labels, options);

    cfg.scattering.linear_bypass = true;
    const Eigen::MatrixXd linear = transform_dataset(synth.data, cfg, synth.spatial_graph);
    const double linear_accuracy = classify(linear, labels, options);

    const bool ok = accuracy >= 0.90 && accuracy - linear_accuracy >= 0.05;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "kNN(5) accuracy %.3f (>= 0.90); linear bypass %.3f (gap %.3f >= 0.05)",
                  accuracy, linear_accuracy, accuracy - linear_accuracy);
    report("synthetic_end_to_end", ok, timer.seconds(), 180.0, detail);
}

} // namespace

int main() {
    std::printf("ST-GST acceptance suite\n");
    criterion_frame_tightness();
    criterion_lemma1_sandwich();
    criterion_spectral_equivalence();
    criterion_theorem1();
    criterion_theorem2();
    criterion_permutation();
    criterion_c1_c2();
    criterion_tree_combinatorics();
    criterion_complexity_gap();
    criterion_synthetic_end_to_end();
    std::printf("%d/%d criteria passed\n", kTotal - g_failures, kTotal);
    return g_failures;
}
