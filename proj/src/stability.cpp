#include "stgst/stability.hpp"

#include "stgst/graph.hpp"
#include "stgst/rng.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace stgst {

namespace {

constexpr double kPassSlack = 1e-9;   // pass when lhs <= rhs * (1 + slack)
constexpr double kFrameSlack = 1e-6;  // relative slack on frame sandwiches

// Fresh distribution per call: normal_distribution caches a spare draw,
// which would leak state between substream engines.
double gaussian(std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

Eigen::MatrixXd gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = gaussian(rng);
    return m;
}

ShiftMatrix shift_from_bank(const FilterBank& bank) {
    ShiftMatrix s;
    s.kind = bank.shift_kind;
    s.matrix = bank.shift;
    s.symmetric = bank.shift_symmetric;
    return s;
}

// Eigenvalue magnitudes of E; diagonal and symmetric cases stay exact.
std::vector<std::complex<double>> perturbation_eigenvalues(const Eigen::MatrixXd& e) {
    const Eigen::Index n = e.rows();
    bool diagonal = true;
    for (Eigen::Index i = 0; i < n && diagonal; ++i)
        for (Eigen::Index j = 0; j < n && diagonal; ++j)
            if (i != j && e(i, j) != 0.0) diagonal = false;

    std::vector<std::complex<double>> values;
    values.reserve(static_cast<std::size_t>(n));
    if (diagonal) {
        for (Eigen::Index i = 0; i < n; ++i) values.emplace_back(e(i, i), 0.0);
    } else if (is_numerically_symmetric(e)) {
        EigenDecomposition d = symmetric_eig(e);
        for (Eigen::Index i = 0; i < n; ++i) values.emplace_back(d.values(i), 0.0);
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> solver(e);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("perturbation eigenvalues failed to converge");
        for (Eigen::Index i = 0; i < n; ++i) values.push_back(solver.eigenvalues()(i));
    }
    std::sort(values.begin(), values.end(),
              [](const auto& a, const auto& b) { return std::abs(a) < std::abs(b); });
    return values;
}

double sum_powers(double base, int layers) { // sum_{l=0}^{layers-1} base^l
    double acc = 0.0, term = 1.0;
    for (int l = 0; l < layers; ++l) {
        acc += term;
        term *= base;
    }
    return acc;
}

} // namespace

std::vector<Eigen::MatrixXd> realize_delta(const SignalPerturbation& p, const StSignal& x,
                                           std::mt19937_64& rng) {
    if (!p.delta.empty()) {
        if (static_cast<int>(p.delta.size()) != x.channels)
            throw std::invalid_argument("signal perturbation: channel count mismatch");
        for (const auto& d : p.delta)
            if (d.rows() != x.n_spatial || d.cols() != x.n_time)
                throw std::invalid_argument("signal perturbation: delta shape mismatch");
        return p.delta;
    }
    if (!p.target_snr_db)
        throw std::invalid_argument("signal perturbation: neither delta nor target SNR given");

    std::vector<Eigen::MatrixXd> delta;
    delta.reserve(static_cast<std::size_t>(x.channels));
    double raw_sq = 0.0;
    for (int c = 0; c < x.channels; ++c) {
        delta.push_back(gaussian_matrix(x.n_spatial, x.n_time, rng));
        raw_sq += delta.back().squaredNorm();
    }
    const double signal_sq = signal_norm(x) * signal_norm(x);
    const double target_sq = signal_sq * std::pow(10.0, -*p.target_snr_db / 10.0);
    if (raw_sq <= 0.0) throw std::runtime_error("signal perturbation: degenerate draw");
    const double scale = std::sqrt(target_sq / raw_sq);
    for (auto& d : delta) d *= scale;
    return delta;
}

double delta_norm(const std::vector<Eigen::MatrixXd>& delta) {
    double sq = 0.0;
    for (const auto& d : delta) sq += d.squaredNorm();
    return std::sqrt(sq);
}

double snr_db(const StSignal& x, const std::vector<Eigen::MatrixXd>& delta) {
    const double nx = signal_norm(x);
    const double nd = delta_norm(delta);
    return 10.0 * std::log10((nx * nx) / (nd * nd));
}

StructurePerturbation make_structure_perturbation(Eigen::MatrixXd e, double epsilon) {
    if (e.rows() != e.cols())
        throw std::invalid_argument("structure perturbation: E must be square");
    const bool zero = e.isZero(0.0);
    if (!zero && !(epsilon > 0.0))
        throw std::invalid_argument("structure perturbation: epsilon must be positive");
    if (epsilon < 0.0)
        throw std::invalid_argument("structure perturbation: epsilon must be nonnegative");

    if (!zero) {
        auto values = perturbation_eigenvalues(e);
        const std::complex<double> m_last = values.back();
        const double slack = 1.0 + 1e-12;
        if (std::abs(m_last) > (epsilon / 2.0) * slack)
            throw std::invalid_argument(
                "structure perturbation: largest |eigenvalue| exceeds epsilon/2");
        for (const auto& m : values) {
            if (std::abs(m / m_last - 1.0) > epsilon * slack)
                throw std::invalid_argument(
                    "structure perturbation: eigenvalue ratio strays more than epsilon from 1");
        }
    }
    return StructurePerturbation{std::move(e), epsilon};
}

StructurePerturbation random_diagonal_perturbation(int n, double epsilon, std::mt19937_64& rng) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("random_diagonal_perturbation: epsilon must be positive");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
    const double lead = sign * epsilon / 2.0;
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = lead * (1.0 - unit(rng) * epsilon);
    // One entry carries the extremal magnitude so ordering is unambiguous.
    std::uniform_int_distribution<int> pick(0, n - 1);
    d(pick(rng)) = lead;
    Eigen::MatrixXd e = d.asDiagonal();
    return make_structure_perturbation(std::move(e), epsilon);
}

ShiftMatrix perturb_structure(const ShiftMatrix& ss, const StructurePerturbation& p) {
    if (!ss.symmetric)
        throw std::invalid_argument("perturb_structure: base shift must be symmetric");
    if (p.e.rows() != ss.dim())
        throw std::invalid_argument("perturb_structure: dimension mismatch");
    ShiftMatrix out;
    out.kind = ss.kind;
    out.matrix = ss.matrix + p.e.transpose() * ss.matrix + ss.matrix * p.e;
    out.symmetric = is_numerically_symmetric(out.matrix);
    return out;
}

StabilityReport make_report(std::string check, double lhs, double rhs, std::uint64_t seed,
                            int trials, std::string digest, std::string note) {
    StabilityReport r;
    r.check = std::move(check);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.pass = lhs <= rhs * (1.0 + kPassSlack);
    r.seed = seed;
    r.trials = trials;
    r.inputs_digest = std::move(digest);
    r.note = std::move(note);
    return r;
}

namespace {

// Tracks the binding side of a two-sided sandwich over many trials and
// renders it as a single (lhs, rhs) pair with the smallest margin.
struct WorstPair {
    double lhs = 0.0;
    double rhs = 1.0;
    bool set = false;

    void offer(double candidate_lhs, double candidate_rhs) {
        if (!set || candidate_rhs - candidate_lhs < rhs - lhs) {
            lhs = candidate_lhs;
            rhs = candidate_rhs;
            set = true;
        }
    }
};

} // namespace

StabilityReport check_frame(const FilterBank& bank, int trials, std::uint64_t seed) {
    if (!bank.materialized())
        throw std::invalid_argument("check_frame: bank is not materialized");
    const int n = bank.dim();
    const double lo = bank.frame_lower * bank.frame_lower * (1.0 - kFrameSlack);
    const double hi = bank.frame_upper * bank.frame_upper * (1.0 + kFrameSlack);
    WorstPair worst;
    for (int t = 0; t < trials; ++t) {
        auto rng = make_engine(seed, static_cast<std::uint64_t>(t));
        Eigen::VectorXd x = gaussian_matrix(n, 1, rng);
        x /= x.norm();
        double energy = 0.0;
        for (const auto& f : bank.filters) energy += (f * x).squaredNorm();
        worst.offer(energy, hi);
        worst.offer(lo, energy);
    }
    std::ostringstream digest;
    digest << wavelet_family_name(bank.family) << " J=" << bank.scales << " n=" << n
           << " A=" << bank.frame_lower << " B=" << bank.frame_upper;
    return make_report("frame", worst.lhs, worst.rhs, seed, trials, digest.str());
}

StabilityReport check_tightness(const FilterBank& bank, double tolerance) {
    const double dev =
        std::max(std::abs(bank.frame_lower - 1.0), std::abs(bank.frame_upper - 1.0));
    std::ostringstream digest;
    digest << wavelet_family_name(bank.family) << " J=" << bank.scales << " n=" << bank.dim()
           << " A=" << bank.frame_lower << " B=" << bank.frame_upper;
    return make_report("tightness", dev, tolerance, 0, 1, digest.str());
}

StabilityReport verify_lemma1(const FilterBank& spatial_bank, const FilterBank& temporal_bank,
                              int trials, std::uint64_t seed) {
    if (!spatial_bank.materialized() || !temporal_bank.materialized())
        throw std::invalid_argument("verify_lemma1: banks must be materialized");
    const int n = spatial_bank.dim();
    const int t = temporal_bank.dim();
    const double lo = spatial_bank.frame_lower * spatial_bank.frame_lower *
                      temporal_bank.frame_lower * temporal_bank.frame_lower;
    const double hi = spatial_bank.frame_upper * spatial_bank.frame_upper *
                      temporal_bank.frame_upper * temporal_bank.frame_upper;

    WorstPair worst;
    for (int trial = 0; trial < trials; ++trial) {
        auto rng = make_engine(seed, static_cast<std::uint64_t>(trial));
        Eigen::MatrixXd z = gaussian_matrix(n, t, rng);
        const double z_sq = z.squaredNorm();
        double energy = 0.0;
        for (const auto& h : spatial_bank.filters) {
            const Eigen::MatrixXd hz = h * z;
            for (const auto& g : temporal_bank.filters) energy += (hz * g.transpose()).squaredNorm();
        }
        worst.offer(energy / z_sq, hi * (1.0 + kFrameSlack));
        worst.offer(lo * (1.0 - kFrameSlack), energy / z_sq);
    }
    std::ostringstream digest;
    digest << "spatial=" << wavelet_family_name(spatial_bank.family) << " J=" << spatial_bank.scales
           << " n=" << n << "; temporal=" << wavelet_family_name(temporal_bank.family)
           << " J=" << temporal_bank.scales << " T=" << t;
    return make_report("lemma1", worst.lhs, worst.rhs, seed, trials, digest.str());
}

StabilityReport check_theorem1(const ScatteringConfig& cfg, const FilterBank& spatial_bank,
                               const FilterBank& temporal_bank, const StSignal& x,
                               const std::vector<Eigen::MatrixXd>& delta) {
    if (cfg.pooling != Pooling::SpatialAvg)
        throw std::invalid_argument("check_theorem1: bound is wired to spatial-average pooling");
    if (cfg.mode != ScatteringMode::Separable)
        throw std::invalid_argument("check_theorem1: separable mode required");
    if (static_cast<int>(delta.size()) != x.channels)
        throw std::invalid_argument("check_theorem1: delta channel mismatch");

    StSignal perturbed = x;
    for (int c = 0; c < x.channels; ++c) perturbed.data[c] += delta[c];

    const FeatureMap clean = scatter_separable(x, cfg, spatial_bank, temporal_bank);
    const FeatureMap noisy = scatter_separable(perturbed, cfg, spatial_bank, temporal_bank);

    const double nodes = static_cast<double>(tree_node_count(cfg.scales_per_node(), cfg.layers));
    const double lhs = (clean.flattened() - noisy.flattened()).norm() /
                       std::sqrt(static_cast<double>(x.n_time) * nodes);

    const double b = spatial_bank.frame_upper * temporal_bank.frame_upper;
    const double j = static_cast<double>(cfg.scales_per_node());
    const double rhs = (1.0 / std::sqrt(static_cast<double>(x.n_spatial) * x.n_time)) *
                       std::sqrt(sum_powers(b * b, cfg.layers) / sum_powers(j, cfg.layers)) *
                       delta_norm(delta);

    std::ostringstream digest;
    digest << "L=" << cfg.layers << " Js=" << cfg.spatial_scales << " Jt=" << cfg.temporal_scales
           << " N=" << x.n_spatial << " T=" << x.n_time << " C=" << x.channels << " B=" << b;
    return make_report("theorem1", lhs, rhs, 0, 1, digest.str());
}

StabilityReport certify_theorem1(const ScatteringConfig& cfg, const FilterBank& spatial_bank,
                                 const FilterBank& temporal_bank, const StSignal& x,
                                 const std::vector<double>& snr_db_levels, int trials_per_level,
                                 std::uint64_t seed) {
    WorstPair worst;
    std::string digest;
    bool all_pass = true;
    int total = 0;
    for (std::size_t level = 0; level < snr_db_levels.size(); ++level) {
        SignalPerturbation p;
        p.target_snr_db = snr_db_levels[level];
        for (int trial = 0; trial < trials_per_level; ++trial, ++total) {
            auto rng = make_engine(seed, level * static_cast<std::uint64_t>(trials_per_level) +
                                             static_cast<std::uint64_t>(trial));
            const auto delta = realize_delta(p, x, rng);
            StabilityReport r = check_theorem1(cfg, spatial_bank, temporal_bank, x, delta);
            all_pass = all_pass && r.pass;
            worst.offer(r.lhs, r.rhs);
            digest = r.inputs_digest;
        }
    }
    StabilityReport out = make_report("theorem1", worst.lhs, worst.rhs, seed, total, digest);
    out.pass = out.pass && all_pass;
    return out;
}

StabilityReport check_theorem2(const ScatteringConfig& cfg, const FilterBank& spatial_bank,
                               const FilterBank& temporal_bank, const StSignal& x,
                               const StructurePerturbation& p) {
    if (cfg.pooling != Pooling::SpatialAvg)
        throw std::invalid_argument("check_theorem2: bound is wired to spatial-average pooling");
    if (cfg.mode != ScatteringMode::Separable)
        throw std::invalid_argument("check_theorem2: separable mode required");

    std::ostringstream digest;
    digest << "L=" << cfg.layers << " Js=" << cfg.spatial_scales << " Jt=" << cfg.temporal_scales
           << " N=" << x.n_spatial << " T=" << x.n_time << " eps=" << p.epsilon;

    if (!spatial_bank.lipschitz_c)
        return make_report("theorem2", 0.0, 0.0, 0, 1, digest.str(),
                           "not certifiable: spatial bank has no integral-Lipschitz constant");
    const double b = spatial_bank.frame_upper * temporal_bank.frame_upper;
    if (!(b > 1e-12))
        return make_report("theorem2", 0.0, 0.0, 0, 1, digest.str(),
                           "not certifiable: frame upper bound is numerically zero");
    double d_const;
    if (temporal_bank.spectral_d) {
        d_const = *temporal_bank.spectral_d;
    } else {
        d_const = estimate_kernel_constants(temporal_bank).spectral_d;
    }

    const ShiftMatrix original = shift_from_bank(spatial_bank);
    const ShiftMatrix perturbed = perturb_structure(original, p);
    const FilterBank perturbed_bank = rebuild_on_shift(spatial_bank, perturbed);

    const FeatureMap clean = scatter_separable(x, cfg, spatial_bank, temporal_bank);
    const FeatureMap moved = scatter_separable(x, cfg, perturbed_bank, temporal_bank);

    const double nodes = static_cast<double>(tree_node_count(cfg.scales_per_node(), cfg.layers));
    const double lhs = (clean.flattened() - moved.flattened()).norm() /
                       std::sqrt(static_cast<double>(x.n_time) * nodes);

    const double j = static_cast<double>(cfg.scales_per_node());
    double weighted = 0.0, term = 1.0;
    for (int l = 0; l < cfg.layers; ++l) {
        weighted += static_cast<double>(l) * l * term;
        term *= b * b * j;
    }
    const double rhs = (p.epsilon * *spatial_bank.lipschitz_c * d_const /
                        (b * std::sqrt(static_cast<double>(x.n_spatial) * x.n_time))) *
                       std::sqrt(weighted / sum_powers(j, cfg.layers)) * signal_norm(x);

    digest << " C=" << *spatial_bank.lipschitz_c << " D=" << d_const << " B=" << b;
    return make_report("theorem2", lhs, rhs, 0, 1, digest.str());
}

StabilityReport certify_theorem2(const ScatteringConfig& cfg, const FilterBank& spatial_bank,
                                 const FilterBank& temporal_bank, const StSignal& x,
                                 const std::vector<double>& epsilons, int trials_per_eps,
                                 std::uint64_t seed) {
    WorstPair worst;
    std::string digest;
    std::string note;
    bool all_pass = true;
    int total = 0;
    for (std::size_t level = 0; level < epsilons.size(); ++level) {
        for (int trial = 0; trial < trials_per_eps; ++trial, ++total) {
            auto rng = make_engine(seed, level * static_cast<std::uint64_t>(trials_per_eps) +
                                             static_cast<std::uint64_t>(trial));
            StructurePerturbation p =
                epsilons[level] > 0.0
                    ? random_diagonal_perturbation(x.n_spatial, epsilons[level], rng)
                    : make_structure_perturbation(
                          Eigen::MatrixXd::Zero(x.n_spatial, x.n_spatial), 0.0);
            StabilityReport r = check_theorem2(cfg, spatial_bank, temporal_bank, x, p);
            all_pass = all_pass && r.pass;
            worst.offer(r.lhs, r.rhs);
            digest = r.inputs_digest;
            if (!r.note.empty()) note = r.note;
        }
    }
    StabilityReport out = make_report("theorem2", worst.lhs, worst.rhs, seed, total, digest, note);
    out.pass = out.pass && all_pass;
    return out;
}

bool is_permutation_matrix(const Eigen::MatrixXd& p) {
    if (p.rows() != p.cols()) return false;
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        int row_ones = 0, col_ones = 0;
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            if (p(i, j) != 0.0 && p(i, j) != 1.0) return false;
            if (p(j, i) != 0.0 && p(j, i) != 1.0) return false;
            row_ones += p(i, j) == 1.0;
            col_ones += p(j, i) == 1.0;
        }
        if (row_ones != 1 || col_ones != 1) return false;
    }
    return true;
}

Eigen::MatrixXd random_permutation(int n, std::mt19937_64& rng) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) p(i, order[static_cast<std::size_t>(i)]) = 1.0;
    return p;
}

StabilityReport check_permutation_invariance(const ScatteringConfig& cfg,
                                             const FilterBank& spatial_bank,
                                             const FilterBank& temporal_bank, const StSignal& x,
                                             const Eigen::MatrixXd& p, double tolerance) {
    if (!is_permutation_matrix(p))
        throw std::invalid_argument("check_permutation_invariance: P is not a permutation matrix");
    if (cfg.pooling != Pooling::SpatialAvg)
        throw std::invalid_argument(
            "check_permutation_invariance: pooled features are permutation-free only under "
            "spatial averaging");

    ShiftMatrix permuted = shift_from_bank(spatial_bank);
    permuted.matrix = p.transpose() * permuted.matrix * p;
    permuted.symmetric = is_numerically_symmetric(permuted.matrix);
    const FilterBank permuted_bank = rebuild_on_shift(spatial_bank, permuted);

    StSignal relabeled = x;
    for (auto& z : relabeled.data) z = p.transpose() * z;

    const FeatureMap original = scatter_separable(x, cfg, spatial_bank, temporal_bank);
    const FeatureMap moved = scatter_separable(relabeled, cfg, permuted_bank, temporal_bank);
    const double dev = (original.flattened() - moved.flattened()).cwiseAbs().maxCoeff();

    std::ostringstream digest;
    digest << "N=" << x.n_spatial << " T=" << x.n_time << " L=" << cfg.layers
           << " family=" << wavelet_family_name(spatial_bank.family);
    return make_report("permutation", dev, tolerance, 0, 1, digest.str());
}

StabilityReport certify_permutation_invariance(const ScatteringConfig& cfg,
                                               const FilterBank& spatial_bank,
                                               const FilterBank& temporal_bank,
                                               const StSignal& x, int num_permutations,
                                               std::uint64_t seed, double tolerance) {
    double worst = 0.0;
    std::string digest;
    for (int k = 0; k < num_permutations; ++k) {
        auto rng = make_engine(seed, static_cast<std::uint64_t>(k));
        Eigen::MatrixXd p = random_permutation(x.n_spatial, rng);
        StabilityReport r =
            check_permutation_invariance(cfg, spatial_bank, temporal_bank, x, p, tolerance);
        worst = std::max(worst, r.lhs);
        digest = r.inputs_digest;
    }
    return make_report("permutation", worst, tolerance, seed, num_permutations, digest);
}

double wavelet_pair_deviation(const FilterBank& on_original, const FilterBank& on_perturbed,
                              const FilterBank& temporal_bank) {
    if (!on_original.materialized() || !on_perturbed.materialized() ||
        !temporal_bank.materialized())
        throw std::invalid_argument("wavelet_pair_deviation: banks must be materialized");
    if (on_original.scales != on_perturbed.scales)
        throw std::invalid_argument("wavelet_pair_deviation: scale mismatch");

    // ||(H - H_hat) (x) G||_2 = ||H - H_hat||_2 ||G||_2.
    double max_h = 0.0;
    for (int j = 0; j < on_original.scales; ++j)
        max_h = std::max(max_h, spectral_norm(on_original.filters[j] - on_perturbed.filters[j]));
    double max_g = 0.0;
    for (const auto& g : temporal_bank.filters) max_g = std::max(max_g, spectral_norm(g));
    return max_h * max_g;
}

StabilityReport check_wavelet_stability(const FilterBank& on_original,
                                        const FilterBank& on_perturbed,
                                        const FilterBank& temporal_bank, double epsilon,
                                        double lipschitz_c, double spectral_d, double kappa) {
    const double dev = wavelet_pair_deviation(on_original, on_perturbed, temporal_bank);
    const double bound = epsilon * lipschitz_c * spectral_d + kappa * epsilon * epsilon;
    std::ostringstream digest;
    digest << "eps=" << epsilon << " C=" << lipschitz_c << " D=" << spectral_d
           << " kappa=" << kappa;
    return make_report("wavelet_stability", dev, bound, 0, 1, digest.str());
}

StabilityReport certify_wavelet_stability(const ShiftMatrix& spatial_shift,
                                          const FilterBank& spatial_bank,
                                          const FilterBank& temporal_bank,
                                          std::vector<double> epsilons, int trials,
                                          std::uint64_t seed) {
    if (epsilons.empty())
        throw std::invalid_argument("certify_wavelet_stability: need at least one epsilon");
    std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
    const double eps_min = epsilons.back();

    if (!spatial_bank.lipschitz_c)
        return make_report("wavelet_stability", 0.0, 0.0, seed, 0, "",
                           "not certifiable: spatial bank has no integral-Lipschitz constant");
    const double c_const = *spatial_bank.lipschitz_c;
    const double d_const = temporal_bank.spectral_d
                               ? *temporal_bank.spectral_d
                               : estimate_kernel_constants(temporal_bank).spectral_d;

    const int n = spatial_shift.dim();
    WorstPair worst;
    bool all_pass = true;
    for (int trial = 0; trial < trials; ++trial) {
        auto rng = make_engine(seed, static_cast<std::uint64_t>(trial));
        // Fixed direction across the sweep: entries shrink proportionally
        // with eps, so halving eps isolates the quadratic remainder.
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        Eigen::VectorXd direction(n);
        for (int i = 0; i < n; ++i) direction(i) = sign * (1.0 - unit(rng) * eps_min);

        double kappa = 0.0;
        for (std::size_t k = 0; k < epsilons.size(); ++k) {
            const double eps = epsilons[k];
            Eigen::MatrixXd e = ((eps / 2.0) * direction).asDiagonal();
            StructurePerturbation p = make_structure_perturbation(std::move(e), eps);
            const ShiftMatrix perturbed = perturb_structure(spatial_shift, p);
            const FilterBank moved = rebuild_on_shift(spatial_bank, perturbed);
            if (k == 0) {
                const double dev = wavelet_pair_deviation(spatial_bank, moved, temporal_bank);
                kappa = std::max(0.0, (dev - eps * c_const * d_const) / (eps * eps));
            }
            StabilityReport r = check_wavelet_stability(spatial_bank, moved, temporal_bank, eps,
                                                        c_const, d_const, kappa);
            all_pass = all_pass && r.pass;
            worst.offer(r.lhs, r.rhs);
        }
    }
    std::ostringstream digest;
    digest << "family=" << wavelet_family_name(spatial_bank.family) << " n=" << n
           << " C=" << c_const << " D=" << d_const;
    StabilityReport out = make_report("wavelet_stability", worst.lhs, worst.rhs, seed,
                                      trials * static_cast<int>(epsilons.size()), digest.str());
    out.pass = out.pass && all_pass;
    return out;
}

StabilityReport check_spectral_equivalence(int max_n, int max_t, int trials, std::uint64_t seed,
                                           double tol_joint, double tol_separable) {
    double worst_joint = 0.0;
    double worst_separable = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        auto rng = make_engine(seed, static_cast<std::uint64_t>(trial));
        std::uniform_int_distribution<int> pick_n(2, max_n), pick_t(2, max_t);
        std::uniform_real_distribution<double> weight(0.5, 1.5), coin(0.0, 1.0);
        const int n = pick_n(rng), t = pick_t(rng);

        auto random_graph = [&](int size) {
            Graph g;
            g.n = size;
            g.adjacency = Eigen::MatrixXd::Zero(size, size);
            for (int i = 0; i < size; ++i)
                for (int j = i + 1; j < size; ++j)
                    if (coin(rng) < 0.6) {
                        const double w = weight(rng);
                        g.adjacency(i, j) = w;
                        g.adjacency(j, i) = w;
                    }
            return g;
        };
        const ShiftMatrix ss = eigendecompose(make_shift(random_graph(n), ShiftKind::Adjacency));
        const ShiftMatrix st = eigendecompose(make_shift(random_graph(t), ShiftKind::Adjacency));

        PolynomialFilter poly;
        poly.coeffs = {weight(rng), weight(rng), weight(rng)};
        Eigen::VectorXd x = gaussian_matrix(n * t, 1, rng);
        x /= x.norm();

        const JointFourierBasis basis = joint_fourier_basis(ss, st);
        for (ProductKind kind :
             {ProductKind::Kronecker, ProductKind::Cartesian, ProductKind::Strong}) {
            const ShiftMatrix joint = product_shift(ss, st, kind);
            const Eigen::VectorXd via_horner = apply_joint(x, poly, joint.matrix);

            Eigen::VectorXd response(basis.pairs.size());
            for (std::size_t i = 0; i < basis.pairs.size(); ++i) {
                const double lambda =
                    joint_eigenvalue(kind, basis.pairs[i].first, basis.pairs[i].second);
                double acc = 0.0;
                for (std::size_t k = poly.coeffs.size(); k-- > 0;)
                    acc = acc * lambda + poly.coeffs[k];
                response(static_cast<Eigen::Index>(i)) = acc;
            }
            const Eigen::VectorXd via_spectrum =
                basis.vectors * response.asDiagonal() * basis.vectors.transpose() * x;
            worst_joint =
                std::max(worst_joint, (via_horner - via_spectrum).cwiseAbs().maxCoeff());
        }

        // Separable route against the assembled Kronecker operator.
        Eigen::MatrixXd h = gaussian_matrix(n, n, rng);
        Eigen::MatrixXd g = gaussian_matrix(t, t, rng);
        Eigen::MatrixXd z = gaussian_matrix(n, t, rng);
        const Eigen::VectorXd via_matrices = flatten(apply_separable(z, h, g));
        const Eigen::VectorXd via_kron = kronecker(h, g) * flatten(z);
        worst_separable =
            std::max(worst_separable, (via_matrices - via_kron).cwiseAbs().maxCoeff());
    }

    const double lhs = std::max(worst_joint / tol_joint, worst_separable / tol_separable);
    std::ostringstream digest;
    digest << "max_n=" << max_n << " max_t=" << max_t << " joint_dev=" << worst_joint
           << " separable_dev=" << worst_separable;
    return make_report("spectral_equivalence", lhs, 1.0, seed, trials, digest.str());
}

StSignal random_signal(int channels, int n, int t, std::mt19937_64& rng) {
    std::vector<Eigen::MatrixXd> data;
    data.reserve(static_cast<std::size_t>(channels));
    for (int c = 0; c < channels; ++c) data.push_back(gaussian_matrix(n, t, rng));
    return make_signal(std::move(data));
}

} // namespace stgst
