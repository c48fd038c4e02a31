#pragma once

#include "stgst/scattering.hpp"
#include "stgst/shift.hpp"
#include "stgst/signal.hpp"
#include "stgst/wavelets.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace stgst {

/// Additive signal perturbation: either an explicit per-channel delta or a
/// target SNR in dB (delta drawn i.i.d. Gaussian, then rescaled so
/// 10 log10(||X||^2 / ||Delta||^2) hits the target exactly).
struct SignalPerturbation {
    std::vector<Eigen::MatrixXd> delta; // empty when target_snr_db drives the draw
    std::optional<double> target_snr_db;
};

// Realizes the perturbation for signal x; rng is consumed only in SNR mode.
std::vector<Eigen::MatrixXd> realize_delta(const SignalPerturbation& p, const StSignal& x,
                                           std::mt19937_64& rng);

double delta_norm(const std::vector<Eigen::MatrixXd>& delta);
double snr_db(const StSignal& x, const std::vector<Eigen::MatrixXd>& delta);

/// Relative structure perturbation S -> S + E^T S + S E. The eigenvalues
/// m_i of E, ordered by magnitude, must satisfy |m_N| <= eps/2 and
/// |m_i / m_N - 1| <= eps; violations are rejected at construction.
/// E = 0 is always valid (including eps = 0).
struct StructurePerturbation {
    Eigen::MatrixXd e;
    double epsilon = 0.0;
};

StructurePerturbation make_structure_perturbation(Eigen::MatrixXd e, double epsilon);

// Random diagonal E with |m_N| = eps/2 and all magnitude ratios within the
// allowed band; diagonal placement and overall sign are randomized.
StructurePerturbation random_diagonal_perturbation(int n, double epsilon, std::mt19937_64& rng);

ShiftMatrix perturb_structure(const ShiftMatrix& ss, const StructurePerturbation& p);

struct StabilityReport {
    std::string check;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0; // rhs - lhs
    bool pass = false;
    std::uint64_t seed = 0;
    int trials = 0;
    std::string inputs_digest;
    std::string note; // set when a check is reported not-certifiable
};

// pass = lhs <= rhs * (1 + 1e-9); margin = rhs - lhs.
StabilityReport make_report(std::string check, double lhs, double rhs, std::uint64_t seed,
                            int trials, std::string digest, std::string note = {});

// Frame sandwich of one bank on random signals: the summed filter energies
// must stay inside [A^2 (1-1e-6), B^2 (1+1e-6)] per unit input energy.
StabilityReport check_frame(const FilterBank& bank, int trials, std::uint64_t seed);

// Tight-frame check: lhs = max(|A-1|, |B-1|) against rhs = tolerance.
StabilityReport check_tightness(const FilterBank& bank, double tolerance = 1e-5);

// Separable frame sandwich: for random Z the double sum over both banks of
// ||H Z G^T||^2 lies within [A1^2 A2^2, B1^2 B2^2] * ||Z||^2 up to 1e-6
// relative slack.
StabilityReport verify_lemma1(const FilterBank& spatial_bank, const FilterBank& temporal_bank,
                              int trials, std::uint64_t seed);

// Signal-perturbation bound for one realized delta: normalized feature
// deviation against (1/sqrt(NT)) sqrt(sum B^(2l) / sum J^l) ||Delta|| with
// measured B = B1*B2. Requires spatial-average pooling.
StabilityReport check_theorem1(const ScatteringConfig& cfg, const FilterBank& spatial_bank,
                               const FilterBank& temporal_bank, const StSignal& x,
                               const std::vector<Eigen::MatrixXd>& delta);

// Monte Carlo driver over SNR levels; reports the worst-margin trial.
StabilityReport certify_theorem1(const ScatteringConfig& cfg, const FilterBank& spatial_bank,
                                 const FilterBank& temporal_bank, const StSignal& x,
                                 const std::vector<double>& snr_db_levels, int trials_per_level,
                                 std::uint64_t seed);

// Structure-perturbation bound for one E: rebuilds the spatial bank on the
// perturbed shift (same frozen kernels) and compares the normalized feature
// deviation against eps*C*D/(B sqrt(NT)) * sqrt(sum l^2 (B^2 J)^l / sum J^l)
// * ||X||. Reports not-certifiable instead of failing when the spatial bank
// has no integral-Lipschitz constant or a vanishing frame bound.
StabilityReport check_theorem2(const ScatteringConfig& cfg, const FilterBank& spatial_bank,
                               const FilterBank& temporal_bank, const StSignal& x,
                               const StructurePerturbation& p);

StabilityReport certify_theorem2(const ScatteringConfig& cfg, const FilterBank& spatial_bank,
                                 const FilterBank& temporal_bank, const StSignal& x,
                                 const std::vector<double>& epsilons, int trials_per_eps,
                                 std::uint64_t seed);

bool is_permutation_matrix(const Eigen::MatrixXd& p);
Eigen::MatrixXd random_permutation(int n, std::mt19937_64& rng);

// Node-relabeling invariance: features of (S, X) match features of
// (P^T S P, P^T X) with banks rebuilt on the permuted shift. lhs is the max
// per-entry deviation, rhs the tolerance (1e-10).
StabilityReport check_permutation_invariance(const ScatteringConfig& cfg,
                                             const FilterBank& spatial_bank,
                                             const FilterBank& temporal_bank, const StSignal& x,
                                             const Eigen::MatrixXd& p,
                                             double tolerance = 1e-10);

StabilityReport certify_permutation_invariance(const ScatteringConfig& cfg,
                                               const FilterBank& spatial_bank,
                                               const FilterBank& temporal_bank,
                                               const StSignal& x, int num_permutations,
                                               std::uint64_t seed, double tolerance = 1e-10);

// Largest deviation over filter pairs ||(H_j1(S) - H_j1(S_hat)) (x) G_j2||_2,
// computed via the Kronecker norm identity.
double wavelet_pair_deviation(const FilterBank& on_original, const FilterBank& on_perturbed,
                              const FilterBank& temporal_bank);

// Wavelet stability at a single eps: deviation <= eps*C*D + kappa*eps^2.
StabilityReport check_wavelet_stability(const FilterBank& on_original,
                                        const FilterBank& on_perturbed,
                                        const FilterBank& temporal_bank, double epsilon,
                                        double lipschitz_c, double spectral_d,
                                        double kappa = 0.0);

// Sweep over descending eps with a fixed perturbation direction: the
// quadratic coefficient kappa is fitted at the largest eps, then the bound
// must hold at every smaller eps. Repeats over random directions.
StabilityReport certify_wavelet_stability(const ShiftMatrix& spatial_shift,
                                          const FilterBank& spatial_bank,
                                          const FilterBank& temporal_bank,
                                          std::vector<double> epsilons, int trials,
                                          std::uint64_t seed);

// Cross-checks the two filtering routes on random small graphs and all
// three products: Horner application of a joint polynomial against the
// spectral form through the shared Fourier basis (tol_joint), and separable
// filtering against the assembled Kronecker operator (tol_separable).
StabilityReport check_spectral_equivalence(int max_n, int max_t, int trials, std::uint64_t seed,
                                           double tol_joint = 1e-8,
                                           double tol_separable = 1e-10);

// Deterministic Gaussian test signal.
StSignal random_signal(int channels, int n, int t, std::mt19937_64& rng);

} // namespace stgst
