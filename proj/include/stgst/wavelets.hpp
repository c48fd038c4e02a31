#pragma once

#include "stgst/shift.hpp"

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stgst {

enum class WaveletFamily { Geometric, MonicCubic, Itersine, CustomPolynomial };

std::string wavelet_family_name(WaveletFamily family);
WaveletFamily parse_wavelet_family(const std::string& name);

/// Scalar spectral response of one filter, defined on the shift's spectrum.
/// `derivative` is the analytic d/dlambda when available; otherwise empty
/// and consumers fall back to central differences.
struct SpectralKernel {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    double support_lo = 0.0;
    double support_hi = 1.0;
};

/// Polynomial filter h(S) = sum_k coeffs[k] S^k.
struct PolynomialFilter {
    std::vector<double> coeffs;
};

void validate_polynomial(const PolynomialFilter& p);

/// A bank of J filters over one shift. Filters are materialized as dense
/// operators when the shift is small enough; polynomial banks over large
/// joint shifts keep only the coefficients and apply via Horner.
struct FilterBank {
    WaveletFamily family = WaveletFamily::CustomPolynomial;
    int scales = 0;                        // J
    std::vector<Eigen::MatrixXd> filters;  // materialized operators (may be empty)
    std::vector<PolynomialFilter> polys;   // set for polynomial banks
    std::vector<SpectralKernel> kernels;   // empty when no scalar kernel exists
    Eigen::MatrixXd shift;                 // the shift the bank was built on
    ShiftKind shift_kind = ShiftKind::Adjacency;
    bool shift_symmetric = false;
    double frame_lower = 0.0;              // A
    double frame_upper = 0.0;              // B
    std::optional<double> lipschitz_c;     // max over filters of |lambda h'(lambda)|
    std::optional<double> spectral_d;      // max over filters of |h(lambda)|

    int dim() const { return static_cast<int>(shift.rows()); }
    bool materialized() const { return !filters.empty(); }
};

// Mother kernels, exposed for direct checks.
double monic_cubic_kernel(double x);
double monic_cubic_kernel_derivative(double x);
// sin(pi/2 cos^2(pi x)) on [-1/2, 1/2], zero outside. Half-overlapping
// translates of this window square-sum to one.
double itersine_window(double x);
double itersine_window_derivative(double x);

// Diffusion wavelets S^(2^(j-1)) - S^(2^j) for j = 1..J, computed by
// repeated squaring. Expects a lazy random walk shift (warns otherwise).
FilterBank build_geometric_bank(const ShiftMatrix& s, int num_scales);

struct SpectralBankOptions {
    // Monic cubic scale placement: log-spaced t_j with t_1 * range = lo and
    // t_J * range = hi over the shifted spectrum.
    double monic_cubic_lo = 2.0;
    double monic_cubic_hi = 40.0;
};

// Spectral bank (MonicCubic or Itersine) materialized through the shift's
// eigendecomposition. Requires a symmetric shift with eig populated and
// at least two scales.
FilterBank build_spectral_bank(const ShiftMatrix& s, WaveletFamily family, int num_scales,
                               const SpectralBankOptions& options = {});

// Bank from explicit polynomial coefficients. Filters are materialized when
// dim <= materialize_limit; larger banks stay coefficient-only and must be
// applied via apply_joint.
FilterBank build_custom_poly_bank(const ShiftMatrix& s, std::vector<PolynomialFilter> polys,
                                  int materialize_limit = 300);

// Rebuilds the same bank (same family, scales, and frozen kernel functions)
// on a different shift of equal dimension. Spectral banks re-evaluate their
// original kernels on the new spectrum.
FilterBank rebuild_on_shift(const FilterBank& bank, const ShiftMatrix& s);

// Separable filtering: H * X * G^T.
Eigen::MatrixXd apply_separable(const Eigen::MatrixXd& x, const Eigen::MatrixXd& h,
                                const Eigen::MatrixXd& g);

// Joint filtering sum_k h_k S^k x via Horner iteration; S^k is never formed.
Eigen::VectorXd apply_joint(const Eigen::VectorXd& x, const PolynomialFilter& filter,
                            const Eigen::MatrixXd& shift);

// Applies filter j of a joint bank to a flattened signal, using the
// materialized operator when present and Horner otherwise.
Eigen::VectorXd apply_bank_joint(const FilterBank& bank, int j, const Eigen::VectorXd& x);

// Frame constants from the Gram sum: A^2 = lambda_min(sum_j Hj^T Hj),
// B^2 = lambda_max. Exact for any materialized bank, including asymmetric
// diffusion filters.
std::pair<double, double> estimate_frame_bounds(const FilterBank& bank);

struct KernelConstants {
    std::optional<double> lipschitz_c; // unavailable without scalar kernels
    double spectral_d = 0.0;
};

// Grid estimates of C = max |lambda h'(lambda)| and D = max |h(lambda)| over
// each kernel's support. Banks without scalar kernels (diffusion over an
// asymmetric walk) get the operator-norm fallback D = max_j ||H_j||_2 with
// C unavailable. grid_size must be >= 100.
KernelConstants estimate_kernel_constants(const FilterBank& bank, int grid_size = 1024);

// Coefficient matrices comparing an order-3 joint strong-product filter h
// with a separable pair (h, g): entry (i, j) is the coefficient of
// Lambda_s^i (x) Lambda_t^j. The joint matrix is symmetric; the separable
// one is rank one.
std::pair<Eigen::Matrix3d, Eigen::Matrix3d> coefficient_matrices(const PolynomialFilter& h,
                                                                 const PolynomialFilter& g);

double spectral_norm(const Eigen::MatrixXd& m);

} // namespace stgst
