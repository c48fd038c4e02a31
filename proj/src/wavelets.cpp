#include "stgst/wavelets.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>

namespace stgst {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegenerateSpectrum = 1e-12;

Eigen::MatrixXd materialize_spectral(const EigenDecomposition& eig, const SpectralKernel& kernel) {
    Eigen::VectorXd response(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
        response(i) = kernel.value(eig.values(i));
    return eig.vectors * response.asDiagonal() * eig.vectors.transpose();
}

void check_filters_finite(const FilterBank& bank) {
    for (const auto& f : bank.filters)
        if (!f.allFinite())
            throw std::runtime_error("filter bank: materialized filter has non-finite entries");
}

void attach_frame_bounds(FilterBank& bank) {
    if (!bank.materialized()) return;
    auto [a, b] = estimate_frame_bounds(bank);
    bank.frame_lower = a;
    bank.frame_upper = b;
}

void attach_kernel_constants(FilterBank& bank) {
    if (bank.kernels.empty()) return;
    KernelConstants kc = estimate_kernel_constants(bank);
    bank.lipschitz_c = kc.lipschitz_c;
    bank.spectral_d = kc.spectral_d;
}

// Diffusion filters Q_j - Q_j^2 with Q_j = S^(2^(j-1)); exact telescoping
// sum_j H_j = S - S^(2^J) falls out of reusing the squared powers.
std::vector<Eigen::MatrixXd> geometric_filters(const Eigen::MatrixXd& s, int num_scales) {
    std::vector<Eigen::MatrixXd> filters;
    filters.reserve(static_cast<std::size_t>(num_scales));
    Eigen::MatrixXd power = s; // S^(2^(j-1))
    for (int j = 1; j <= num_scales; ++j) {
        Eigen::MatrixXd squared = power * power;
        filters.push_back(power - squared);
        power = std::move(squared);
    }
    return filters;
}

std::vector<SpectralKernel> geometric_kernels(int num_scales, double lo, double hi) {
    std::vector<SpectralKernel> kernels;
    kernels.reserve(static_cast<std::size_t>(num_scales));
    for (int j = 1; j <= num_scales; ++j) {
        const double p = std::pow(2.0, j - 1);
        SpectralKernel k;
        k.value = [p](double lambda) {
            return std::pow(lambda, p) - std::pow(lambda, 2.0 * p);
        };
        k.derivative = [p](double lambda) {
            return p * std::pow(lambda, p - 1.0) - 2.0 * p * std::pow(lambda, 2.0 * p - 1.0);
        };
        k.support_lo = lo;
        k.support_hi = hi;
        kernels.push_back(std::move(k));
    }
    return kernels;
}

std::vector<SpectralKernel> monic_cubic_kernels(double lambda_min, double lambda_max,
                                                int num_scales, const SpectralBankOptions& opt) {
    const double range = lambda_max - lambda_min;
    if (range < kDegenerateSpectrum)
        throw std::invalid_argument("monic cubic bank: spectrum is constant, no scale placement");
    const double t_first = opt.monic_cubic_lo / range;
    const double t_last = opt.monic_cubic_hi / range;
    std::vector<SpectralKernel> kernels;
    kernels.reserve(static_cast<std::size_t>(num_scales));
    for (int j = 0; j < num_scales; ++j) {
        const double frac = static_cast<double>(j) / (num_scales - 1);
        const double t = std::exp(std::log(t_first) + frac * (std::log(t_last) - std::log(t_first)));
        SpectralKernel k;
        k.value = [t, lambda_min](double lambda) {
            return monic_cubic_kernel(t * (lambda - lambda_min));
        };
        k.derivative = [t, lambda_min](double lambda) {
            return t * monic_cubic_kernel_derivative(t * (lambda - lambda_min));
        };
        // The kernel has unbounded support, so the constant-estimation grid
        // covers the spectrum plus a 10% margin per side; by Weyl that holds
        // every eigenvalue of a relatively perturbed shift with eps <= 0.1.
        k.support_lo = lambda_min - 0.1 * range;
        k.support_hi = lambda_max + 0.1 * range;
        kernels.push_back(std::move(k));
    }
    return kernels;
}

// Uniform translates covering the spectrum mapped to [0, 1]. Internally the
// mapped value is rescaled to mu in [0, (J-1)/2] so adjacent windows overlap
// at half width, which makes the squared responses sum to one exactly.
std::vector<SpectralKernel> itersine_kernels(double lambda_min, double lambda_max,
                                             int num_scales) {
    const double range = lambda_max - lambda_min;
    const double scale = range >= kDegenerateSpectrum
                             ? (num_scales - 1) / (2.0 * range)
                             : 0.0;
    std::vector<SpectralKernel> kernels;
    kernels.reserve(static_cast<std::size_t>(num_scales));
    for (int j = 0; j < num_scales; ++j) {
        const double center = j / 2.0;
        SpectralKernel k;
        k.value = [scale, lambda_min, center](double lambda) {
            return itersine_window((lambda - lambda_min) * scale - center);
        };
        k.derivative = [scale, lambda_min, center](double lambda) {
            return scale * itersine_window_derivative((lambda - lambda_min) * scale - center);
        };
        // Exact window preimage. End windows reach past the built spectrum,
        // and |lambda h'(lambda)| there still counts toward the constants.
        if (scale > 0.0) {
            k.support_lo = lambda_min + (center - 0.5) / scale;
            k.support_hi = lambda_min + (center + 0.5) / scale;
        } else {
            k.support_lo = lambda_min;
            k.support_hi = lambda_max;
        }
        kernels.push_back(std::move(k));
    }
    return kernels;
}

std::vector<SpectralKernel> polynomial_kernels(const std::vector<PolynomialFilter>& polys,
                                               double lo, double hi) {
    std::vector<SpectralKernel> kernels;
    kernels.reserve(polys.size());
    for (const auto& p : polys) {
        SpectralKernel k;
        const std::vector<double> c = p.coeffs;
        k.value = [c](double lambda) {
            double acc = 0.0;
            for (std::size_t i = c.size(); i-- > 0;) acc = acc * lambda + c[i];
            return acc;
        };
        k.derivative = [c](double lambda) {
            double acc = 0.0;
            for (std::size_t i = c.size(); i-- > 1;)
                acc = acc * lambda + static_cast<double>(i) * c[i];
            return acc;
        };
        k.support_lo = lo;
        k.support_hi = hi;
        kernels.push_back(std::move(k));
    }
    return kernels;
}

} // namespace

std::string wavelet_family_name(WaveletFamily family) {
    switch (family) {
        case WaveletFamily::Geometric: return "geometric";
        case WaveletFamily::MonicCubic: return "monic_cubic";
        case WaveletFamily::Itersine: return "itersine";
        case WaveletFamily::CustomPolynomial: return "custom_poly";
    }
    throw std::logic_error("unknown wavelet family");
}

WaveletFamily parse_wavelet_family(const std::string& name) {
    if (name == "geometric") return WaveletFamily::Geometric;
    if (name == "monic_cubic") return WaveletFamily::MonicCubic;
    if (name == "itersine") return WaveletFamily::Itersine;
    if (name == "custom_poly") return WaveletFamily::CustomPolynomial;
    throw std::invalid_argument("unknown wavelet family: " + name);
}

void validate_polynomial(const PolynomialFilter& p) {
    if (p.coeffs.empty())
        throw std::invalid_argument("polynomial filter: needs at least one coefficient");
    bool nonzero = false;
    for (double c : p.coeffs) nonzero = nonzero || c != 0.0;
    if (!nonzero)
        throw std::invalid_argument("polynomial filter: all coefficients are zero");
}

double monic_cubic_kernel(double x) {
    if (x < 1.0) return x;
    if (x <= 2.0) return -5.0 + 11.0 * x - 6.0 * x * x + x * x * x;
    return 2.0 / x;
}

double monic_cubic_kernel_derivative(double x) {
    if (x < 1.0) return 1.0;
    if (x <= 2.0) return 11.0 - 12.0 * x + 3.0 * x * x;
    return -2.0 / (x * x);
}

double itersine_window(double x) {
    if (x < -0.5 || x > 0.5) return 0.0;
    const double c = std::cos(kPi * x);
    return std::sin(0.5 * kPi * c * c);
}

double itersine_window_derivative(double x) {
    if (x < -0.5 || x > 0.5) return 0.0;
    const double c = std::cos(kPi * x);
    return -0.5 * kPi * kPi * std::cos(0.5 * kPi * c * c) * std::sin(2.0 * kPi * x);
}

FilterBank build_geometric_bank(const ShiftMatrix& s, int num_scales) {
    if (num_scales < 1)
        throw std::invalid_argument("geometric bank: need at least one scale");
    if (num_scales > 62)
        throw std::invalid_argument("geometric bank: scale exponent 2^J overflows");
    if (s.kind != ShiftKind::LazyRandomWalk)
        std::cerr << "stgst: warning: geometric bank built over a "
                  << shift_kind_name(s.kind) << " shift; lazy_random_walk is the usual choice\n";

    FilterBank bank;
    bank.family = WaveletFamily::Geometric;
    bank.scales = num_scales;
    bank.shift = s.matrix;
    bank.shift_kind = s.kind;
    bank.shift_symmetric = s.symmetric;
    bank.filters = geometric_filters(s.matrix, num_scales);
    if (s.eig)
        bank.kernels = geometric_kernels(num_scales, s.eig->values.minCoeff(),
                                         s.eig->values.maxCoeff());
    check_filters_finite(bank);
    attach_frame_bounds(bank);
    attach_kernel_constants(bank);
    return bank;
}

FilterBank build_spectral_bank(const ShiftMatrix& s, WaveletFamily family, int num_scales,
                               const SpectralBankOptions& options) {
    if (family != WaveletFamily::MonicCubic && family != WaveletFamily::Itersine)
        throw std::invalid_argument("spectral bank: family must be monic_cubic or itersine");
    if (!s.eig)
        throw std::invalid_argument("spectral bank: shift needs an eigendecomposition");
    if (num_scales < 2)
        throw std::invalid_argument("spectral bank: scale placement needs at least two scales");

    const double lambda_min = s.eig->values.minCoeff();
    const double lambda_max = s.eig->values.maxCoeff();

    FilterBank bank;
    bank.family = family;
    bank.scales = num_scales;
    bank.shift = s.matrix;
    bank.shift_kind = s.kind;
    bank.shift_symmetric = s.symmetric;
    bank.kernels = family == WaveletFamily::MonicCubic
                       ? monic_cubic_kernels(lambda_min, lambda_max, num_scales, options)
                       : itersine_kernels(lambda_min, lambda_max, num_scales);
    bank.filters.reserve(bank.kernels.size());
    for (const auto& k : bank.kernels) bank.filters.push_back(materialize_spectral(*s.eig, k));
    check_filters_finite(bank);
    attach_frame_bounds(bank);
    attach_kernel_constants(bank);
    return bank;
}

FilterBank build_custom_poly_bank(const ShiftMatrix& s, std::vector<PolynomialFilter> polys,
                                  int materialize_limit) {
    if (polys.empty())
        throw std::invalid_argument("custom bank: needs at least one polynomial");
    for (const auto& p : polys) validate_polynomial(p);

    FilterBank bank;
    bank.family = WaveletFamily::CustomPolynomial;
    bank.scales = static_cast<int>(polys.size());
    bank.shift = s.matrix;
    bank.shift_kind = s.kind;
    bank.shift_symmetric = s.symmetric;
    bank.polys = std::move(polys);
    if (s.eig)
        bank.kernels = polynomial_kernels(bank.polys, s.eig->values.minCoeff(),
                                          s.eig->values.maxCoeff());
    if (s.dim() <= materialize_limit) {
        bank.filters.reserve(bank.polys.size());
        for (const auto& p : bank.polys) {
            Eigen::MatrixXd f =
                Eigen::MatrixXd::Zero(s.dim(), s.dim());
            for (std::size_t i = p.coeffs.size(); i-- > 0;)
                f = s.matrix * f + p.coeffs[i] * Eigen::MatrixXd::Identity(s.dim(), s.dim());
            bank.filters.push_back(std::move(f));
        }
    }
    check_filters_finite(bank);
    attach_frame_bounds(bank);
    attach_kernel_constants(bank);
    return bank;
}

FilterBank rebuild_on_shift(const FilterBank& bank, const ShiftMatrix& s) {
    if (s.dim() != bank.dim())
        throw std::invalid_argument("rebuild_on_shift: dimension mismatch");

    FilterBank out;
    out.family = bank.family;
    out.scales = bank.scales;
    out.shift = s.matrix;
    out.shift_kind = s.kind;
    out.shift_symmetric = s.symmetric;
    out.polys = bank.polys;
    out.kernels = bank.kernels; // frozen kernel functions travel with the bank

    switch (bank.family) {
        case WaveletFamily::Geometric:
            out.filters = geometric_filters(s.matrix, bank.scales);
            break;
        case WaveletFamily::MonicCubic:
        case WaveletFamily::Itersine: {
            if (!s.symmetric)
                throw std::invalid_argument("rebuild_on_shift: spectral bank needs a symmetric shift");
            EigenDecomposition eig = s.eig ? *s.eig : symmetric_eig(s.matrix);
            out.filters.reserve(out.kernels.size());
            for (const auto& k : out.kernels) out.filters.push_back(materialize_spectral(eig, k));
            break;
        }
        case WaveletFamily::CustomPolynomial: {
            if (bank.materialized()) {
                out.filters.reserve(out.polys.size());
                for (const auto& p : out.polys) {
                    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(s.dim(), s.dim());
                    for (std::size_t i = p.coeffs.size(); i-- > 0;)
                        f = s.matrix * f + p.coeffs[i] * Eigen::MatrixXd::Identity(s.dim(), s.dim());
                    out.filters.push_back(std::move(f));
                }
            }
            break;
        }
    }
    check_filters_finite(out);
    attach_frame_bounds(out);
    attach_kernel_constants(out);
    return out;
}

Eigen::MatrixXd apply_separable(const Eigen::MatrixXd& x, const Eigen::MatrixXd& h,
                                const Eigen::MatrixXd& g) {
    if (h.cols() != x.rows() || g.cols() != x.cols())
        throw std::invalid_argument("apply_separable: shape mismatch");
    return h * x * g.transpose();
}

Eigen::VectorXd apply_joint(const Eigen::VectorXd& x, const PolynomialFilter& filter,
                            const Eigen::MatrixXd& shift) {
    validate_polynomial(filter);
    if (shift.rows() != shift.cols() || shift.cols() != x.size())
        throw std::invalid_argument("apply_joint: shape mismatch");
    const auto& c = filter.coeffs;
    Eigen::VectorXd acc = c.back() * x;
    for (std::size_t i = c.size() - 1; i-- > 0;) acc = shift * acc + c[i] * x;
    return acc;
}

Eigen::VectorXd apply_bank_joint(const FilterBank& bank, int j, const Eigen::VectorXd& x) {
    if (j < 0 || j >= bank.scales)
        throw std::invalid_argument("apply_bank_joint: filter index out of range");
    if (bank.materialized()) {
        if (bank.filters[j].cols() != x.size())
            throw std::invalid_argument("apply_bank_joint: shape mismatch");
        return bank.filters[j] * x;
    }
    if (static_cast<int>(bank.polys.size()) != bank.scales)
        throw std::invalid_argument("apply_bank_joint: bank has neither operators nor polynomials");
    return apply_joint(x, bank.polys[j], bank.shift);
}

std::pair<double, double> estimate_frame_bounds(const FilterBank& bank) {
    if (!bank.materialized())
        throw std::invalid_argument("estimate_frame_bounds: bank is not materialized");
    const int n = bank.dim();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    for (const auto& f : bank.filters) gram += f.transpose() * f;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    const double lo = std::max(0.0, solver.eigenvalues().minCoeff());
    const double hi = std::max(0.0, solver.eigenvalues().maxCoeff());
    return {std::sqrt(lo), std::sqrt(hi)};
}

KernelConstants estimate_kernel_constants(const FilterBank& bank, int grid_size) {
    if (grid_size < 100)
        throw std::invalid_argument("estimate_kernel_constants: grid_size must be >= 100");

    KernelConstants out;
    if (bank.kernels.empty()) {
        if (!bank.materialized())
            throw std::invalid_argument(
                "estimate_kernel_constants: bank has neither kernels nor materialized filters");
        double d = 0.0;
        for (const auto& f : bank.filters) d = std::max(d, spectral_norm(f));
        out.spectral_d = d;
        out.lipschitz_c = std::nullopt;
        return out;
    }

    double c_max = 0.0;
    double d_max = 0.0;
    for (const auto& k : bank.kernels) {
        const double range = k.support_hi - k.support_lo;
        const double h = range > 0.0 ? range / (grid_size - 1) : 0.0;
        const double fd_step = 1e-5 * std::max(range, 1e-8);
        for (int i = 0; i < grid_size; ++i) {
            const double lambda = k.support_lo + h * i;
            d_max = std::max(d_max, std::abs(k.value(lambda)));
            double deriv;
            if (k.derivative) {
                deriv = k.derivative(lambda);
            } else {
                deriv = (k.value(lambda + fd_step) - k.value(lambda - fd_step)) / (2.0 * fd_step);
            }
            c_max = std::max(c_max, std::abs(lambda * deriv));
        }
    }
    out.lipschitz_c = c_max;
    out.spectral_d = d_max;
    return out;
}

std::pair<Eigen::Matrix3d, Eigen::Matrix3d> coefficient_matrices(const PolynomialFilter& h,
                                                                 const PolynomialFilter& g) {
    if (h.coeffs.size() != 3 || g.coeffs.size() != 3)
        throw std::invalid_argument("coefficient_matrices: both filters must have exactly 3 taps");
    const double h0 = h.coeffs[0], h1 = h.coeffs[1], h2 = h.coeffs[2];

    // Expansion of h applied to the strong-product spectrum argument
    // Ls (x) Lt + Ls (x) I + I (x) Lt; diagonal factors commute.
    Eigen::Matrix3d joint;
    joint << h0, h1, h2,
             h1, h1 + 2.0 * h2, 2.0 * h2,
             h2, 2.0 * h2, h2;

    Eigen::Vector3d hv(h.coeffs[0], h.coeffs[1], h.coeffs[2]);
    Eigen::Vector3d gv(g.coeffs[0], g.coeffs[1], g.coeffs[2]);
    Eigen::Matrix3d separable = hv * gv.transpose();
    return {joint, separable};
}

double spectral_norm(const Eigen::MatrixXd& m) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
}

} // namespace stgst
