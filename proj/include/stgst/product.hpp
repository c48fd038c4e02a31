#pragma once

#include "stgst/graph.hpp"
#include "stgst/shift.hpp"

#include <Eigen/Core>

#include <string>
#include <utility>
#include <vector>

namespace stgst {

enum class ProductKind { Kronecker, Cartesian, Strong };

std::string product_kind_name(ProductKind kind);
ProductKind parse_product_kind(const std::string& name);

/// Joint spatio-temporal graph on N*T nodes. Row/column indexing follows
/// the flatten convention: node (s, t) sits at index s*T + t.
struct ProductGraph {
    ProductKind kind = ProductKind::Strong;
    int n_spatial = 0;
    int n_time = 0;
    Eigen::MatrixXd adjacency;
};

// Dense joint assembly is meant for validating the theory at desk scale,
// not production; larger requests are rejected.
inline constexpr long kMaxJointNodes = 5000;

// Kronecker product with the block layout matching flatten:
// block (s1, s2) of size T x T equals As(s1, s2) * At.
Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Joint adjacency for the requested product:
//   Kronecker: As (x) At
//   Cartesian: As (x) I + I (x) At
//   Strong:    sum of both
Eigen::MatrixXd product_matrix(const Eigen::MatrixXd& as, const Eigen::MatrixXd& at,
                               ProductKind kind);

ProductGraph product(const Graph& as, const Graph& at, ProductKind kind);

// Joint shift assembled from two factor shifts with the same product
// formula. Keeps the factor spectra meaningful: the joint operator is
// diagonalized by Vs (x) Vt whenever both factors are.
ShiftMatrix product_shift(const ShiftMatrix& ss, const ShiftMatrix& st, ProductKind kind);

struct JointFourierBasis {
    Eigen::MatrixXd vectors;                          // Vs (x) Vt, NT x NT
    std::vector<std::pair<double, double>> pairs;     // (lambda_s, lambda_t) in flatten order
};

// Shared Fourier basis of all three products. Requires eigendecomposed
// symmetric factor shifts.
JointFourierBasis joint_fourier_basis(const ShiftMatrix& ss, const ShiftMatrix& st);

// Joint eigenvalue for one factor pair under the given product.
double joint_eigenvalue(ProductKind kind, double lambda_s, double lambda_t);

} // namespace stgst
