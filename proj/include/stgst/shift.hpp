#pragma once

#include "stgst/graph.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>

namespace stgst {

enum class ShiftKind {
    Adjacency,
    NormalizedAdjacency,
    LazyRandomWalk,
    NormalizedLaplacian,
};

std::string shift_kind_name(ShiftKind kind);
ShiftKind parse_shift_kind(const std::string& name);

struct EigenDecomposition {
    Eigen::MatrixXd vectors; // orthonormal columns
    Eigen::VectorXd values;  // ascending
};

/// A concrete graph shift operator, optionally carrying its spectral
/// decomposition. Immutable after construction; eigendecompose() returns
/// a new value rather than mutating in place.
struct ShiftMatrix {
    ShiftKind kind = ShiftKind::Adjacency;
    Eigen::MatrixXd matrix;
    bool symmetric = false;
    std::optional<EigenDecomposition> eig;

    int dim() const { return static_cast<int>(matrix.rows()); }
};

// Builds the requested shift from a graph.
//   Adjacency           -> A
//   NormalizedAdjacency -> A / lambda_max(A)
//   LazyRandomWalk      -> (I + A D^-1) / 2, column-stochastic
//   NormalizedLaplacian -> I - D^-1/2 A D^-1/2, spectrum in [0, 2]
// Isolated nodes get a zero D^-1 entry, so the lazy walk keeps 1/2 on the
// diagonal there and the normalized Laplacian keeps 1. The symmetric flag
// reflects a numeric check of the assembled matrix.
ShiftMatrix make_shift(const Graph& g, ShiftKind kind);

// Symmetric eigendecomposition with eigenvalues ascending and a fixed sign
// convention: the largest-magnitude component of each eigenvector (first
// index on ties) is made positive. Throws on asymmetric input.
ShiftMatrix eigendecompose(const ShiftMatrix& s);

// True when max |M - M^T| entry is at most 1e-12.
bool is_numerically_symmetric(const Eigen::MatrixXd& m);

// Convenience: symmetric eigendecomposition of an arbitrary matrix with the
// same ordering and sign convention as eigendecompose().
EigenDecomposition symmetric_eig(const Eigen::MatrixXd& m);

} // namespace stgst
