#include "stgst/shift.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace stgst {

std::string shift_kind_name(ShiftKind kind) {
    switch (kind) {
        case ShiftKind::Adjacency: return "adjacency";
        case ShiftKind::NormalizedAdjacency: return "normalized_adjacency";
        case ShiftKind::LazyRandomWalk: return "lazy_random_walk";
        case ShiftKind::NormalizedLaplacian: return "normalized_laplacian";
    }
    throw std::logic_error("unknown shift kind");
}

ShiftKind parse_shift_kind(const std::string& name) {
    if (name == "adjacency") return ShiftKind::Adjacency;
    if (name == "normalized_adjacency") return ShiftKind::NormalizedAdjacency;
    if (name == "lazy_random_walk") return ShiftKind::LazyRandomWalk;
    if (name == "normalized_laplacian") return ShiftKind::NormalizedLaplacian;
    throw std::invalid_argument("unknown shift kind: " + name);
}

bool is_numerically_symmetric(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) return false;
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12;
}

EigenDecomposition symmetric_eig(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("symmetric eigendecomposition failed to converge");
    EigenDecomposition d;
    d.values = solver.eigenvalues();
    d.vectors = solver.eigenvectors();
    // Sign convention: largest-magnitude component (first index on ties)
    // made positive, for reproducible eigenvectors across runs.
    for (int c = 0; c < d.vectors.cols(); ++c) {
        int arg = 0;
        double best = std::abs(d.vectors(0, c));
        for (int r = 1; r < d.vectors.rows(); ++r) {
            double a = std::abs(d.vectors(r, c));
            if (a > best) {
                best = a;
                arg = r;
            }
        }
        if (d.vectors(arg, c) < 0.0) d.vectors.col(c) = -d.vectors.col(c);
    }
    return d;
}

ShiftMatrix make_shift(const Graph& g, ShiftKind kind) {
    validate_graph(g);
    const int n = g.n;
    const Eigen::MatrixXd& a = g.adjacency;
    Eigen::VectorXd deg = a.rowwise().sum();

    ShiftMatrix s;
    s.kind = kind;
    switch (kind) {
        case ShiftKind::Adjacency: {
            s.matrix = a;
            break;
        }
        case ShiftKind::NormalizedAdjacency: {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
            double lmax = solver.eigenvalues().maxCoeff();
            s.matrix = (lmax > 0.0) ? Eigen::MatrixXd(a / lmax) : a;
            break;
        }
        case ShiftKind::LazyRandomWalk: {
            Eigen::VectorXd dinv(n);
            for (int i = 0; i < n; ++i) dinv(i) = deg(i) > 0.0 ? 1.0 / deg(i) : 0.0;
            s.matrix = 0.5 * (Eigen::MatrixXd::Identity(n, n) + a * dinv.asDiagonal());
            break;
        }
        case ShiftKind::NormalizedLaplacian: {
            Eigen::VectorXd dsq(n);
            for (int i = 0; i < n; ++i) dsq(i) = deg(i) > 0.0 ? 1.0 / std::sqrt(deg(i)) : 0.0;
            s.matrix = Eigen::MatrixXd::Identity(n, n) -
                       dsq.asDiagonal() * a * dsq.asDiagonal();
            break;
        }
    }
    s.symmetric = is_numerically_symmetric(s.matrix);
    return s;
}

ShiftMatrix eigendecompose(const ShiftMatrix& s) {
    if (!s.symmetric)
        throw std::invalid_argument("eigendecompose: shift is not symmetric");
    ShiftMatrix out = s;
    out.eig = symmetric_eig(s.matrix);
    return out;
}

} // namespace stgst
