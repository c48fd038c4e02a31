#include "stgst/product.hpp"

#include <stdexcept>
#include <string>

namespace stgst {

std::string product_kind_name(ProductKind kind) {
    switch (kind) {
        case ProductKind::Kronecker: return "kronecker";
        case ProductKind::Cartesian: return "cartesian";
        case ProductKind::Strong: return "strong";
    }
    throw std::logic_error("unknown product kind");
}

ProductKind parse_product_kind(const std::string& name) {
    if (name == "kronecker") return ProductKind::Kronecker;
    if (name == "cartesian") return ProductKind::Cartesian;
    if (name == "strong") return ProductKind::Strong;
    throw std::invalid_argument("unknown product kind: " + name);
}

namespace {

void check_joint_size(Eigen::Index n, Eigen::Index t) {
    if (n * t > kMaxJointNodes)
        throw std::invalid_argument(
            "joint assembly refused: N*T = " + std::to_string(n * t) +
            " exceeds the dense guard of " + std::to_string(kMaxJointNodes) + " nodes");
}

} // namespace

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const Eigen::Index ar = a.rows(), ac = a.cols();
    const Eigen::Index br = b.rows(), bc = b.cols();
    Eigen::MatrixXd out(ar * br, ac * bc);
    for (Eigen::Index i = 0; i < ar; ++i)
        for (Eigen::Index j = 0; j < ac; ++j)
            out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    return out;
}

Eigen::MatrixXd product_matrix(const Eigen::MatrixXd& as, const Eigen::MatrixXd& at,
                               ProductKind kind) {
    const Eigen::Index n = as.rows(), t = at.rows();
    if (as.rows() != as.cols() || at.rows() != at.cols())
        throw std::invalid_argument("product_matrix: factors must be square");
    check_joint_size(n, t);
    switch (kind) {
        case ProductKind::Kronecker:
            return kronecker(as, at);
        case ProductKind::Cartesian:
            return kronecker(as, Eigen::MatrixXd::Identity(t, t)) +
                   kronecker(Eigen::MatrixXd::Identity(n, n), at);
        case ProductKind::Strong:
            return kronecker(as, at) +
                   kronecker(as, Eigen::MatrixXd::Identity(t, t)) +
                   kronecker(Eigen::MatrixXd::Identity(n, n), at);
    }
    throw std::logic_error("unknown product kind");
}

ProductGraph product(const Graph& as, const Graph& at, ProductKind kind) {
    validate_graph(as);
    validate_graph(at);
    ProductGraph pg;
    pg.kind = kind;
    pg.n_spatial = as.n;
    pg.n_time = at.n;
    pg.adjacency = product_matrix(as.adjacency, at.adjacency, kind);
    return pg;
}

ShiftMatrix product_shift(const ShiftMatrix& ss, const ShiftMatrix& st, ProductKind kind) {
    ShiftMatrix s;
    s.kind = ShiftKind::Adjacency;
    s.matrix = product_matrix(ss.matrix, st.matrix, kind);
    s.symmetric = is_numerically_symmetric(s.matrix);
    return s;
}

JointFourierBasis joint_fourier_basis(const ShiftMatrix& ss, const ShiftMatrix& st) {
    if (!ss.eig || !st.eig)
        throw std::invalid_argument("joint_fourier_basis: factor shifts need eigendecompositions");
    if (!ss.symmetric || !st.symmetric)
        throw std::invalid_argument("joint_fourier_basis: factor shifts must be symmetric");
    const Eigen::Index n = ss.dim(), t = st.dim();
    check_joint_size(n, t);
    JointFourierBasis basis;
    basis.vectors = kronecker(ss.eig->vectors, st.eig->vectors);
    basis.pairs.reserve(static_cast<std::size_t>(n * t));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < t; ++j)
            basis.pairs.emplace_back(ss.eig->values(i), st.eig->values(j));
    return basis;
}

double joint_eigenvalue(ProductKind kind, double lambda_s, double lambda_t) {
    switch (kind) {
        case ProductKind::Kronecker: return lambda_s * lambda_t;
        case ProductKind::Cartesian: return lambda_s + lambda_t;
        case ProductKind::Strong: return lambda_s * lambda_t + lambda_s + lambda_t;
    }
    throw std::logic_error("unknown product kind");
}

} // namespace stgst
