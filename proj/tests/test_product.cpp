#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stgst/graph.hpp"
#include "stgst/product.hpp"
#include "stgst/rng.hpp"
#include "stgst/shift.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <random>
#include <vector>

using namespace stgst;

namespace {

// Independent oracle: entry-by-entry evaluation of the product definition
// A[(s1,t1),(s2,t2)] over all four indices.
Eigen::MatrixXd product_oracle(const Eigen::MatrixXd& as, const Eigen::MatrixXd& at,
                               ProductKind kind) {
    const int n = static_cast<int>(as.rows()), t = static_cast<int>(at.rows());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n * t, n * t);
    for (int s1 = 0; s1 < n; ++s1)
        for (int t1 = 0; t1 < t; ++t1)
            for (int s2 = 0; s2 < n; ++s2)
                for (int t2 = 0; t2 < t; ++t2) {
                    double value = 0.0;
                    const double kron = as(s1, s2) * at(t1, t2);
                    const double cart = (t1 == t2 ? as(s1, s2) : 0.0) +
                                        (s1 == s2 ? at(t1, t2) : 0.0);
                    switch (kind) {
                        case ProductKind::Kronecker: value = kron; break;
                        case ProductKind::Cartesian: value = cart; break;
                        case ProductKind::Strong: value = kron + cart; break;
                    }
                    out(s1 * t + t1, s2 * t + t2) = value;
                }
    return out;
}

Graph p2() { return build_line_graph(2); }

Graph random_graph(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> weight(0.2, 1.5), coin(0.0, 1.0);
    Graph g;
    g.n = n;
    g.adjacency = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng) < 0.6) {
                const double w = weight(rng);
                g.adjacency(i, j) = w;
                g.adjacency(j, i) = w;
            }
    return g;
}

} // namespace

TEST_CASE("P2 x P2 products match the definitional oracle") {
    const Graph a = p2(), b = p2();

    ProductGraph kron = product(a, b, ProductKind::Kronecker);
    Eigen::MatrixXd expected_kron(4, 4);
    expected_kron << 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0;
    CHECK(kron.adjacency == expected_kron);
    CHECK(kron.adjacency == product_oracle(a.adjacency, b.adjacency, ProductKind::Kronecker));

    ProductGraph cart = product(a, b, ProductKind::Cartesian);
    Eigen::MatrixXd expected_cart(4, 4); // the 4-cycle
    expected_cart << 0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0;
    CHECK(cart.adjacency == expected_cart);
    CHECK(cart.adjacency == product_oracle(a.adjacency, b.adjacency, ProductKind::Cartesian));

    ProductGraph strong = product(a, b, ProductKind::Strong);
    Eigen::MatrixXd expected_strong =
        Eigen::MatrixXd::Ones(4, 4) - Eigen::MatrixXd::Identity(4, 4); // K4
    CHECK(strong.adjacency == expected_strong);
    CHECK(strong.adjacency == product_oracle(a.adjacency, b.adjacency, ProductKind::Strong));
}

TEST_CASE("Kronecker plus Cartesian equals Strong exactly") {
    auto rng = make_engine(3, 0);
    for (int trial = 0; trial < 10; ++trial) {
        std::uniform_int_distribution<int> dim(2, 6);
        const Graph a = random_graph(dim(rng), rng);
        const Graph b = random_graph(dim(rng), rng);
        const Eigen::MatrixXd sum = product(a, b, ProductKind::Kronecker).adjacency +
                                    product(a, b, ProductKind::Cartesian).adjacency;
        CHECK(sum == product(a, b, ProductKind::Strong).adjacency);
    }
}

TEST_CASE("strong product degrees combine as ds*dt + ds + dt") {
    const Graph a = random_connected_graph(5, 21);
    const Graph b = build_line_graph(4);
    const ProductGraph strong = product(a, b, ProductKind::Strong);
    const Eigen::VectorXd ds = degrees(a), dt = degrees(b);
    const Eigen::VectorXd joint_deg = strong.adjacency.rowwise().sum();
    for (int s = 0; s < a.n; ++s)
        for (int t = 0; t < b.n; ++t)
            CHECK(joint_deg(s * b.n + t) ==
                  doctest::Approx(ds(s) * dt(t) + ds(s) + dt(t)).epsilon(1e-12));
}

TEST_CASE("joint Fourier basis of identities is the identity") {
    ShiftMatrix a, b;
    a.kind = b.kind = ShiftKind::Adjacency;
    a.matrix = Eigen::MatrixXd::Identity(2, 2);
    b.matrix = Eigen::MatrixXd::Identity(2, 2);
    a.symmetric = b.symmetric = true;
    a = eigendecompose(a);
    b = eigendecompose(b);
    const JointFourierBasis basis = joint_fourier_basis(a, b);
    CHECK((basis.vectors - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("P2 pair eigenvalues combine per product kind") {
    const ShiftMatrix s = eigendecompose(make_shift(p2(), ShiftKind::Adjacency));
    const JointFourierBasis basis = joint_fourier_basis(s, s);

    auto combined_sorted = [&](ProductKind kind) {
        std::vector<double> v;
        for (const auto& [ls, lt] : basis.pairs) v.push_back(joint_eigenvalue(kind, ls, lt));
        std::sort(v.begin(), v.end());
        return v;
    };
    auto assembled_sorted = [&](ProductKind kind) {
        const ShiftMatrix joint = product_shift(s, s, kind);
        const EigenDecomposition d = symmetric_eig(joint.matrix);
        std::vector<double> v(d.values.data(), d.values.data() + d.values.size());
        std::sort(v.begin(), v.end());
        return v;
    };

    const std::vector<double> expected_kron{-1, -1, 1, 1};
    const std::vector<double> expected_cart{-2, 0, 0, 2};
    auto kron = combined_sorted(ProductKind::Kronecker);
    auto cart = combined_sorted(ProductKind::Cartesian);
    for (int i = 0; i < 4; ++i) {
        CHECK(kron[i] == doctest::Approx(expected_kron[i]));
        CHECK(cart[i] == doctest::Approx(expected_cart[i]));
    }
    for (ProductKind kind :
         {ProductKind::Kronecker, ProductKind::Cartesian, ProductKind::Strong}) {
        auto lhs = combined_sorted(kind);
        auto rhs = assembled_sorted(kind);
        for (std::size_t i = 0; i < lhs.size(); ++i)
            CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-8));
    }
}

TEST_CASE("pairwise eigenvalues match the assembled spectrum on random graphs") {
    auto rng = make_engine(9, 0);
    for (int trial = 0; trial < 8; ++trial) {
        std::uniform_int_distribution<int> dim(2, 6);
        const Graph ga = random_graph(dim(rng), rng);
        const Graph gb = random_graph(dim(rng), rng);
        const ShiftMatrix sa = eigendecompose(make_shift(ga, ShiftKind::Adjacency));
        const ShiftMatrix sb = eigendecompose(make_shift(gb, ShiftKind::Adjacency));
        const JointFourierBasis basis = joint_fourier_basis(sa, sb);

        for (ProductKind kind :
             {ProductKind::Kronecker, ProductKind::Cartesian, ProductKind::Strong}) {
            std::vector<double> combined;
            for (const auto& [ls, lt] : basis.pairs)
                combined.push_back(joint_eigenvalue(kind, ls, lt));
            std::sort(combined.begin(), combined.end());

            const EigenDecomposition d = symmetric_eig(product_shift(sa, sb, kind).matrix);
            for (std::size_t i = 0; i < combined.size(); ++i)
                CHECK(combined[i] ==
                      doctest::Approx(d.values(static_cast<Eigen::Index>(i))).epsilon(1e-8));
        }
    }
}

TEST_CASE("flatten-order indexing of eigenvalue pairs") {
    const ShiftMatrix sa = eigendecompose(make_shift(random_connected_graph(3, 4),
                                                     ShiftKind::Adjacency));
    const ShiftMatrix sb = eigendecompose(make_shift(build_line_graph(4),
                                                     ShiftKind::Adjacency));
    const JointFourierBasis basis = joint_fourier_basis(sa, sb);
    REQUIRE(basis.pairs.size() == 12);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(basis.pairs[static_cast<std::size_t>(i * 4 + j)].first ==
                  sa.eig->values(i));
            CHECK(basis.pairs[static_cast<std::size_t>(i * 4 + j)].second ==
                  sb.eig->values(j));
        }
}

TEST_CASE("dense joint assembly is guarded") {
    Graph big = build_line_graph(80);
    Graph time = build_line_graph(80); // 6400 > 5000
    CHECK_THROWS_AS(product(big, time, ProductKind::Strong), std::invalid_argument);
}

TEST_CASE("joint basis requires eigendecompositions") {
    const ShiftMatrix sa = make_shift(p2(), ShiftKind::Adjacency);
    const ShiftMatrix sb = make_shift(p2(), ShiftKind::Adjacency);
    CHECK_THROWS_AS(joint_fourier_basis(sa, sb), std::invalid_argument);
}
