#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace stgst {

enum class ClassifierKind { Knn, NearestCentroid };

ClassifierKind parse_classifier(const std::string& name);

struct ClassifyOptions {
    ClassifierKind method = ClassifierKind::Knn;
    int k = 5;
    double train_fraction = 0.5;
    std::uint64_t seed = 7;
};

struct Split {
    std::vector<int> train;
    std::vector<int> test;
};

// Deterministic stratified split: per class, indices are shuffled by a
// class-local substream of the seed and floor(fraction * count) go to
// training. Throws when a class ends up without training samples or the
// test set is empty.
Split stratified_split(const std::vector<int>& labels, double train_fraction,
                       std::uint64_t seed);

// Test accuracy after z-scoring on training statistics. kNN uses Euclidean
// distance with vote ties broken toward the smallest label.
double classify(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                const ClassifyOptions& options);

// Variant for perturbation sweeps: the split and training statistics come
// from `features`, but test rows are evaluated from `test_features`.
double classify_with_test_features(const Eigen::MatrixXd& features,
                                   const Eigen::MatrixXd& test_features,
                                   const std::vector<int>& labels,
                                   const ClassifyOptions& options);

} // namespace stgst
