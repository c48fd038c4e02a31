#include "stgst/classify.hpp"

#include "stgst/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace stgst {

ClassifierKind parse_classifier(const std::string& name) {
    if (name == "knn") return ClassifierKind::Knn;
    if (name == "nearest_centroid") return ClassifierKind::NearestCentroid;
    throw std::invalid_argument("unknown classifier: " + name);
}

Split stratified_split(const std::vector<int>& labels, double train_fraction,
                       std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("split: train fraction must lie in (0, 1)");

    std::map<int, std::vector<int>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i)
        by_class[labels[i]].push_back(static_cast<int>(i));

    Split split;
    for (auto& [label, indices] : by_class) {
        auto rng = make_engine(seed, static_cast<std::uint64_t>(label) + 1);
        std::shuffle(indices.begin(), indices.end(), rng);
        const std::size_t n_train =
            static_cast<std::size_t>(train_fraction * static_cast<double>(indices.size()));
        if (n_train == 0)
            throw std::invalid_argument(
                "split: class " + std::to_string(label) +
                " has no training samples; use a larger train fraction");
        for (std::size_t i = 0; i < indices.size(); ++i)
            (i < n_train ? split.train : split.test).push_back(indices[i]);
    }
    if (split.test.empty())
        throw std::invalid_argument("split: test set is empty; use a smaller train fraction");
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

namespace {

struct ZScore {
    Eigen::RowVectorXd mean;
    Eigen::RowVectorXd scale; // 1/std, or 1 for constant columns

    Eigen::RowVectorXd apply(const Eigen::RowVectorXd& row) const {
        return (row - mean).cwiseProduct(scale);
    }
};

ZScore fit_zscore(const Eigen::MatrixXd& features, const std::vector<int>& rows) {
    const Eigen::Index dim = features.cols();
    ZScore z;
    z.mean = Eigen::RowVectorXd::Zero(dim);
    for (int r : rows) z.mean += features.row(r);
    z.mean /= static_cast<double>(rows.size());

    Eigen::RowVectorXd var = Eigen::RowVectorXd::Zero(dim);
    for (int r : rows) var += (features.row(r) - z.mean).cwiseAbs2();
    var /= static_cast<double>(rows.size());

    z.scale.resize(dim);
    for (Eigen::Index c = 0; c < dim; ++c)
        z.scale(c) = var(c) > 1e-24 ? 1.0 / std::sqrt(var(c)) : 1.0;
    return z;
}

int knn_predict(const Eigen::MatrixXd& train, const std::vector<int>& train_labels,
                const Eigen::RowVectorXd& query, int k) {
    std::vector<std::pair<double, int>> dist; // (distance, train row)
    dist.reserve(static_cast<std::size_t>(train.rows()));
    for (Eigen::Index r = 0; r < train.rows(); ++r)
        dist.emplace_back((train.row(r) - query).squaredNorm(), static_cast<int>(r));
    std::sort(dist.begin(), dist.end());

    std::map<int, int> votes;
    for (int i = 0; i < k; ++i) votes[train_labels[static_cast<std::size_t>(dist[i].second)]]++;
    int best_label = -1, best_count = -1;
    for (const auto& [label, count] : votes) {
        if (count > best_count) { // map iterates ascending, so ties keep the smallest label
            best_count = count;
            best_label = label;
        }
    }
    return best_label;
}

double run_classifier(const Eigen::MatrixXd& features, const Eigen::MatrixXd& test_features,
                      const std::vector<int>& labels, const ClassifyOptions& options) {
    if (features.rows() != static_cast<Eigen::Index>(labels.size()))
        throw std::invalid_argument("classify: feature rows and labels disagree");
    if (test_features.rows() != features.rows() || test_features.cols() != features.cols())
        throw std::invalid_argument("classify: test feature shape mismatch");

    Split split = stratified_split(labels, options.train_fraction, options.seed);
    std::map<int, int> train_classes;
    for (int r : split.train) train_classes[labels[static_cast<std::size_t>(r)]]++;
    if (train_classes.size() < 2)
        throw std::invalid_argument("classify: need at least two classes in the training split");

    const ZScore z = fit_zscore(features, split.train);
    Eigen::MatrixXd train(split.train.size(), features.cols());
    std::vector<int> train_labels;
    train_labels.reserve(split.train.size());
    for (std::size_t i = 0; i < split.train.size(); ++i) {
        train.row(static_cast<Eigen::Index>(i)) = z.apply(features.row(split.train[i]));
        train_labels.push_back(labels[static_cast<std::size_t>(split.train[i])]);
    }

    int correct = 0;
    if (options.method == ClassifierKind::Knn) {
        if (options.k < 1) throw std::invalid_argument("classify: k must be >= 1");
        if (options.k > static_cast<int>(split.train.size()))
            throw std::invalid_argument("classify: k exceeds the training set size");
        for (int r : split.test) {
            const int predicted =
                knn_predict(train, train_labels, z.apply(test_features.row(r)), options.k);
            correct += predicted == labels[static_cast<std::size_t>(r)];
        }
    } else {
        std::map<int, std::pair<Eigen::RowVectorXd, int>> sums;
        for (std::size_t i = 0; i < train_labels.size(); ++i) {
            auto it = sums.find(train_labels[i]);
            if (it == sums.end())
                sums.emplace(train_labels[i],
                             std::make_pair(Eigen::RowVectorXd(train.row(static_cast<Eigen::Index>(i))), 1));
            else {
                it->second.first += train.row(static_cast<Eigen::Index>(i));
                it->second.second += 1;
            }
        }
        for (int r : split.test) {
            const Eigen::RowVectorXd q = z.apply(test_features.row(r));
            int best_label = -1;
            double best_dist = 0.0;
            for (const auto& [label, sum] : sums) {
                const double d = (sum.first / sum.second - q).squaredNorm();
                if (best_label < 0 || d < best_dist) {
                    best_label = label;
                    best_dist = d;
                }
            }
            correct += best_label == labels[static_cast<std::size_t>(r)];
        }
    }
    return static_cast<double>(correct) / static_cast<double>(split.test.size());
}

} // namespace

double classify(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                const ClassifyOptions& options) {
    return run_classifier(features, features, labels, options);
}

double classify_with_test_features(const Eigen::MatrixXd& features,
                                   const Eigen::MatrixXd& test_features,
                                   const std::vector<int>& labels,
                                   const ClassifyOptions& options) {
    return run_classifier(features, test_features, labels, options);
}

} // namespace stgst
