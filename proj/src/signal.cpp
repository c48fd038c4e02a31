#include "stgst/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace stgst {

void validate_signal(const StSignal& x) {
    if (x.channels <= 0 || x.n_spatial <= 0 || x.n_time <= 0)
        throw std::invalid_argument("signal: dimensions must be positive");
    if (static_cast<int>(x.data.size()) != x.channels)
        throw std::invalid_argument("signal: channel count mismatch");
    for (const auto& m : x.data) {
        if (m.rows() != x.n_spatial || m.cols() != x.n_time)
            throw std::invalid_argument("signal: channel shape mismatch");
        if (!m.allFinite())
            throw std::invalid_argument("signal: non-finite entries");
    }
}

StSignal make_signal(std::vector<Eigen::MatrixXd> per_channel) {
    if (per_channel.empty())
        throw std::invalid_argument("signal: need at least one channel");
    StSignal x;
    x.channels = static_cast<int>(per_channel.size());
    x.n_spatial = static_cast<int>(per_channel[0].rows());
    x.n_time = static_cast<int>(per_channel[0].cols());
    x.data = std::move(per_channel);
    validate_signal(x);
    return x;
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& z) {
    const int n = static_cast<int>(z.rows());
    const int t = static_cast<int>(z.cols());
    Eigen::VectorXd v(static_cast<Eigen::Index>(n) * t);
    for (int s = 0; s < n; ++s)
        for (int j = 0; j < t; ++j) v(static_cast<Eigen::Index>(s) * t + j) = z(s, j);
    return v;
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, int n, int t) {
    if (n <= 0 || t <= 0)
        throw std::invalid_argument("unflatten: dimensions must be positive");
    if (v.size() != static_cast<Eigen::Index>(n) * t)
        throw std::invalid_argument("unflatten: vector length does not match N*T");
    Eigen::MatrixXd z(n, t);
    for (int s = 0; s < n; ++s)
        for (int j = 0; j < t; ++j) z(s, j) = v(static_cast<Eigen::Index>(s) * t + j);
    return z;
}

double signal_norm(const StSignal& x) {
    double sq = 0.0;
    for (const auto& m : x.data) sq += m.squaredNorm();
    return std::sqrt(sq);
}

} // namespace stgst
