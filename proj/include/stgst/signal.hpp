#pragma once

#include <Eigen/Core>

#include <vector>

namespace stgst {

/// Spatio-temporal signal: C channels of N x T matrices (spatial nodes by
/// time stamps). Channels never mix inside the transform.
struct StSignal {
    int channels = 0;
    int n_spatial = 0;
    int n_time = 0;
    std::vector<Eigen::MatrixXd> data; // one N x T matrix per channel
};

// Throws when shapes disagree or any entry is not finite.
void validate_signal(const StSignal& x);

StSignal make_signal(std::vector<Eigen::MatrixXd> per_channel);

// Vectorization convention: entry (s, t) of the N x T matrix maps to
// position s*T + t. Round trips are bit exact.
Eigen::VectorXd flatten(const Eigen::MatrixXd& z);
Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, int n, int t);

double signal_norm(const StSignal& x); // Frobenius norm over all channels

} // namespace stgst
