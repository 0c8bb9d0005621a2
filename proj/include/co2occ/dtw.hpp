#pragma once

#include <Eigen/Dense>

#include "co2occ/errors.hpp"

namespace co2occ {

struct DtwResult {
    double cost = 0.0;              ///< alignment cost, absolute-difference local cost
    Eigen::Index path_length = 0;   ///< cells on the optimal warping path
};

/// Classic dynamic-time-warping alignment with unit steps (1,0), (0,1), (1,1).
/// The reported path length follows the cost-optimal path, preferring the
/// diagonal step, then advancing the first sequence, at ties.
DtwResult dtw_cost(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// 100 * (1 - cost / (path_length * value_range)) clamped to [0, 100], where
/// value_range is the combined max - min of both sequences. A zero range can
/// only occur with zero cost and scores 100.
double dtw_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

} // namespace co2occ
