#pragma once

#include <cstdint>
#include <vector>

#include "co2occ/series.hpp"

namespace co2occ {

/// Linear epsilon-insensitive support vector regressor over a z-normalised
/// lagged CO2 window.
struct SvrModel {
    Eigen::VectorXd weights; ///< one per window feature, newest first
    double bias = 0.0;
    double epsilon = 0.5; ///< insensitivity width, persons
    double c = 1.0;       ///< loss/regularisation trade-off
    Eigen::Index lag = 0;
    Eigen::Index window = 4;
    Eigen::VectorXd feature_means;
    Eigen::VectorXd feature_stds;
    SampledSeries context; ///< trailing raw training CO2, window - 1 samples
    std::vector<double> objective_history; ///< full objective at each epoch boundary
};

/// Minimise 0.5 ||w||^2 + c * sum of epsilon-insensitive losses by seeded
/// stochastic subgradient descent. An epoch whose full objective worsens is
/// rolled back and retried at a smaller step, so the recorded objective never
/// increases across epochs. Deterministic for a fixed seed.
SvrModel fit_svr(const SampledSeries& co2, const SampledSeries& occupancy,
                 Eigen::Index lag, Eigen::Index window, double epsilon, double c,
                 int epochs, std::uint64_t seed);

/// Raw clamped predictions (pre-rounding) for the occupancy timestamps the
/// future window covers; the model's stored context supplies feature history
/// for the first samples.
Eigen::VectorXd predict_svr_raw(const SvrModel& model, const SampledSeries& co2_future);

/// predict_svr_raw rounded half-even to whole persons.
SampledSeries predict_svr(const SvrModel& model, const SampledSeries& co2_future);

/// Full objective of the model on an aligned feature matrix; exposed for the
/// monotonicity contract and tests.
double svr_objective(const Eigen::VectorXd& weights, double bias, double epsilon, double c,
                     const Eigen::MatrixXd& features, const Eigen::VectorXd& targets);

} // namespace co2occ
