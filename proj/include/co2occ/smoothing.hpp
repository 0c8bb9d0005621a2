#pragma once

#include <Eigen/Dense>

#include "co2occ/series.hpp"

namespace co2occ {

/// Symmetric convolution weights for an n-term simple moving average followed
/// by an m-term one. Length m + n - 1; m and n must have equal parity so the
/// composite is exactly centred.
Eigen::VectorXd composite_ma_kernel(int m, int n);

/// Centred moving average of a full period: a p-term kernel for odd p, the
/// 2 x p composite for even p. Either way the kernel has odd length.
Eigen::VectorXd centered_period_kernel(Eigen::Index period);

enum class EdgePolicy {
    /// Shrink the window symmetrically and renormalise the surviving weights.
    ShrinkSymmetric,
    /// Truncate the window at the boundary only and renormalise, so the first
    /// and last points still pool their available one-sided neighbours.
    ShrinkAsymmetric,
    /// Keep the full-width window and slide it inside the bounds. A kernel
    /// built from full-period block means then annihilates the periodic
    /// component even at the edges. Falls back to shrinking when the kernel
    /// is longer than the series.
    ClampWindow,
};

/// Apply an odd-length centred kernel; output length equals input length and
/// constants pass through exactly under either edge policy.
Eigen::VectorXd apply_centered_kernel(const Eigen::VectorXd& v, const Eigen::VectorXd& kernel,
                                      EdgePolicy edges = EdgePolicy::ShrinkSymmetric);

/// m-by-n centred moving average (n-term pass then m-term pass).
Eigen::VectorXd moving_average(const Eigen::VectorXd& v, int m, int n);
SampledSeries moving_average(const SampledSeries& s, int m, int n);

/// Closed-form Henderson weights for terms in {5, 9, 13, 23}. Weights sum to
/// one and reproduce cubic polynomials.
Eigen::VectorXd henderson_weights(int terms);

/// Henderson-weighted smoothing. Endpoints use shrinking asymmetric windows
/// with the surviving weights renormalised.
Eigen::VectorXd henderson(const Eigen::VectorXd& v, int terms);
SampledSeries henderson(const SampledSeries& s, int terms);

enum class LoessFallback {
    /// A neighbourhood whose weights collapse onto fewer than degree + 1
    /// points is an error.
    Strict,
    /// Degrade such neighbourhoods to the weighted mean, or to the window
    /// median when every weight vanished. Robustness weighting inside the
    /// seasonal-trend loop depletes windows around heavy outliers; the median
    /// keeps the outlier itself from re-entering through the fallback.
    WeightedMean,
};

/// Locally weighted regression. For each x[i], fits a weighted least-squares
/// polynomial of the given degree over the `span` nearest neighbours with
/// tricube distance weights (times robustness weights when given) and returns
/// the fitted value at x[i]. xs must be strictly increasing; span is clamped
/// to the number of points and must leave at least degree + 2 of them.
Eigen::VectorXd loess(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                      Eigen::Index span, int degree,
                      const Eigen::VectorXd* robustness_weights = nullptr,
                      LoessFallback fallback = LoessFallback::Strict);

} // namespace co2occ
