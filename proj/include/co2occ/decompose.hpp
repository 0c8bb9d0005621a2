#pragma once

#include <Eigen/Dense>

#include "co2occ/series.hpp"

namespace co2occ {

enum class Method { Std, Stl };

/// Additive trend/seasonal/irregular split of a series. The irregular part is
/// the residual series - trend - seasonal, so the three components always sum
/// back to the source exactly.
struct ComponentSet {
    SampledSeries trend;
    SampledSeries seasonal;
    SampledSeries irregular;
    Eigen::Index period = 0;
    Method method = Method::Std;
};

struct StlParams {
    Eigen::Index period = 0;
    Eigen::Index seasonal_span = 7; ///< loess span over each cycle-subseries, odd
    Eigen::Index trend_span = 0;    ///< 0 derives the usual default from period
    int inner_iterations = 2;
    int outer_iterations = 1; ///< robustness passes; 0 disables reweighting
    int loess_degree = 1;

    static StlParams defaults(Eigen::Index period);
};

/// Knobs for either engine, shared by the model layer.
struct DecompositionConfig {
    Method method = Method::Std;
    Eigen::Index period = 0;
    int henderson_terms = 13;
    Eigen::Index seasonal_span = 7;
    Eigen::Index trend_span = 0;
    int inner_iterations = 2;
    int outer_iterations = 1;
    int loess_degree = 1;

    StlParams stl() const;
};

/// Moving-average seasonal-trend decomposition, additive form. Rough trend by
/// a centred full-period average, per-phase 3x3 seasonal, Henderson trend
/// re-estimate, second seasonal pass with a per-phase 3x5 average. Seasonal
/// output is centred so it sums to zero over every complete cycle.
ComponentSet decompose_std(const SampledSeries& s, Eigen::Index period,
                           int henderson_terms = 13);

/// Loess-based decomposition: detrend, per-cycle-subseries loess, low-pass
/// (period, period, 3 average then loess), trend loess; optional outer
/// bisquare robustness reweighting.
ComponentSet decompose_stl(const SampledSeries& s, const StlParams& params);

ComponentSet decompose(const SampledSeries& s, const DecompositionConfig& config);

/// Bisquare weights from residuals: w = (1 - (|e|/h)^2)^2 for |e| < h with
/// h = 6 * median|e|, zero beyond.
Eigen::VectorXd bisquare_weights(const Eigen::VectorXd& residuals);

/// Mean of each phase over complete cycles; length equals period.
Eigen::VectorXd per_phase_means(const Eigen::VectorXd& v, Eigen::Index period);

} // namespace co2occ
