#pragma once

#include <vector>

#include "co2occ/series.hpp"

namespace co2occ {

struct RoomGeometry {
    double length = 0.0; ///< m
    double width = 0.0;  ///< m
    double height = 0.0; ///< m

    double volume() const { return length * width * height; }
};

/// Regression line and error for one candidate lag.
struct LagFit {
    Eigen::Index lag = 0;
    double slope = 0.0;     ///< persons per ppm
    double intercept = 0.0; ///< persons
    double nrmse = 0.0;
};

/// floor(volume_m3 / 100), clamped at zero: the number of per-minute lag
/// steps the sweep covers. Convert with lag_minutes_to_samples for a series.
Eigen::Index upper_bound_lag(const RoomGeometry& geom);

/// Minutes-of-sweep to sample steps at the series interval, rounding down.
Eigen::Index lag_minutes_to_samples(Eigen::Index minutes, std::int64_t interval_seconds);

/// Ordinary least squares of occupancy on CO2 over an aligned pair. The
/// returned nrmse field is left zero; use nrmse() to fill it.
LagFit fit_line(const AlignedPair& pair);

/// Root-mean-square occupancy residual of the fit, normalised by the
/// occupancy range.
double nrmse(const LagFit& fit, const AlignedPair& pair);

struct LagSelection {
    Eigen::Index lag = 0;        ///< lag of the minimal-error fit; ties take the smallest
    std::vector<LagFit> sweep;   ///< one entry per candidate lag, for plot export
};

/// Fit every lag in 0..max_lag on the shifted-and-trimmed pair and pick the
/// lag with the smallest normalised error.
LagSelection select_lag(const SampledSeries& co2, const SampledSeries& occupancy,
                        Eigen::Index max_lag);

} // namespace co2occ
