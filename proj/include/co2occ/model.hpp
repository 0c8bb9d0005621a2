#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "co2occ/decompose.hpp"
#include "co2occ/regression.hpp"
#include "co2occ/seasonal.hpp"
#include "co2occ/series.hpp"
#include "co2occ/zpa.hpp"

namespace co2occ {

struct TrainConfig {
    Method method = Method::Std;
    Eigen::Index period = 0;  ///< samples; 0 derives one day from the interval
    Eigen::Index max_lag = 0; ///< lag sweep bound, samples
    int poly_max_degree = 3;
    double dtw_threshold = 95.0;
    double pcc_threshold = 0.7;
    int henderson_terms = 13;
    Eigen::Index seasonal_span = 7;
    Eigen::Index trend_span = 0;
    int inner_iterations = 2;
    int outer_iterations = 1;
    int loess_degree = 1;
    bool zpa_enabled = true;
    std::int64_t utc_offset = 0;

    DecompositionConfig decomposition(Eigen::Index effective_period) const;
};

/// Everything needed to map a future CO2 window to occupancy counts: the
/// per-component submodels, the selected lag, and a trailing slice of the
/// training CO2 that pads prediction-time decomposition against endpoint
/// artifacts.
struct OccupancyModel {
    Method method = Method::Std;
    Eigen::Index period = 0;
    Eigen::Index lag = 0; ///< samples
    std::int64_t interval = 0;
    std::int64_t utc_offset = 0;
    PolyModel trend_model;
    SeasonalMap seasonal_map;
    PolyModel irregular_model;
    std::optional<VacantWindow> zpa;
    std::int64_t training_start = 0;
    std::int64_t training_end = 0;
    SampledSeries context;
    DecompositionConfig decomposition;
    std::vector<std::string> warnings;
};

struct PredictionResult {
    SampledSeries occupancy;   ///< non-negative whole persons
    ComponentSet components;   ///< predicted occupancy components
    std::vector<bool> zpa_mask;
    Eigen::VectorXd raw;       ///< clamped pre-rounding sums, for error reporting
    std::vector<std::string> warnings;
};

/// Select the lag, align, decompose both series, and fit the trend, seasonal,
/// irregular and vacancy submodels. An undetectable seasonal motif degrades
/// to the per-phase mean pattern and a missing vacant window disables the
/// zero adjustment, both with warnings; other submodel failures propagate.
OccupancyModel train(const SampledSeries& co2, const SampledSeries& occupancy,
                     const TrainConfig& config);

/// Decompose the future CO2 window (padded with the stored training tail),
/// map each component, add the vacancy term, clamp and round. Output covers
/// the future timestamps except the trailing `lag` samples, whose paired CO2
/// lies beyond the window.
PredictionResult predict(const OccupancyModel& model, const SampledSeries& co2_future);

/// round(max(0, trend + seasonal + irregular + zpa)), half-even.
long long reconstruct(double trend, double seasonal, double irregular, double zpa);

} // namespace co2occ
