#pragma once

#include <optional>
#include <string>
#include <vector>

#include "co2occ/decompose.hpp"
#include "co2occ/lag.hpp"
#include "co2occ/series.hpp"

namespace co2occ {

/// Parsed dataset CSV: header `timestamp,co2_ppm,occupancy` with the
/// occupancy column optional for prediction-only files.
struct Dataset {
    SampledSeries co2;
    std::optional<SampledSeries> occupancy;

    AlignedPair aligned_pair() const;
};

/// Parse, validate monotone timestamps, snap rows onto the declared grid and
/// fill gaps of up to max_gap samples. Timestamps are ISO-8601; a trailing
/// Z or +-HH:MM wins, otherwise the configured offset applies.
Dataset ingest_csv(const std::string& path, std::int64_t interval, std::int64_t utc_offset,
                   Eigen::Index max_gap);

std::string format_timestamp(std::int64_t utc_time, std::int64_t utc_offset);

void write_dataset_csv(const std::string& path, const SampledSeries& co2,
                       const SampledSeries* occupancy, std::int64_t utc_offset);

/// Four-column component export: timestamp, trend, seasonal, irregular.
void write_components_csv(const std::string& path, const ComponentSet& components,
                          std::int64_t utc_offset);

/// Lag sweep export: lag, nrmse.
void write_sweep_csv(const std::string& path, const std::vector<LagFit>& sweep);

void write_predictions_csv(const std::string& path, const SampledSeries& predicted,
                           const SampledSeries& actual, const Eigen::VectorXd& raw,
                           std::int64_t utc_offset);

} // namespace co2occ
