#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>

#include "co2occ/errors.hpp"

namespace co2occ {

enum class Unit { Ppm, Persons, Dimensionless };

/// Sentinel marking a missing sample during ingestion. fill_gaps() removes
/// every occurrence before any numeric stage runs; downstream code may assume
/// all values are finite and non-sentinel.
inline constexpr double kMissing = std::numeric_limits<double>::lowest();

/// Uniformly sampled value sequence. Timestamps are UTC epoch seconds;
/// sample i sits at start_time + i * interval. Local wall-clock conversion
/// happens only at the zero-pattern and CLI layers via a fixed UTC offset.
struct SampledSeries {
    std::int64_t start_time = 0; ///< UTC epoch seconds of the first sample
    std::int64_t interval = 0;   ///< seconds between samples, > 0
    Eigen::VectorXd values;
    Unit unit = Unit::Dimensionless;

    Eigen::Index size() const { return values.size(); }
    std::int64_t time_at(Eigen::Index i) const { return start_time + i * interval; }
    /// One interval past the last sample.
    std::int64_t end_time() const { return start_time + size() * interval; }

    /// Copy of samples [first, first + count), timestamps preserved.
    SampledSeries slice(Eigen::Index first, Eigen::Index count) const;
};

/// CO2/occupancy pair on a common grid after lag alignment. Both series have
/// identical length and interval; occupancy index t is paired with the CO2
/// sample that originally sat lag_applied samples later.
struct AlignedPair {
    SampledSeries co2;       ///< ppm
    SampledSeries occupancy; ///< persons
    Eigen::Index lag_applied = 0;
};

/// Throws ValidationError unless the series is non-empty with a positive
/// interval and every value finite (no sentinel, no NaN/inf).
void validate(const SampledSeries& s);

/// As validate(), but sentinel values are allowed (pre-gap-fill series).
void validate_allow_missing(const SampledSeries& s);

/// Change the sampling interval. Downsampling to a multiple of the source
/// interval averages within each window (partial trailing windows average the
/// samples present); upsampling to a divisor interpolates linearly. Any other
/// target requires interpolate = true and resamples the series onto the new
/// grid by linear interpolation. Unit and start time are preserved.
SampledSeries resample(const SampledSeries& s, std::int64_t target_interval,
                       bool interpolate = false);

/// Linearly interpolate runs of kMissing no longer than max_gap samples.
/// Longer runs and missing leading/trailing samples are errors. Non-missing
/// values pass through untouched.
SampledSeries fill_gaps(const SampledSeries& s, Eigen::Index max_gap);

/// Advance the CO2 series by `lag` samples and trim both series to the
/// common length min(len(co2) - lag, len(occupancy)), pairing occupancy[t]
/// with co2[t + lag] in the original indexing.
AlignedPair shift_and_trim(const SampledSeries& co2, const SampledSeries& occupancy,
                           Eigen::Index lag);

/// Seconds since local midnight for a UTC timestamp under a fixed offset.
std::int64_t seconds_of_day(std::int64_t utc_time, std::int64_t utc_offset);

} // namespace co2occ
