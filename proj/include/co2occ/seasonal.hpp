#pragma once

#include <Eigen/Dense>

#include "co2occ/series.hpp"

namespace co2occ {

/// Shortest repeating subsequence of a seasonal component.
struct SeasonalMotif {
    Eigen::VectorXd values;
    Eigen::Index source_len = 0;
    double similarity = 0.0; ///< percent score the motif was accepted at
};

/// Occupancy motif resized to the CO2 motif's length, with the phase of its
/// first sample within the day. anchor_index pins the motif start on the
/// absolute sample grid so tiling stays continuous even when the motif is
/// not exactly one day long; for a day-length motif the lookup reduces to
/// plain time-of-day phase.
struct SeasonalMap {
    Eigen::VectorXd occupancy_motif;
    Eigen::Index phase_anchor = 0;   ///< sample offset of motif start into the day
    std::int64_t anchor_index = 0;   ///< absolute sample index of motif start
};

/// Grow a candidate prefix from the start of the seasonal series; whenever a
/// value returns to the start value (within 1% of the component's range),
/// score the candidate against the immediately following same-length window
/// by warping similarity and accept the first candidate above the threshold.
SeasonalMotif find_repeated_sequence(const SampledSeries& seasonal, double threshold);

/// Bring the occupancy motif to the CO2 motif's length: linear interpolation
/// when shorter, uniform subsampling when longer.
SeasonalMap align_motifs(const SeasonalMotif& occupancy, const SeasonalMotif& co2,
                         Eigen::Index phase_anchor, std::int64_t anchor_index = 0);

/// Motif value for the sample at the given absolute index, tiling the motif
/// from its anchor.
double motif_at(const SeasonalMap& map, std::int64_t sample_index);

} // namespace co2occ
