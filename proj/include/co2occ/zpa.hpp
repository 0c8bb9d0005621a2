#pragma once

#include <cstdint>

#include "co2occ/series.hpp"

namespace co2occ {

/// Daily always-vacant interval in local wall-clock seconds, end exclusive.
/// start > end means the window wraps midnight; [0, 86400) covers a full day.
struct VacantWindow {
    std::int64_t start = 0;
    std::int64_t end = 0;
    int min_days_observed = 0;

    bool contains(std::int64_t seconds_of_day) const;
    bool full_day() const { return start == 0 && end == 86400; }
};

/// Overlay the occupancy history on a single 24-hour axis and return the
/// longest contiguous interval that is vacant on every observed day. The
/// history must span at least two complete days and the interval must divide
/// a day so the bins line up across days.
VacantWindow learn_zpa(const SampledSeries& occupancy, std::int64_t utc_offset);

} // namespace co2occ
