#include "co2occ/zpa.hpp"

#include <vector>

namespace co2occ {

bool VacantWindow::contains(std::int64_t sod) const {
    if (full_day()) return true;
    if (start <= end) return sod >= start && sod < end;
    return sod >= start || sod < end;
}

VacantWindow learn_zpa(const SampledSeries& occupancy, std::int64_t utc_offset) {
    validate(occupancy);
    const std::int64_t day = 86400;
    if (day % occupancy.interval != 0)
        throw ValidationError("learn_zpa: interval must divide one day");
    const std::int64_t span = occupancy.size() * occupancy.interval;
    if (span < 2 * day)
        throw ValidationError("learn_zpa: history must span at least 2 complete days");

    const Eigen::Index bins = static_cast<Eigen::Index>(day / occupancy.interval);
    std::vector<bool> vacant(static_cast<std::size_t>(bins), true);
    for (Eigen::Index i = 0; i < occupancy.size(); ++i) {
        const std::int64_t sod = seconds_of_day(occupancy.time_at(i), utc_offset);
        const std::size_t bin = static_cast<std::size_t>(sod / occupancy.interval);
        if (occupancy.values[i] > 0.0) vacant[bin] = false;
    }

    VacantWindow window;
    window.min_days_observed = static_cast<int>(span / day);

    bool any_occupied = false;
    bool any_vacant = false;
    for (bool v : vacant) {
        if (v) any_vacant = true;
        else any_occupied = true;
    }
    if (!any_vacant)
        throw EmptyWindowError("learn_zpa: no time of day is vacant on every day");
    if (!any_occupied) {
        window.start = 0;
        window.end = day;
        return window;
    }

    // Longest circular run of vacant bins; earliest start wins ties.
    Eigen::Index best_start = 0;
    Eigen::Index best_len = 0;
    Eigen::Index run_start = 0;
    Eigen::Index run_len = 0;
    for (Eigen::Index k = 0; k < 2 * bins; ++k) {
        if (vacant[static_cast<std::size_t>(k % bins)]) {
            if (run_len == 0) run_start = k;
            ++run_len;
            // A run beginning in the first lap may wrap; cap at bins.
            const Eigen::Index len = std::min(run_len, bins);
            if (len > best_len && run_start < bins) {
                best_len = len;
                best_start = run_start;
            }
        } else {
            run_len = 0;
        }
    }

    window.start = best_start * occupancy.interval;
    window.end = ((best_start + best_len) % bins) * occupancy.interval;
    if (window.end == window.start) window.end = (window.start + day) % day;
    return window;
}

} // namespace co2occ
