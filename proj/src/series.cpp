#include "co2occ/series.hpp"

#include <cmath>
#include <string>

namespace co2occ {

SampledSeries SampledSeries::slice(Eigen::Index first, Eigen::Index count) const {
    SampledSeries out;
    out.start_time = time_at(first);
    out.interval = interval;
    out.unit = unit;
    out.values = values.segment(first, count);
    return out;
}

void validate(const SampledSeries& s) {
    validate_allow_missing(s);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s.values[i] == kMissing)
            throw ValidationError("series contains a missing-value sentinel at index " +
                                  std::to_string(i));
    }
}

void validate_allow_missing(const SampledSeries& s) {
    if (s.interval <= 0)
        throw ValidationError("series interval must be positive");
    if (s.values.size() == 0)
        throw ValidationError("series is empty");
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double v = s.values[i];
        if (v != kMissing && !std::isfinite(v))
            throw ValidationError("series value at index " + std::to_string(i) +
                                  " is not finite");
        if (s.unit == Unit::Persons && v != kMissing && v < 0.0)
            throw ValidationError("occupancy value at index " + std::to_string(i) +
                                  " is negative");
    }
}

SampledSeries resample(const SampledSeries& s, std::int64_t target_interval,
                       bool interpolate) {
    validate(s);
    if (target_interval <= 0)
        throw ValidationError("target interval must be positive");
    if (target_interval == s.interval)
        return s;

    SampledSeries out;
    out.start_time = s.start_time;
    out.interval = target_interval;
    out.unit = s.unit;

    const Eigen::Index n = s.size();
    if (target_interval > s.interval && target_interval % s.interval == 0) {
        // Window means preserve the reported-concentration character of the
        // data; decimation would not.
        const Eigen::Index r = static_cast<Eigen::Index>(target_interval / s.interval);
        const Eigen::Index m = (n + r - 1) / r;
        out.values.resize(m);
        for (Eigen::Index k = 0; k < m; ++k) {
            const Eigen::Index lo = k * r;
            const Eigen::Index len = std::min(r, n - lo);
            out.values[k] = s.values.segment(lo, len).mean();
        }
        return out;
    }
    if (target_interval < s.interval && s.interval % target_interval == 0) {
        const Eigen::Index r = static_cast<Eigen::Index>(s.interval / target_interval);
        const Eigen::Index m = (n - 1) * r + 1;
        out.values.resize(m);
        for (Eigen::Index j = 0; j < m; ++j) {
            const Eigen::Index i = j / r;
            const Eigen::Index rem = j % r;
            if (rem == 0) {
                out.values[j] = s.values[i];
            } else {
                const double frac = static_cast<double>(rem) / static_cast<double>(r);
                out.values[j] = s.values[i] * (1.0 - frac) + s.values[i + 1] * frac;
            }
        }
        return out;
    }
    if (!interpolate)
        throw ValidationError(
            "target interval is neither a multiple nor a divisor of the source "
            "interval; pass interpolate = true for arbitrary resampling");

    const std::int64_t span = (n - 1) * s.interval;
    const Eigen::Index m = static_cast<Eigen::Index>(span / target_interval) + 1;
    out.values.resize(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double pos = static_cast<double>(j * target_interval) /
                           static_cast<double>(s.interval);
        const Eigen::Index i = std::min(static_cast<Eigen::Index>(pos), n - 2);
        const double frac = pos - static_cast<double>(i);
        out.values[j] = s.values[i] * (1.0 - frac) + s.values[i + 1] * frac;
    }
    return out;
}

SampledSeries fill_gaps(const SampledSeries& s, Eigen::Index max_gap) {
    validate_allow_missing(s);
    const Eigen::Index n = s.size();
    if (s.values[0] == kMissing)
        throw ValidationError("leading sample is missing; cannot interpolate");
    if (s.values[n - 1] == kMissing)
        throw ValidationError("trailing sample is missing; cannot interpolate");

    SampledSeries out = s;
    Eigen::Index i = 0;
    while (i < n) {
        if (out.values[i] != kMissing) {
            ++i;
            continue;
        }
        Eigen::Index j = i;
        while (out.values[j] == kMissing) ++j;
        const Eigen::Index gap = j - i;
        if (gap > max_gap)
            throw ValidationError("gap of " + std::to_string(gap) + " samples at index " +
                                  std::to_string(i) + " exceeds max gap " +
                                  std::to_string(max_gap));
        const double a = out.values[i - 1];
        const double b = out.values[j];
        for (Eigen::Index k = i; k < j; ++k) {
            const double frac = static_cast<double>(k - i + 1) / static_cast<double>(gap + 1);
            out.values[k] = a + (b - a) * frac;
        }
        i = j;
    }
    return out;
}

AlignedPair shift_and_trim(const SampledSeries& co2, const SampledSeries& occupancy,
                           Eigen::Index lag) {
    validate(co2);
    validate(occupancy);
    if (co2.interval != occupancy.interval)
        throw ValidationError("CO2 and occupancy intervals differ");
    if (lag < 0)
        throw ValidationError("lag must be non-negative");
    if (lag >= co2.size())
        throw ValidationError("lag " + std::to_string(lag) +
                              " is not smaller than the CO2 series length");

    const Eigen::Index len = std::min(co2.size() - lag, occupancy.size());
    AlignedPair pair;
    pair.co2 = co2.slice(lag, len);
    pair.occupancy = occupancy.slice(0, len);
    pair.lag_applied = lag;
    return pair;
}

std::int64_t seconds_of_day(std::int64_t utc_time, std::int64_t utc_offset) {
    const std::int64_t day = 86400;
    std::int64_t sod = (utc_time + utc_offset) % day;
    if (sod < 0) sod += day;
    return sod;
}

} // namespace co2occ
