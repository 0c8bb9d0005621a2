#include "co2occ/sim.hpp"

#include <cmath>
#include <random>
#include <string>

namespace co2occ {

namespace {

constexpr std::int64_t kDay = 86400;
/// Monday 2025-06-02 00:00 UTC; presets start on a Monday so weekday indices
/// are day % 7 with 5 and 6 the weekend.
constexpr std::int64_t kPresetStart = 1748822400;

void validate_room(const RoomModel& room) {
    if (room.geometry.volume() <= 0.0 || room.geometry.length <= 0.0 ||
        room.geometry.width <= 0.0 || room.geometry.height <= 0.0)
        throw ValidationError("room volume must be positive");
    if (room.inflow < 0.0 || room.outflow < 0.0)
        throw ValidationError("flows must be non-negative");
    if (room.inlet_concentration < 0.0 || room.initial_concentration < 0.0)
        throw ValidationError("concentrations must be non-negative");
}

} // namespace

double exhalation_rate(const OccupantProfile& p) {
    if (p.metabolic_rate <= 0.0 || p.height_cm <= 0.0 || p.weight_kg <= 0.0)
        throw ValidationError("occupant profile values must be positive");
    if (p.respiratory_quotient <= 0.6 || p.respiratory_quotient >= 1.1)
        throw ValidationError("respiratory quotient must lie in (0.6, 1.1)");
    return p.metabolic_rate * p.respiratory_quotient *
           std::sqrt(p.height_cm * p.weight_kg) /
           (21132.0 * (0.23 * p.respiratory_quotient + 0.77));
}

int Schedule::occupants_at(std::int64_t t) const {
    int count = 0;
    for (const ScheduleEntry& e : entries)
        if (t >= e.start_time && t < e.end_time) count += e.occupant_count;
    return count;
}

double Schedule::gas_rate_at(std::int64_t t) const {
    double rate = 0.0;
    for (const ScheduleEntry& e : entries)
        if (t >= e.start_time && t < e.end_time)
            rate += e.occupant_count * exhalation_rate(e.profile) * 1e-3; // L/s -> m^3/s
    return rate;
}

SimResult simulate(const RoomModel& room, const Schedule& schedule,
                   std::int64_t start_time, std::int64_t interval, std::int64_t duration,
                   const std::optional<SensorNoise>& noise, int substeps_per_interval) {
    validate_room(room);
    if (interval <= 0)
        throw ValidationError("interval must be positive");
    if (duration <= 0 || duration % interval != 0)
        throw ValidationError("duration must be a positive multiple of the interval");

    const double volume = room.geometry.volume();
    int substeps = substeps_per_interval;
    if (substeps == 0) {
        // At least interval / 10, and small against the flushing time so the
        // explicit update stays accurate.
        substeps = 10;
        if (room.outflow > 0.0) {
            const double needed = 50.0 * static_cast<double>(interval) * room.outflow / volume;
            substeps = std::max(substeps, static_cast<int>(std::ceil(needed)));
        }
    } else {
        if (substeps < 10)
            throw ValidationError("sub-interval must be at most interval / 10");
        const double dt = static_cast<double>(interval) / substeps;
        if (room.outflow > 0.0 && dt >= volume / room.outflow)
            throw UnstableStepError(
                "sub-interval too coarse for the flow/volume ratio: dt = " +
                std::to_string(dt) + " s vs V/outflow = " +
                std::to_string(volume / room.outflow) + " s");
    }
    const double dt = static_cast<double>(interval) / substeps;

    const Eigen::Index n = static_cast<Eigen::Index>(duration / interval);
    SimResult out;
    out.co2.start_time = start_time;
    out.co2.interval = interval;
    out.co2.unit = Unit::Ppm;
    out.co2.values.resize(n);
    out.occupancy = out.co2;
    out.occupancy.unit = Unit::Persons;

    double c = room.initial_concentration;
    for (Eigen::Index k = 0; k < n; ++k) {
        const std::int64_t tk = start_time + k * interval;
        out.co2.values[k] = c;
        out.occupancy.values[k] = schedule.occupants_at(tk);
        for (int s = 0; s < substeps; ++s) {
            const std::int64_t ts = tk + static_cast<std::int64_t>(s * dt);
            const double source = schedule.gas_rate_at(ts) * 1e6 / volume;
            c += dt * ((room.inflow * room.inlet_concentration - room.outflow * c) / volume +
                       source);
        }
    }

    if (noise) {
        std::mt19937_64 rng(noise->seed);
        std::normal_distribution<double> gauss(0.0, noise->sigma_ppm);
        for (Eigen::Index k = 0; k < n; ++k) {
            double v = out.co2.values[k];
            if (noise->sigma_ppm > 0.0) v += gauss(rng);
            if (noise->quantization_ppm > 0.0)
                v = std::round(v / noise->quantization_ppm) * noise->quantization_ppm;
            out.co2.values[k] = std::max(v, 0.0);
        }
    }
    return out;
}

namespace {

struct Block {
    int start_min;
    int end_min;
};

void add_entry(Schedule& schedule, std::int64_t day_start, int start_min, int end_min,
               int count, double metabolic_rate = 58.2) {
    ScheduleEntry e;
    e.start_time = day_start + static_cast<std::int64_t>(start_min) * 60;
    e.end_time = day_start + static_cast<std::int64_t>(end_min) * 60;
    e.occupant_count = count;
    e.profile.metabolic_rate = metabolic_rate;
    schedule.entries.push_back(e);
}

Preset office_preset(std::uint64_t seed) {
    Preset p;
    p.name = "office";
    p.room.geometry = {3.0, 4.0, 5.0};
    p.room.inflow = 0.6;
    p.room.outflow = 0.6;
    p.room.inlet_concentration = 420.0;
    p.room.initial_concentration = 420.0;
    p.start_time = kPresetStart;
    p.interval = 300;
    p.duration = 14 * kDay;
    // Sensor of the +-50 ppm accuracy class: gaussian noise plus a coarse
    // reporting grid.
    p.noise = {35.0, 50.0, seed};
    p.period = kDay / p.interval;
    p.max_lag_samples = lag_minutes_to_samples(upper_bound_lag(p.room.geometry), p.interval);

    // A single staff member who either settles in for a long stretch of desk
    // work or is away at the lab, with a lunch break splitting the day and
    // group meetings twice a week. Activity level varies block to block, so
    // the CO2 rise per person is not a single constant.
    static const Block slots[] = {{540, 665}, {755, 880}, {935, 1060}};
    static const double presence[] = {0.55, 0.4, 0.35};
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> jitter(-10, 10);
    std::uniform_real_distribution<double> activity(52.0, 72.0);

    for (int day = 0; day < 14; ++day) {
        const std::int64_t day_start = p.start_time + day * kDay;
        const int weekday = day % 7;
        // Draw the day's randomness unconditionally so weekday schedules do
        // not depend on how many weekend days precede them.
        bool present[3];
        int js[3], je[3];
        double met[3];
        for (int i = 0; i < 3; ++i) {
            present[i] = unit(rng) < presence[i];
            js[i] = jitter(rng);
            je[i] = jitter(rng);
            met[i] = activity(rng);
        }
        const int meeting_js = jitter(rng);
        const double meeting_met = activity(rng);
        if (weekday >= 5) continue; // vacant weekend

        for (int i = 0; i < 3; ++i) {
            if (!present[i]) continue;
            add_entry(p.schedule, day_start, slots[i].start_min + js[i],
                      slots[i].end_min + je[i], 1, met[i]);
        }
        if (weekday == 1 || weekday == 3) {
            // Short group meeting at 14:00; the host attends regardless of
            // the afternoon desk draw.
            const int from = 840 + meeting_js;
            const int to = from + 45;
            if (!present[1]) add_entry(p.schedule, day_start, from, to, 1, met[1]);
            add_entry(p.schedule, day_start, from, to, 2, meeting_met);
        }
    }
    return p;
}

Preset cinema_preset(std::uint64_t seed) {
    Preset p;
    p.name = "cinema";
    p.room.geometry = {30.0, 20.0, 10.0};
    p.room.inflow = 6.0;
    p.room.outflow = 6.0;
    p.room.inlet_concentration = 420.0;
    p.room.initial_concentration = 420.0;
    p.start_time = kPresetStart;
    p.interval = 180;
    p.duration = 23 * kDay;
    p.noise = {30.0, 1.0, seed};
    p.period = kDay / p.interval;
    p.max_lag_samples = lag_minutes_to_samples(upper_bound_lag(p.room.geometry), p.interval);

    static const Block shows[] = {{795, 900}, {960, 1080}, {1140, 1275}, {1305, 1410}};
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 2);
    std::uniform_int_distribution<int> base(20, 230);
    std::uniform_int_distribution<int> empty_house(0, 10);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> jitter(-5, 5);

    for (int day = 0; day < 23; ++day) {
        const std::int64_t day_start = p.start_time + day * kDay;
        const int weekday = day % 7;
        for (int s = 0; s < 4; ++s) {
            double attendance = base(rng);
            const bool nearly_empty = unit(rng) < 0.05;
            const int j = jitter(rng);
            if (nearly_empty) attendance = empty_house(rng);
            if (s >= 2) attendance *= 1.25;
            if (weekday >= 5) attendance *= 1.4;
            const int count = std::min(static_cast<int>(attendance), 300);
            if (count == 0) continue;
            add_entry(p.schedule, day_start, shows[s].start_min + j, shows[s].end_min + j,
                      count);
        }
    }
    return p;
}

} // namespace

Preset make_preset(const std::string& name, std::uint64_t seed) {
    if (name == "office") return office_preset(seed);
    if (name == "cinema") return cinema_preset(seed);
    throw ValidationError("unknown preset '" + name + "'; expected office or cinema");
}

} // namespace co2occ
