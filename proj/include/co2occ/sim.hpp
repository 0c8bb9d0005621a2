#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "co2occ/lag.hpp"
#include "co2occ/series.hpp"

namespace co2occ {

struct OccupantProfile {
    double metabolic_rate = 58.2;       ///< W/m^2
    double respiratory_quotient = 0.83; ///< dimensionless, in (0.6, 1.1)
    double height_cm = 170.0;
    double weight_kg = 70.0;
};

/// Exhaled CO2 flow M * RQ * sqrt(H * W) / (21132 * (0.23 RQ + 0.77)).
/// The result is taken as litres per second; the simulator converts it to a
/// ppm-equivalent source as rate * 1e-3 m^3/s * 1e6 / volume.
double exhalation_rate(const OccupantProfile& p);

struct RoomModel {
    RoomGeometry geometry;
    double inflow = 0.0;                 ///< m^3/s
    double outflow = 0.0;                ///< m^3/s
    double inlet_concentration = 420.0;  ///< ppm
    double initial_concentration = 420.0;
};

struct ScheduleEntry {
    std::int64_t start_time = 0; ///< UTC epoch seconds, inclusive
    std::int64_t end_time = 0;   ///< exclusive
    int occupant_count = 0;
    OccupantProfile profile;
};

/// Occupant groups over time; overlapping entries add up.
struct Schedule {
    std::vector<ScheduleEntry> entries;

    int occupants_at(std::int64_t t) const;
    /// Total exhaled CO2 in m^3/s at time t.
    double gas_rate_at(std::int64_t t) const;
};

struct SensorNoise {
    double sigma_ppm = 0.0;
    double quantization_ppm = 0.0;
    std::uint64_t seed = 0;
};

struct SimResult {
    SampledSeries co2;       ///< ppm, optionally noisy and quantised
    SampledSeries occupancy; ///< persons, exact
};

/// Integrate dC/dt = (inflow * C_in - outflow * C) / V + u_g * 1e6 / V by
/// forward Euler. When substeps_per_interval is zero the step is chosen
/// automatically, at most interval / 10 and well inside the stability bound;
/// an explicit value must keep the step below V / outflow or it is rejected.
SimResult simulate(const RoomModel& room, const Schedule& schedule,
                   std::int64_t start_time, std::int64_t interval, std::int64_t duration,
                   const std::optional<SensorNoise>& noise = std::nullopt,
                   int substeps_per_interval = 0);

struct Preset {
    std::string name;
    RoomModel room;
    Schedule schedule;
    std::int64_t start_time = 0;
    std::int64_t interval = 0;
    std::int64_t duration = 0;
    SensorNoise noise;
    std::int64_t utc_offset = 0;
    Eigen::Index period = 0; ///< samples per day at the preset interval
    Eigen::Index max_lag_samples = 0;
};

/// "office": 3x4x5 m staff room, one occupant with short meetings, lunch
/// gaps and vacant weekends, 5-minute sampling over 14 days starting on a
/// Monday. "cinema": 6000 m^3 hall with daily screenings of varying
/// attendance up to 300, 3-minute sampling over 23 days. The seed perturbs
/// event times and attendance deterministically.
Preset make_preset(const std::string& name, std::uint64_t seed = 0);

} // namespace co2occ
