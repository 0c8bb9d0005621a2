#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <random>

#include "co2occ/series.hpp"

namespace co2occ::testing {

inline SampledSeries series(std::initializer_list<double> values,
                            std::int64_t interval = 300, std::int64_t start = 0,
                            Unit unit = Unit::Dimensionless) {
    SampledSeries s;
    s.start_time = start;
    s.interval = interval;
    s.unit = unit;
    s.values.resize(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) s.values[i++] = v;
    return s;
}

inline SampledSeries series(Eigen::VectorXd values, std::int64_t interval = 300,
                            std::int64_t start = 0, Unit unit = Unit::Dimensionless) {
    SampledSeries s;
    s.start_time = start;
    s.interval = interval;
    s.unit = unit;
    s.values = std::move(values);
    return s;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed, double lo = -1.0,
                                     double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

} // namespace co2occ::testing
