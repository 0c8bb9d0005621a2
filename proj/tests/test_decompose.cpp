#include <doctest.h>

#include <cmath>

#include "co2occ/decompose.hpp"
#include "helpers.hpp"

using namespace co2occ;
using co2occ::testing::random_vector;
using co2occ::testing::series;

namespace {

SampledSeries sine_series(Eigen::Index n, Eigen::Index period, double amplitude,
                          double slope = 0.0, double offset = 0.0, std::uint64_t noise_seed = 0,
                          double noise_scale = 0.0) {
    Eigen::VectorXd v(n);
    for (Eigen::Index t = 0; t < n; ++t)
        v[t] = amplitude * std::sin(2.0 * M_PI * static_cast<double>(t) /
                                    static_cast<double>(period)) +
               slope * static_cast<double>(t) + offset;
    if (noise_scale > 0.0) v += noise_scale * random_vector(n, noise_seed);
    SampledSeries s;
    s.start_time = 0;
    s.interval = 300;
    s.values = std::move(v);
    return s;
}

void check_reconstruction(const ComponentSet& c, const SampledSeries& src) {
    const double scale = std::max(1.0, src.values.cwiseAbs().maxCoeff());
    for (Eigen::Index t = 0; t < src.size(); ++t) {
        const double sum = c.trend.values[t] + c.seasonal.values[t] + c.irregular.values[t];
        CHECK(std::abs(sum - src.values[t]) <= 1e-9 * scale);
    }
}

double fitted_slope(const Eigen::VectorXd& v, Eigen::Index lo, Eigen::Index hi) {
    const Eigen::Index n = hi - lo;
    const Eigen::VectorXd xs = Eigen::VectorXd::LinSpaced(n, 0.0, static_cast<double>(n - 1));
    const Eigen::VectorXd ys = v.segment(lo, n);
    const Eigen::VectorXd cx = xs.array() - xs.mean();
    return cx.dot(Eigen::VectorXd(ys.array() - ys.mean())) / cx.squaredNorm();
}

} // namespace

TEST_CASE("std decomposition of a pure sine isolates the seasonal") {
    const Eigen::Index period = 24;
    const SampledSeries s = sine_series(6 * period, period, 2.0);
    const ComponentSet c = decompose_std(s, period);
    check_reconstruction(c, s);

    double seasonal_err = 0.0;
    for (Eigen::Index t = 0; t < s.size(); ++t) {
        const double truth = 2.0 * std::sin(2.0 * M_PI * t / static_cast<double>(period));
        seasonal_err += std::pow(c.seasonal.values[t] - truth, 2.0);
        CHECK(std::abs(c.trend.values[t]) < 0.5);
    }
    seasonal_err = std::sqrt(seasonal_err / s.size());
    CHECK(seasonal_err <= 0.05 * 2.0);
}

TEST_CASE("std decomposition of a constant is trivial") {
    const SampledSeries s = series(Eigen::VectorXd::Constant(90, 3.5), 300);
    const ComponentSet c = decompose_std(s, 12);
    for (Eigen::Index t = 0; t < s.size(); ++t) {
        CHECK(c.trend.values[t] == doctest::Approx(3.5).epsilon(1e-9));
        CHECK(std::abs(c.seasonal.values[t]) < 1e-9);
        CHECK(std::abs(c.irregular.values[t]) < 1e-9);
    }
}

TEST_CASE("std decomposition recovers a ramp slope through a sine") {
    const Eigen::Index period = 24;
    const Eigen::Index n = 8 * period;
    const double slope = 0.05;
    const SampledSeries s = sine_series(n, period, 1.0, slope, 10.0);
    const ComponentSet c = decompose_std(s, period);
    const double got = fitted_slope(c.trend.values, period, n - period);
    CHECK(std::abs(got - slope) <= 0.05 * slope);
}

TEST_CASE("std seasonal sums to zero over every complete cycle") {
    const Eigen::Index period = 16;
    SampledSeries s = sine_series(5 * period + 7, period, 3.0, 0.01, 4.0, 91, 0.3);
    const ComponentSet c = decompose_std(s, period);
    for (Eigen::Index cycle = 0; cycle + 1 <= 5; ++cycle) {
        const double mean = c.seasonal.values.segment(cycle * period, period).mean();
        CHECK(std::abs(mean) < 1e-6);
    }
}

TEST_CASE("std decomposition rejects short series and bad periods") {
    const SampledSeries s = sine_series(30, 12, 1.0);
    CHECK_THROWS_AS(decompose_std(s, 12), ValidationError);   // < 3 periods
    CHECK_THROWS_AS(decompose_std(s, 1), ValidationError);    // period < 2
    CHECK_THROWS_AS(decompose_std(s, 16), ValidationError);   // period > n/2
}

TEST_CASE("stl decomposition of a constant is trivial") {
    const SampledSeries s = series(Eigen::VectorXd::Constant(100, -2.0), 300);
    const ComponentSet c = decompose_stl(s, StlParams::defaults(10));
    check_reconstruction(c, s);
    for (Eigen::Index t = 0; t < s.size(); ++t) {
        CHECK(std::abs(c.seasonal.values[t]) < 1e-9);
        CHECK(std::abs(c.irregular.values[t]) < 1e-9);
    }
}

TEST_CASE("stl separates sine plus ramp") {
    const Eigen::Index period = 24;
    const Eigen::Index n = 8 * period;
    const double slope = 0.03;
    const SampledSeries s = sine_series(n, period, 1.0, slope, 5.0);
    const ComponentSet c = decompose_stl(s, StlParams::defaults(period));
    check_reconstruction(c, s);

    double seasonal_err = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
        const double truth = std::sin(2.0 * M_PI * t / static_cast<double>(period));
        seasonal_err += std::pow(c.seasonal.values[t] - truth, 2.0);
    }
    seasonal_err = std::sqrt(seasonal_err / n);
    CHECK(seasonal_err <= 0.05);

    Eigen::Index miss = 0;
    for (Eigen::Index t = period; t < n - period; ++t) {
        const double ramp = slope * static_cast<double>(t) + 5.0;
        if (std::abs(c.trend.values[t] - ramp) > 0.05 * slope * static_cast<double>(n)) ++miss;
    }
    CHECK(miss == 0);
}

TEST_CASE("stl with robustness shrugs off outliers where std does not") {
    const Eigen::Index period = 24;
    const Eigen::Index n = 10 * period;
    const double amplitude = 1.0;
    const SampledSeries clean = sine_series(n, period, amplitude, 0.0, 0.0, 5, 0.1);
    SampledSeries spiked = clean;
    std::vector<Eigen::Index> spikes;
    for (Eigen::Index t = period + 3; t < n - period; t += 97) {
        spiked.values[t] += 10.0 * amplitude;
        spikes.push_back(t);
    }

    StlParams params = StlParams::defaults(period);
    params.outer_iterations = 2;
    const ComponentSet stl_clean = decompose_stl(clean, params);
    const ComponentSet stl_spiked = decompose_stl(spiked, params);
    const ComponentSet std_clean = decompose_std(clean, period);
    const ComponentSet std_spiked = decompose_std(spiked, period);

    double stl_dev = 0.0, std_dev = 0.0;
    for (Eigen::Index t : spikes) {
        stl_dev = std::max(stl_dev, std::abs(stl_spiked.trend.values[t] -
                                             stl_clean.trend.values[t]));
        std_dev = std::max(std_dev, std::abs(std_spiked.trend.values[t] -
                                             std_clean.trend.values[t]));
    }
    CHECK(stl_dev < std_dev);
    CHECK(stl_dev < 0.5 * amplitude);
    CHECK(std_dev > 1.0 * amplitude); // the Henderson trend swallows the spike
}

TEST_CASE("both decomposers are deterministic and shift-equivariant") {
    const Eigen::Index period = 12;
    SampledSeries s = sine_series(5 * period, period, 2.0, 0.02, 1.0, 7, 0.4);

    for (Method method : {Method::Std, Method::Stl}) {
        DecompositionConfig cfg;
        cfg.method = method;
        cfg.period = period;
        const ComponentSet a = decompose(s, cfg);
        const ComponentSet b = decompose(s, cfg);
        CHECK(a.trend.values == b.trend.values);
        CHECK(a.seasonal.values == b.seasonal.values);
        CHECK(a.irregular.values == b.irregular.values);

        SampledSeries shifted = s;
        shifted.values.array() += 50.0;
        const ComponentSet c = decompose(shifted, cfg);
        for (Eigen::Index t = 0; t < s.size(); ++t) {
            CHECK(std::abs(c.trend.values[t] - a.trend.values[t] - 50.0) < 1e-6);
            CHECK(std::abs(c.seasonal.values[t] - a.seasonal.values[t]) < 1e-6);
            CHECK(std::abs(c.irregular.values[t] - a.irregular.values[t]) < 1e-6);
        }
    }
}

TEST_CASE("stl rejects bad parameters") {
    const SampledSeries s = sine_series(50, 10, 1.0);
    StlParams p = StlParams::defaults(10);
    p.seasonal_span = 6;
    CHECK_THROWS_AS(decompose_stl(s, p), ValidationError);
    p = StlParams::defaults(10);
    p.inner_iterations = 0;
    CHECK_THROWS_AS(decompose_stl(s, p), ValidationError);
    CHECK_THROWS_AS(decompose_stl(sine_series(15, 10, 1.0), StlParams::defaults(10)),
                    ValidationError);
}
