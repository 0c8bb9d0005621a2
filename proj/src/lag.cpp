#include "co2occ/lag.hpp"

#include <cmath>
#include <string>

namespace co2occ {

Eigen::Index upper_bound_lag(const RoomGeometry& geom) {
    if (geom.length <= 0.0 || geom.width <= 0.0 || geom.height <= 0.0)
        throw ValidationError("room dimensions must be positive");
    const double ub = std::floor(geom.volume() / 100.0);
    return ub < 0.0 ? 0 : static_cast<Eigen::Index>(ub);
}

Eigen::Index lag_minutes_to_samples(Eigen::Index minutes, std::int64_t interval_seconds) {
    if (interval_seconds <= 0)
        throw ValidationError("interval must be positive");
    return static_cast<Eigen::Index>((minutes * 60) / interval_seconds);
}

LagFit fit_line(const AlignedPair& pair) {
    const Eigen::VectorXd& c = pair.co2.values;
    const Eigen::VectorXd& o = pair.occupancy.values;
    const Eigen::Index n = c.size();
    if (n < 2 || o.size() != n)
        throw ValidationError("fit_line: need an aligned pair of length >= 2");

    const double cbar = c.mean();
    const double obar = o.mean();
    const Eigen::VectorXd cc = c.array() - cbar;
    const double scc = cc.squaredNorm();
    if (scc <= 0.0)
        throw NoVarianceError("fit_line: CO2 values are all identical");

    LagFit fit;
    fit.lag = pair.lag_applied;
    fit.slope = cc.dot(Eigen::VectorXd(o.array() - obar)) / scc;
    fit.intercept = obar - fit.slope * cbar;
    return fit;
}

double nrmse(const LagFit& fit, const AlignedPair& pair) {
    const Eigen::VectorXd& c = pair.co2.values;
    const Eigen::VectorXd& o = pair.occupancy.values;
    const double range = o.maxCoeff() - o.minCoeff();
    if (range <= 0.0)
        throw NoVarianceError("nrmse: occupancy is constant, range is zero");
    const Eigen::VectorXd residual = o - (fit.slope * c).array().matrix() -
                                     Eigen::VectorXd::Constant(o.size(), fit.intercept);
    return std::sqrt(residual.squaredNorm() / static_cast<double>(o.size())) / range;
}

LagSelection select_lag(const SampledSeries& co2, const SampledSeries& occupancy,
                        Eigen::Index max_lag) {
    if (max_lag < 0)
        throw ValidationError("select_lag: max lag must be non-negative");

    LagSelection sel;
    sel.sweep.reserve(static_cast<std::size_t>(max_lag) + 1);
    double best = 0.0;
    for (Eigen::Index lag = 0; lag <= max_lag; ++lag) {
        AlignedPair pair = shift_and_trim(co2, occupancy, lag);
        if (pair.co2.size() < 2)
            throw ValidationError("select_lag: lag " + std::to_string(lag) +
                                  " leaves fewer than 2 aligned samples");
        LagFit fit;
        try {
            fit = fit_line(pair);
            fit.nrmse = nrmse(fit, pair);
        } catch (const NoVarianceError& e) {
            throw NoVarianceError("select_lag: lag " + std::to_string(lag) + ": " + e.what());
        }
        if (lag == 0 || fit.nrmse < best) {
            best = fit.nrmse;
            sel.lag = lag;
        }
        sel.sweep.push_back(fit);
    }
    return sel;
}

} // namespace co2occ
