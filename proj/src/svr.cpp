#include "co2occ/svr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace co2occ {

namespace {

/// Feature rows from an aligned CO2 vector: row t holds samples t, t-1, ...,
/// t-window+1, one row per target index window-1 .. n-1.
Eigen::MatrixXd build_features(const Eigen::VectorXd& co2, Eigen::Index window) {
    const Eigen::Index m = co2.size() - window + 1;
    Eigen::MatrixXd x(m, window);
    for (Eigen::Index t = 0; t < m; ++t)
        for (Eigen::Index j = 0; j < window; ++j) x(t, j) = co2[t + window - 1 - j];
    return x;
}

} // namespace

double svr_objective(const Eigen::VectorXd& weights, double bias, double epsilon, double c,
                     const Eigen::MatrixXd& features, const Eigen::VectorXd& targets) {
    double loss = 0.0;
    for (Eigen::Index i = 0; i < features.rows(); ++i) {
        const double r = std::abs(targets[i] - (features.row(i).dot(weights) + bias));
        loss += std::max(0.0, r - epsilon);
    }
    return 0.5 * weights.squaredNorm() + c * loss;
}

SvrModel fit_svr(const SampledSeries& co2, const SampledSeries& occupancy,
                 Eigen::Index lag, Eigen::Index window, double epsilon, double c,
                 int epochs, std::uint64_t seed) {
    if (window < 1)
        throw ValidationError("fit_svr: window must be at least 1");
    if (epochs < 1)
        throw ValidationError("fit_svr: need at least one epoch");
    if (epsilon < 0.0 || c <= 0.0)
        throw ValidationError("fit_svr: epsilon must be >= 0 and c > 0");

    const AlignedPair pair = shift_and_trim(co2, occupancy, lag);
    const Eigen::Index n = pair.co2.size();
    if (n <= window)
        throw ValidationError("fit_svr: aligned data no longer than the feature window");

    Eigen::MatrixXd x = build_features(pair.co2.values, window);
    const Eigen::VectorXd y = pair.occupancy.values.tail(x.rows());

    SvrModel model;
    model.epsilon = epsilon;
    model.c = c;
    model.lag = lag;
    model.window = window;
    model.feature_means = x.colwise().mean();
    model.feature_stds.resize(window);
    for (Eigen::Index j = 0; j < window; ++j) {
        const double var =
            (x.col(j).array() - model.feature_means[j]).square().sum() / x.rows();
        if (var <= 0.0)
            throw NoVarianceError("fit_svr: feature column " + std::to_string(j) +
                                  " has zero variance");
        model.feature_stds[j] = std::sqrt(var);
        x.col(j) = (x.col(j).array() - model.feature_means[j]) / model.feature_stds[j];
    }

    const Eigen::Index m = x.rows();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(window);
    double b = 0.0;
    double step_scale = 1.0;
    std::mt19937_64 rng(seed);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);

    double best = svr_objective(w, b, epsilon, c, x, y);
    model.objective_history.reserve(static_cast<std::size_t>(epochs));
    for (int e = 0; e < epochs; ++e) {
        const Eigen::VectorXd w_before = w;
        const double b_before = b;
        std::shuffle(order.begin(), order.end(), rng);
        const double eta = step_scale * 0.05 / (1.0 + 0.05 * e);
        for (Eigen::Index idx : order) {
            const double r = y[idx] - (x.row(idx).dot(w) + b);
            // Per-sample estimator of the objective: regulariser split evenly
            // across samples, hinge subgradient where outside the tube.
            w -= (eta / m) * w;
            if (std::abs(r) > epsilon) {
                const double sign = r > 0.0 ? 1.0 : -1.0;
                w += eta * c * sign * x.row(idx).transpose();
                b += eta * c * sign;
            }
        }
        const double now = svr_objective(w, b, epsilon, c, x, y);
        if (now > best) {
            // Roll the epoch back and retry smaller; keeps the epoch-boundary
            // objective non-increasing.
            w = w_before;
            b = b_before;
            step_scale *= 0.5;
            model.objective_history.push_back(best);
        } else {
            best = now;
            model.objective_history.push_back(now);
        }
    }

    model.weights = w;
    model.bias = b;
    const Eigen::Index tail = std::min<Eigen::Index>(window - 1, pair.co2.size());
    model.context = pair.co2.slice(pair.co2.size() - tail, tail);
    return model;
}

Eigen::VectorXd predict_svr_raw(const SvrModel& model, const SampledSeries& co2_future) {
    validate(co2_future);
    const Eigen::Index f = co2_future.size();
    if (f <= model.lag)
        throw ValidationError("predict_svr: future window no longer than the lag");

    const Eigen::Index ctx = model.context.size();
    Eigen::VectorXd chain(ctx + f);
    if (ctx > 0) chain.head(ctx) = model.context.values;
    chain.tail(f) = co2_future.values;

    const Eigen::Index count = f - model.lag;
    Eigen::VectorXd out(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        // Occupancy at future index i pairs with CO2 at chain index
        // ctx + i + lag; the window reaches back from there.
        const Eigen::Index top = ctx + i + model.lag;
        if (top - (model.window - 1) < 0)
            throw ValidationError("predict_svr: insufficient history for the feature window");
        double acc = model.bias;
        for (Eigen::Index j = 0; j < model.window; ++j)
            acc += model.weights[j] * (chain[top - j] - model.feature_means[j]) /
                   model.feature_stds[j];
        out[i] = std::max(acc, 0.0);
    }
    return out;
}

SampledSeries predict_svr(const SvrModel& model, const SampledSeries& co2_future) {
    const Eigen::VectorXd raw = predict_svr_raw(model, co2_future);
    SampledSeries out;
    out.start_time = co2_future.start_time;
    out.interval = co2_future.interval;
    out.unit = Unit::Persons;
    out.values = raw.unaryExpr([](double v) { return std::nearbyint(v); });
    return out;
}

} // namespace co2occ
