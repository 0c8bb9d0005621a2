#include "co2occ/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "co2occ/lag.hpp"

namespace co2occ {

DecompositionConfig TrainConfig::decomposition(Eigen::Index effective_period) const {
    DecompositionConfig d;
    d.method = method;
    d.period = effective_period;
    d.henderson_terms = henderson_terms;
    d.seasonal_span = seasonal_span;
    d.trend_span = trend_span;
    d.inner_iterations = inner_iterations;
    d.outer_iterations = outer_iterations;
    d.loess_degree = loess_degree;
    return d;
}

long long reconstruct(double trend, double seasonal, double irregular, double zpa) {
    const double sum = trend + seasonal + irregular + zpa;
    return static_cast<long long>(std::nearbyint(std::max(sum, 0.0)));
}

OccupancyModel train(const SampledSeries& co2, const SampledSeries& occupancy,
                     const TrainConfig& config) {
    validate(co2);
    validate(occupancy);
    if (co2.interval != occupancy.interval)
        throw ValidationError("train: CO2 and occupancy intervals differ");

    // Trim both series to their overlapping time range.
    const std::int64_t lo = std::max(co2.start_time, occupancy.start_time);
    const std::int64_t hi = std::min(co2.end_time(), occupancy.end_time());
    if (hi <= lo)
        throw ValidationError("train: series do not overlap");
    const auto window_of = [&](const SampledSeries& s) {
        const Eigen::Index first = static_cast<Eigen::Index>((lo - s.start_time) / s.interval);
        const Eigen::Index count = static_cast<Eigen::Index>((hi - lo) / s.interval);
        return s.slice(first, count);
    };
    const SampledSeries co2_t = window_of(co2);
    const SampledSeries occ_t = window_of(occupancy);

    OccupancyModel model;
    model.method = config.method;
    model.interval = co2.interval;
    model.utc_offset = config.utc_offset;
    model.period = config.period > 0 ? config.period
                                     : static_cast<Eigen::Index>(86400 / co2.interval);
    if (model.period < 2)
        throw ValidationError("train: derived period is shorter than 2 samples");

    const LagSelection lag_sel = select_lag(co2_t, occ_t, config.max_lag);
    model.lag = lag_sel.lag;

    const AlignedPair pair = shift_and_trim(co2_t, occ_t, model.lag);
    if (pair.co2.size() < 3 * model.period)
        throw ValidationError("train: aligned series spans fewer than 3 periods");
    model.training_start = pair.occupancy.start_time;
    model.training_end = pair.occupancy.end_time();

    const DecompositionConfig dc = config.decomposition(model.period);
    model.decomposition = dc;
    const ComponentSet comp_c = decompose(pair.co2, dc);
    const ComponentSet comp_o = decompose(pair.occupancy, dc);

    model.trend_model = correlate_trend(comp_c.trend.values, comp_o.trend.values,
                                        config.poly_max_degree, config.pcc_threshold);
    if (model.trend_model.weakly_validated)
        model.warnings.push_back(
            "trend correlation at or below threshold; linear fallback is weakly validated");

    const std::int64_t start_index =
        (pair.occupancy.start_time + config.utc_offset) / model.interval;
    const Eigen::Index day_samples = static_cast<Eigen::Index>(86400 / model.interval);
    const Eigen::Index anchor = static_cast<Eigen::Index>(start_index % day_samples);
    // Start the repeated-pattern search where the daily pattern climbs or
    // falls the fastest. A start value from a flat overnight stretch recurs
    // all night and lets the warping score accept a short night-to-night
    // match, and one at a local extremum almost never recurs within the
    // equality tolerance; a mid-slope value recurs once per cycle. Slope
    // phases are tried steepest-first until both series yield a motif.
    const Eigen::VectorXd phase_pattern = per_phase_means(comp_c.seasonal.values, model.period);
    std::vector<Eigen::Index> anchor_phases(static_cast<std::size_t>(model.period));
    for (Eigen::Index k = 0; k < model.period; ++k)
        anchor_phases[static_cast<std::size_t>(k)] = k;
    const auto gradient_at = [&](Eigen::Index k) {
        return std::abs(phase_pattern[(k + 1) % model.period] - phase_pattern[k]);
    };
    std::sort(anchor_phases.begin(), anchor_phases.end(),
              [&](Eigen::Index a, Eigen::Index b) { return gradient_at(a) > gradient_at(b); });

    // The smoothed seasonal repeats with the configured period by
    // construction, but an elastic score can certify an off-period candidate
    // on multi-featured days; among the anchors that yield a motif, keep the
    // one whose length is closest to the period.
    bool found = false;
    std::string last_error = "seasonal shorter than one candidate";
    int attempts = 0;
    std::vector<Eigen::Index> tried;
    SeasonalMotif best_c, best_o;
    Eigen::Index best_phase = 0;
    for (const Eigen::Index grad_phase : anchor_phases) {
        if (attempts >= 8) break;
        const Eigen::Index phase = (grad_phase + 1) % model.period;
        bool too_close = false;
        for (Eigen::Index t : tried)
            if (std::abs(t - phase) < model.period / 16) too_close = true;
        if (too_close) continue;
        tried.push_back(phase);
        ++attempts;
        try {
            const SeasonalMotif motif_c = find_repeated_sequence(
                comp_c.seasonal.slice(phase, comp_c.seasonal.size() - phase),
                config.dtw_threshold);
            const SeasonalMotif motif_o = find_repeated_sequence(
                comp_o.seasonal.slice(phase, comp_o.seasonal.size() - phase),
                config.dtw_threshold);
            if (!found || std::abs(motif_c.values.size() - model.period) <
                              std::abs(best_c.values.size() - model.period)) {
                best_c = motif_c;
                best_o = motif_o;
                best_phase = phase;
            }
            found = true;
        } catch (const AperiodicError& e) {
            last_error = e.what();
        }
    }
    if (found) {
        // The found motif fixes the pattern's length and phase; its values
        // are re-estimated as the mean over every occurrence in the training
        // span, which coincides with the first occurrence when the cycles
        // repeat exactly and averages their variation when they do not.
        const Eigen::Index len = best_o.values.size();
        const Eigen::VectorXd occ_seasonal =
            comp_o.seasonal.values.tail(comp_o.seasonal.size() - best_phase);
        const Eigen::Index occurrences = occ_seasonal.size() / len;
        if (occurrences > 1) {
            best_o.values.setZero();
            for (Eigen::Index k = 0; k < occurrences; ++k)
                best_o.values += occ_seasonal.segment(k * len, len);
            best_o.values /= static_cast<double>(occurrences);
        }
        model.seasonal_map = align_motifs(best_o, best_c,
                                          (anchor + best_phase) % day_samples,
                                          start_index + best_phase);
    } else {
        model.seasonal_map.occupancy_motif = per_phase_means(comp_o.seasonal.values, model.period);
        model.seasonal_map.phase_anchor = anchor;
        model.seasonal_map.anchor_index = start_index;
        model.warnings.push_back("aperiodic seasonal component (" + last_error +
                                 "); using the per-phase mean pattern");
    }

    model.irregular_model = fit_poly_m5(comp_c.irregular.values, comp_o.irregular.values,
                                        config.poly_max_degree);

    if (config.zpa_enabled) {
        try {
            model.zpa = learn_zpa(pair.occupancy, config.utc_offset);
        } catch (const ValidationError& e) {
            model.warnings.push_back(std::string("zero-pattern adjustment disabled: ") +
                                     e.what());
        }
    }

    const Eigen::Index tail = std::min<Eigen::Index>(3 * model.period, pair.co2.size());
    model.context = pair.co2.slice(pair.co2.size() - tail, tail);
    return model;
}

PredictionResult predict(const OccupancyModel& model, const SampledSeries& co2_future) {
    validate(co2_future);
    if (co2_future.interval != model.interval)
        throw ValidationError("predict: future interval differs from the training interval");
    const Eigen::Index f = co2_future.size();
    if (f <= model.lag)
        throw ValidationError("predict: future window no longer than the trained lag");

    PredictionResult result;
    if (f - model.lag < model.period)
        result.warnings.push_back(
            "future window shorter than one period; seasonal tiling covers a partial motif");

    // Decompose the training tail and the future window as one series so the
    // future region sits away from the filter endpoints. The future window is
    // level-matched onto the context first and the removed level restored on
    // the trend afterwards, which keeps the seam step out of the seasonal and
    // irregular paths and makes them exactly invariant to constant shifts of
    // the future window.
    SampledSeries chain = model.context;
    const Eigen::Index ctx = chain.size();
    const double level = ctx > 0 ? co2_future.values.mean() - model.context.values.mean()
                                 : 0.0;
    chain.values.conservativeResize(ctx + f);
    chain.values.tail(f) = co2_future.values.array() - level;
    if (ctx > 0 && co2_future.start_time != model.context.end_time())
        result.warnings.push_back(
            "future window is not contiguous with the training data; component "
            "estimates near the seam may degrade");

    const ComponentSet comps = decompose(chain, model.decomposition);

    const Eigen::Index count = f - model.lag;
    result.occupancy.start_time = co2_future.start_time;
    result.occupancy.interval = model.interval;
    result.occupancy.unit = Unit::Persons;
    result.occupancy.values.resize(count);
    result.raw.resize(count);
    result.zpa_mask.assign(static_cast<std::size_t>(count), false);

    auto component_series = [&](Unit unit) {
        SampledSeries s;
        s.start_time = co2_future.start_time;
        s.interval = model.interval;
        s.unit = unit;
        s.values.resize(count);
        return s;
    };
    result.components.period = model.period;
    result.components.method = model.method;
    result.components.trend = component_series(Unit::Dimensionless);
    result.components.seasonal = component_series(Unit::Dimensionless);
    result.components.irregular = component_series(Unit::Dimensionless);

    for (Eigen::Index i = 0; i < count; ++i) {
        const Eigen::Index c_idx = ctx + i + model.lag;
        const double trend =
            model.trend_model.evaluate(std::abs(comps.trend.values[c_idx] + level));
        const double irregular = model.irregular_model.evaluate(comps.irregular.values[c_idx]);
        const std::int64_t when = result.occupancy.time_at(i);
        const double seasonal =
            motif_at(model.seasonal_map, (when + model.utc_offset) / model.interval);

        double zpa_term = 0.0;
        if (model.zpa && model.zpa->contains(seconds_of_day(when, model.utc_offset))) {
            zpa_term = -(trend + seasonal + irregular);
            result.zpa_mask[static_cast<std::size_t>(i)] = true;
        }

        result.components.trend.values[i] = trend;
        result.components.seasonal.values[i] = seasonal;
        result.components.irregular.values[i] = irregular;
        result.raw[i] = std::max(trend + seasonal + irregular + zpa_term, 0.0);
        result.occupancy.values[i] =
            static_cast<double>(reconstruct(trend, seasonal, irregular, zpa_term));
    }
    return result;
}

} // namespace co2occ
