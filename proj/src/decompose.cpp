#include "co2occ/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "co2occ/smoothing.hpp"

namespace co2occ {

namespace {

/// Run an odd centred kernel along each phase subseries (samples i, i+p, ...).
/// Edge cycles pool their available one-sided neighbours; a symmetric shrink
/// would leave the first and last cycle entirely unsmoothed.
Eigen::VectorXd per_phase_filter(const Eigen::VectorXd& v, Eigen::Index period,
                                 const Eigen::VectorXd& kernel) {
    const Eigen::Index n = v.size();
    Eigen::VectorXd out(n);
    std::vector<double> sub;
    for (Eigen::Index phase = 0; phase < period; ++phase) {
        sub.clear();
        for (Eigen::Index i = phase; i < n; i += period) sub.push_back(v[i]);
        Eigen::Map<const Eigen::VectorXd> mapped(sub.data(),
                                                 static_cast<Eigen::Index>(sub.size()));
        const Eigen::VectorXd smoothed =
            apply_centered_kernel(mapped, kernel, EdgePolicy::ShrinkAsymmetric);
        Eigen::Index k = 0;
        for (Eigen::Index i = phase; i < n; i += period) out[i] = smoothed[k++];
    }
    return out;
}

/// Remove the slowly varying level from a raw seasonal estimate, then take
/// out each complete cycle's mean exactly so seasonal effects cancel over
/// every full period. The trailing partial cycle follows the last full one.
void center_seasonal(Eigen::VectorXd& s, Eigen::Index period) {
    s -= apply_centered_kernel(s, centered_period_kernel(period), EdgePolicy::ClampWindow);
    const Eigen::Index cycles = s.size() / period;
    double mean = 0.0;
    for (Eigen::Index c = 0; c < cycles; ++c) {
        mean = s.segment(c * period, period).mean();
        s.segment(c * period, period).array() -= mean;
    }
    const Eigen::Index tail = s.size() - cycles * period;
    if (tail > 0 && cycles > 0) s.tail(tail).array() -= mean;
}

ComponentSet make_components(const SampledSeries& src, Eigen::VectorXd trend,
                             Eigen::VectorXd seasonal, Eigen::Index period,
                             Method method) {
    ComponentSet out;
    out.period = period;
    out.method = method;
    // Components are signed deviations, not occupancy counts, whatever the
    // source unit was.
    out.trend = src;
    out.trend.unit = Unit::Dimensionless;
    out.trend.values = std::move(trend);
    out.seasonal = out.trend;
    out.seasonal.values = std::move(seasonal);
    out.irregular = out.trend;
    out.irregular.values = src.values - out.trend.values - out.seasonal.values;
    return out;
}

} // namespace

StlParams StlParams::defaults(Eigen::Index period) {
    StlParams p;
    p.period = period;
    p.seasonal_span = 7;
    const double nt = 1.5 * static_cast<double>(period) /
                      (1.0 - 1.5 / static_cast<double>(p.seasonal_span));
    Eigen::Index t = static_cast<Eigen::Index>(std::ceil(nt));
    if (t % 2 == 0) ++t;
    p.trend_span = std::max<Eigen::Index>(t, 3);
    return p;
}

StlParams DecompositionConfig::stl() const {
    StlParams p = StlParams::defaults(period);
    p.seasonal_span = seasonal_span;
    if (trend_span > 0) p.trend_span = trend_span;
    p.inner_iterations = inner_iterations;
    p.outer_iterations = outer_iterations;
    p.loess_degree = loess_degree;
    return p;
}

Eigen::VectorXd bisquare_weights(const Eigen::VectorXd& residuals) {
    Eigen::VectorXd abs_r = residuals.cwiseAbs();
    std::vector<double> sorted(abs_r.data(), abs_r.data() + abs_r.size());
    const std::size_t mid = sorted.size() / 2;
    std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
    const double h = 6.0 * sorted[mid];
    Eigen::VectorXd w(residuals.size());
    if (h <= 0.0) {
        w.setOnes();
        return w;
    }
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double u = abs_r[i] / h;
        w[i] = u < 1.0 ? (1.0 - u * u) * (1.0 - u * u) : 0.0;
    }
    return w;
}

Eigen::VectorXd per_phase_means(const Eigen::VectorXd& v, Eigen::Index period) {
    if (period < 1 || v.size() < period)
        throw ValidationError("per-phase means need at least one complete cycle");
    const Eigen::Index cycles = v.size() / period;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(period);
    for (Eigen::Index c = 0; c < cycles; ++c) out += v.segment(c * period, period);
    return out / static_cast<double>(cycles);
}

ComponentSet decompose_std(const SampledSeries& s, Eigen::Index period,
                           int henderson_terms) {
    validate(s);
    const Eigen::Index n = s.size();
    if (period < 2)
        throw ValidationError("decompose_std: period must be at least 2");
    if (period > n / 2)
        throw ValidationError("decompose_std: period larger than half the series");
    if (n < 3 * period)
        throw ValidationError("decompose_std: series must span at least 3 periods");

    const Eigen::VectorXd& y = s.values;
    static const Eigen::VectorXd k33 = composite_ma_kernel(3, 3);
    static const Eigen::VectorXd k35 = composite_ma_kernel(3, 5);

    // Pass one: rough trend, per-phase 3x3 seasonal.
    const Eigen::VectorXd rough_trend =
        apply_centered_kernel(y, centered_period_kernel(period), EdgePolicy::ClampWindow);
    Eigen::VectorXd seasonal1 = per_phase_filter(y - rough_trend, period, k33);
    center_seasonal(seasonal1, period);

    // Henderson re-estimate of the trend from the seasonally adjusted series.
    const Eigen::VectorXd trend = henderson(y - seasonal1, henderson_terms);

    // Pass two: per-phase 3x5 seasonal against the refined trend.
    Eigen::VectorXd seasonal2 = per_phase_filter(y - trend, period, k35);
    center_seasonal(seasonal2, period);

    return make_components(s, trend, std::move(seasonal2), period, Method::Std);
}

ComponentSet decompose_stl(const SampledSeries& s, const StlParams& params) {
    validate(s);
    const Eigen::Index n = s.size();
    const Eigen::Index p = params.period;
    if (p < 2)
        throw ValidationError("decompose_stl: period must be at least 2");
    if (n < 2 * p)
        throw ValidationError("decompose_stl: series must span at least 2 periods");
    if (params.seasonal_span < 3 || params.seasonal_span % 2 == 0)
        throw ValidationError("decompose_stl: seasonal span must be odd and >= 3");
    StlParams cfg = params;
    if (cfg.trend_span <= 0) cfg.trend_span = StlParams::defaults(p).trend_span;
    if (cfg.trend_span % 2 == 0)
        throw ValidationError("decompose_stl: trend span must be odd");
    if (cfg.inner_iterations < 1)
        throw ValidationError("decompose_stl: at least one inner iteration required");

    const Eigen::VectorXd& y = s.values;

    // Low-pass for the smoothed cycle-subseries: two period-length averages
    // and a 3-term average fused into one centred kernel, then a loess pass.
    Eigen::VectorXd low_kernel = Eigen::VectorXd::Constant(p, 1.0 / p);
    {
        Eigen::VectorXd tmp = Eigen::VectorXd::Zero(2 * p - 1);
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index j = 0; j < p; ++j) tmp[i + j] += low_kernel[i] / p;
        Eigen::VectorXd k3 = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
        Eigen::VectorXd full = Eigen::VectorXd::Zero(2 * p + 1);
        for (Eigen::Index i = 0; i < tmp.size(); ++i)
            for (Eigen::Index j = 0; j < 3; ++j) full[i + j] += tmp[i] * k3[j];
        low_kernel = full;
    }
    Eigen::Index low_span = p;
    if (low_span % 2 == 0) ++low_span;

    const Eigen::VectorXd xs = Eigen::VectorXd::LinSpaced(n, 0.0, static_cast<double>(n - 1));

    Eigen::VectorXd trend = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd seasonal = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd rho;
    bool use_rho = false;

    std::vector<double> sub_y, sub_r;
    for (int outer = 0; outer <= params.outer_iterations; ++outer) {
        for (int inner = 0; inner < cfg.inner_iterations; ++inner) {
            const Eigen::VectorXd detrended = y - trend;

            // Cycle-subseries smoothing.
            Eigen::VectorXd smoothed(n);
            for (Eigen::Index phase = 0; phase < p; ++phase) {
                sub_y.clear();
                sub_r.clear();
                for (Eigen::Index i = phase; i < n; i += p) {
                    sub_y.push_back(detrended[i]);
                    if (use_rho) sub_r.push_back(rho[i]);
                }
                const Eigen::Index m = static_cast<Eigen::Index>(sub_y.size());
                Eigen::Map<const Eigen::VectorXd> ymap(sub_y.data(), m);
                const Eigen::VectorXd sxs =
                    Eigen::VectorXd::LinSpaced(m, 0.0, static_cast<double>(m - 1));
                Eigen::VectorXd fit;
                if (m < cfg.loess_degree + 2) {
                    fit = Eigen::VectorXd::Constant(m, ymap.mean());
                } else {
                    Eigen::Map<const Eigen::VectorXd> rmap(sub_r.data(), m);
                    Eigen::VectorXd rcopy;
                    const Eigen::VectorXd* rw = nullptr;
                    if (use_rho) {
                        rcopy = rmap;
                        rw = &rcopy;
                    }
                    fit = loess(sxs, ymap, cfg.seasonal_span, cfg.loess_degree, rw,
                                LoessFallback::WeightedMean);
                }
                Eigen::Index k = 0;
                for (Eigen::Index i = phase; i < n; i += p) smoothed[i] = fit[k++];
            }

            const Eigen::VectorXd low =
                loess(xs, apply_centered_kernel(smoothed, low_kernel, EdgePolicy::ClampWindow),
                      low_span, 1, nullptr);
            seasonal = smoothed - low;

            trend = loess(xs, y - seasonal, cfg.trend_span, cfg.loess_degree,
                          use_rho ? &rho : nullptr, LoessFallback::WeightedMean);
        }
        if (outer < params.outer_iterations) {
            rho = bisquare_weights(y - trend - seasonal);
            use_rho = true;
        }
    }

    return make_components(s, std::move(trend), std::move(seasonal), p, Method::Stl);
}

ComponentSet decompose(const SampledSeries& s, const DecompositionConfig& config) {
    if (config.method == Method::Std)
        return decompose_std(s, config.period, config.henderson_terms);
    StlParams p = config.stl();
    p.period = config.period;
    return decompose_stl(s, p);
}

} // namespace co2occ
