#include "co2occ/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace co2occ {

namespace {

Eigen::VectorXd convolve(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(a.size() + b.size() - 1);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

inline double tricube(double u) {
    const double t = 1.0 - u * u * u;
    return t * t * t;
}

} // namespace

Eigen::VectorXd composite_ma_kernel(int m, int n) {
    if (m < 1 || n < 1)
        throw ValidationError("moving-average terms must be positive");
    if ((m + n) % 2 != 0)
        throw ValidationError("moving-average terms " + std::to_string(m) + "x" +
                              std::to_string(n) +
                              " have unequal parity; the composite cannot be centred");
    return convolve(Eigen::VectorXd::Constant(m, 1.0 / m),
                    Eigen::VectorXd::Constant(n, 1.0 / n));
}

Eigen::VectorXd centered_period_kernel(Eigen::Index period) {
    if (period < 2)
        throw ValidationError("period must be at least 2");
    if (period % 2 == 1)
        return Eigen::VectorXd::Constant(period, 1.0 / static_cast<double>(period));
    return composite_ma_kernel(2, static_cast<int>(period));
}

Eigen::VectorXd apply_centered_kernel(const Eigen::VectorXd& v, const Eigen::VectorXd& kernel,
                                      EdgePolicy edges) {
    const Eigen::Index n = v.size();
    const Eigen::Index L = kernel.size();
    if (L % 2 == 0)
        throw ValidationError("centred kernel length must be odd");
    const Eigen::Index c = (L - 1) / 2;

    Eigen::VectorXd out(n);
    const bool clamp = edges == EdgePolicy::ClampWindow && L <= n;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (clamp) {
            const Eigen::Index start = std::clamp<Eigen::Index>(i - c, 0, n - L);
            out[i] = kernel.dot(v.segment(start, L));
            continue;
        }
        Eigen::Index lo, hi;
        if (edges == EdgePolicy::ShrinkAsymmetric) {
            lo = std::max<Eigen::Index>(-c, -i);
            hi = std::min<Eigen::Index>(c, n - 1 - i);
        } else {
            const Eigen::Index d = std::min({c, i, n - 1 - i});
            lo = -d;
            hi = d;
        }
        double acc = 0.0;
        double wsum = 0.0;
        for (Eigen::Index j = lo; j <= hi; ++j) {
            const double w = kernel[c + j];
            acc += w * v[i + j];
            wsum += w;
        }
        out[i] = acc / wsum;
    }
    return out;
}

Eigen::VectorXd moving_average(const Eigen::VectorXd& v, int m, int n) {
    const Eigen::VectorXd kernel = composite_ma_kernel(m, n);
    if (v.size() <= m + n)
        throw ValidationError("series of length " + std::to_string(v.size()) +
                              " is too short for a " + std::to_string(m) + "x" +
                              std::to_string(n) + " moving average");
    return apply_centered_kernel(v, kernel);
}

SampledSeries moving_average(const SampledSeries& s, int m, int n) {
    validate(s);
    SampledSeries out = s;
    out.values = moving_average(s.values, m, n);
    return out;
}

Eigen::VectorXd henderson_weights(int terms) {
    if (terms != 5 && terms != 9 && terms != 13 && terms != 23)
        throw ValidationError("Henderson filter supports 5, 9, 13 or 23 terms");
    const int p = (terms - 1) / 2;
    const double m = p + 2;
    Eigen::VectorXd w(terms);
    const double denom = 8.0 * m * (m * m - 1.0) * (4.0 * m * m - 1.0) *
                         (4.0 * m * m - 9.0) * (4.0 * m * m - 25.0);
    for (int j = -p; j <= p; ++j) {
        const double jj = static_cast<double>(j) * j;
        w[j + p] = 315.0 * ((m - 1.0) * (m - 1.0) - jj) * (m * m - jj) *
                   ((m + 1.0) * (m + 1.0) - jj) * (3.0 * m * m - 16.0 - 11.0 * jj) / denom;
    }
    return w;
}

Eigen::VectorXd henderson(const Eigen::VectorXd& v, int terms) {
    const Eigen::VectorXd w = henderson_weights(terms);
    const Eigen::Index n = v.size();
    if (n <= terms)
        throw ValidationError("series of length " + std::to_string(n) +
                              " is too short for a " + std::to_string(terms) +
                              "-term Henderson filter");
    const Eigen::Index p = (terms - 1) / 2;
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index lo = std::max<Eigen::Index>(-p, -i);
        const Eigen::Index hi = std::min<Eigen::Index>(p, n - 1 - i);
        double acc = 0.0;
        double wsum = 0.0;
        for (Eigen::Index j = lo; j <= hi; ++j) {
            acc += w[p + j] * v[i + j];
            wsum += w[p + j];
        }
        out[i] = acc / wsum;
    }
    return out;
}

SampledSeries henderson(const SampledSeries& s, int terms) {
    validate(s);
    SampledSeries out = s;
    out.values = henderson(s.values, terms);
    return out;
}

Eigen::VectorXd loess(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                      Eigen::Index span, int degree,
                      const Eigen::VectorXd* robustness_weights, LoessFallback fallback) {
    const Eigen::Index n = xs.size();
    if (ys.size() != n)
        throw ValidationError("loess: xs and ys lengths differ");
    if (degree < 0 || degree > 2)
        throw ValidationError("loess: degree must be 0, 1 or 2");
    for (Eigen::Index i = 1; i < n; ++i)
        if (!(xs[i] > xs[i - 1]))
            throw ValidationError("loess: xs must be strictly increasing");
    if (robustness_weights && robustness_weights->size() != n)
        throw ValidationError("loess: robustness weight length differs from data");

    const Eigen::Index q = std::min(span, n);
    if (q < degree + 2)
        throw ValidationError("loess: span leaves fewer than degree + 2 points");

    Eigen::VectorXd fitted(n);
    Eigen::VectorXd w(q);
    for (Eigen::Index i = 0; i < n; ++i) {
        // Contiguous nearest-neighbour window around x[i].
        Eigen::Index lo = i;
        Eigen::Index hi = i;
        while (hi - lo + 1 < q) {
            if (lo == 0) {
                ++hi;
            } else if (hi == n - 1) {
                --lo;
            } else if (xs[i] - xs[lo - 1] <= xs[hi + 1] - xs[i]) {
                --lo;
            } else {
                ++hi;
            }
        }
        const double h = std::max(xs[i] - xs[lo], xs[hi] - xs[i]);

        double wsum = 0.0;
        Eigen::Index positive = 0;
        for (Eigen::Index j = lo; j <= hi; ++j) {
            const double dist = std::abs(xs[j] - xs[i]);
            double wt = h > 0.0 ? (dist < h ? tricube(dist / h) : 0.0) : 1.0;
            if (robustness_weights) wt *= (*robustness_weights)[j];
            w[j - lo] = wt;
            wsum += wt;
            if (wt > 0.0) ++positive;
        }
        if (wsum <= 0.0) {
            if (fallback == LoessFallback::Strict)
                throw DegenerateNeighborhoodError(
                    "loess: neighbourhood of x[" + std::to_string(i) +
                    "] has no points with positive weight");
            std::vector<double> window(ys.data() + lo, ys.data() + hi + 1);
            const std::size_t mid = window.size() / 2;
            std::nth_element(window.begin(), window.begin() + mid, window.end());
            fitted[i] = window[mid];
            continue;
        }
        const auto weighted_mean = [&] {
            double acc = 0.0;
            for (Eigen::Index j = lo; j <= hi; ++j) acc += w[j - lo] * ys[j];
            return acc / wsum;
        };
        if (positive < degree + 1) {
            if (fallback == LoessFallback::Strict)
                throw DegenerateNeighborhoodError(
                    "loess: neighbourhood of x[" + std::to_string(i) +
                    "] has fewer than degree + 1 points with positive weight");
            fitted[i] = weighted_mean();
            continue;
        }

        // Weighted normal equations on x - x[i]; the fitted value is the
        // constant coefficient.
        const int k = degree + 1;
        Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
        Eigen::Vector3d r = Eigen::Vector3d::Zero();
        for (Eigen::Index j = lo; j <= hi; ++j) {
            const double wt = w[j - lo];
            if (wt == 0.0) continue;
            const double u = xs[j] - xs[i];
            double pw[3] = {1.0, u, u * u};
            for (int a = 0; a < k; ++a) {
                r[a] += wt * pw[a] * ys[j];
                for (int b = a; b < k; ++b) G(a, b) += wt * pw[a] * pw[b];
            }
        }
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < a; ++b) G(a, b) = G(b, a);

        const auto Gk = G.topLeftCorner(k, k);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(Gk);
        if (!lu.isInvertible()) {
            if (fallback == LoessFallback::Strict)
                throw DegenerateNeighborhoodError(
                    "loess: singular local fit at x[" + std::to_string(i) + "]");
            fitted[i] = weighted_mean();
            continue;
        }
        const Eigen::VectorXd beta = lu.solve(r.head(k));
        fitted[i] = beta[0];
    }
    return fitted;
}

} // namespace co2occ
