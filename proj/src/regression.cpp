#include "co2occ/regression.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace co2occ {

namespace {

struct SubsetFit {
    Eigen::VectorXd beta; ///< over scaled powers, aligned with the term list
    double rss = 0.0;
};

/// Least squares over the monomials u^terms[j] of pre-scaled u.
SubsetFit fit_subset(const Eigen::VectorXd& u, const Eigen::VectorXd& y,
                     const std::vector<int>& terms) {
    const Eigen::Index n = u.size();
    const Eigen::Index k = static_cast<Eigen::Index>(terms.size());
    Eigen::MatrixXd design(n, k);
    for (Eigen::Index j = 0; j < k; ++j)
        design.col(j) = u.array().pow(terms[static_cast<std::size_t>(j)]);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < k)
        throw CollinearityError("polynomial design matrix is rank deficient");
    SubsetFit fit;
    fit.beta = qr.solve(y);
    fit.rss = (y - design * fit.beta).squaredNorm();
    return fit;
}

} // namespace

double PolyModel::evaluate(double x) const {
    double acc = 0.0;
    for (Eigen::Index i = coefficients.size(); i-- > 0;) acc = acc * x + coefficients[i];
    return acc + residual_offset;
}

double pearson_r(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const Eigen::Index n = x.size();
    if (y.size() != n)
        throw ValidationError("pearson_r: lengths differ");
    if (n < 2)
        throw ValidationError("pearson_r: need at least two samples");
    const Eigen::VectorXd cx = x.array() - x.mean();
    const Eigen::VectorXd cy = y.array() - y.mean();
    const double sxx = cx.squaredNorm();
    const double syy = cy.squaredNorm();
    if (sxx <= 0.0 || syy <= 0.0)
        throw NoVarianceError("pearson_r: an input has zero variance");
    return cx.dot(cy) / std::sqrt(sxx * syy);
}

double aic(double rss, Eigen::Index n, int k) {
    if (k < 1)
        throw ValidationError("aic: parameter count must be at least 1");
    if (n <= k)
        throw ValidationError("aic: sample count must exceed parameter count");
    const double floored = std::max(rss, 1e-12);
    return static_cast<double>(n) * std::log(floored / static_cast<double>(n)) + 2.0 * k;
}

PolyModel fit_poly_m5(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int max_degree) {
    const Eigen::Index n = x.size();
    if (y.size() != n)
        throw ValidationError("fit_poly_m5: lengths differ");
    if (max_degree < 1)
        throw ValidationError("fit_poly_m5: max degree must be at least 1");
    if (n < max_degree + 2)
        throw ValidationError("fit_poly_m5: need at least max_degree + 2 samples");
    if ((x.array() == x[0]).all())
        throw NoVarianceError("fit_poly_m5: x values are all identical");

    // Scale x down by its largest magnitude; a pure scaling keeps every
    // monomial a monomial, so term elimination is unaffected.
    const double scale = std::max(x.cwiseAbs().maxCoeff(), 1e-300);
    const Eigen::VectorXd u = x / scale;

    std::vector<int> active(static_cast<std::size_t>(max_degree) + 1);
    for (int i = 0; i <= max_degree; ++i) active[static_cast<std::size_t>(i)] = i;

    SubsetFit current = fit_subset(u, y, active);
    double current_aic = aic(current.rss, n, static_cast<int>(active.size()));

    while (active.size() > 1) {
        double best_aic = current_aic;
        std::size_t best_idx = active.size();
        SubsetFit best_fit;
        for (std::size_t drop = 0; drop < active.size(); ++drop) {
            std::vector<int> candidate = active;
            candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(drop));
            SubsetFit fit = fit_subset(u, y, candidate);
            const double score = aic(fit.rss, n, static_cast<int>(candidate.size()));
            if (score < best_aic) {
                best_aic = score;
                best_idx = drop;
                best_fit = std::move(fit);
            }
        }
        if (best_idx == active.size()) break;
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_idx));
        current = std::move(best_fit);
        current_aic = best_aic;
    }

    PolyModel model;
    model.aic = current_aic;
    int top = 0;
    for (std::size_t j = 0; j < active.size(); ++j) top = std::max(top, active[j]);
    model.degree = top;
    model.coefficients = Eigen::VectorXd::Zero(top + 1);
    for (std::size_t j = 0; j < active.size(); ++j) {
        const int d = active[j];
        model.coefficients[d] = current.beta[static_cast<Eigen::Index>(j)] /
                                std::pow(scale, d);
    }

    double mean_residual = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (Eigen::Index c = model.coefficients.size(); c-- > 0;)
            acc = acc * x[i] + model.coefficients[c];
        mean_residual += y[i] - acc;
    }
    model.residual_offset = mean_residual / static_cast<double>(n);
    return model;
}

PolyModel correlate_trend(const Eigen::VectorXd& trend_co2, const Eigen::VectorXd& trend_occ,
                          int max_degree, double pcc_threshold) {
    if (trend_co2.size() != trend_occ.size())
        throw ValidationError("correlate_trend: lengths differ");
    const double r = pearson_r(trend_co2, trend_occ);

    const Eigen::VectorXd ax = trend_co2.cwiseAbs();
    const Eigen::VectorXd ay = trend_occ.cwiseAbs();
    if (r > pcc_threshold) return fit_poly_m5(ax, ay, max_degree);

    // Weak correlation: keep the pipeline alive with a plain line and flag it.
    const Eigen::Index n = ax.size();
    const double xbar = ax.mean();
    const double ybar = ay.mean();
    const Eigen::VectorXd cx = ax.array() - xbar;
    const double sxx = cx.squaredNorm();
    if (sxx <= 0.0)
        throw NoVarianceError("correlate_trend: trend has zero variance");
    const double slope = cx.dot(Eigen::VectorXd(ay.array() - ybar)) / sxx;
    PolyModel model;
    model.degree = 1;
    model.coefficients = Eigen::VectorXd(2);
    model.coefficients << ybar - slope * xbar, slope;
    double rss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double res = ay[i] - (model.coefficients[0] + model.coefficients[1] * ax[i]);
        rss += res * res;
    }
    model.aic = aic(rss, n, 2);
    model.weakly_validated = true;
    return model;
}

} // namespace co2occ
