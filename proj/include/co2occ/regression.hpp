#pragma once

#include <Eigen/Dense>

#include "co2occ/errors.hpp"

namespace co2occ {

/// Polynomial map y = a0 + a1 x + ... + an x^n + residual_offset. Interior
/// zeros mark terms removed by AIC elimination; trailing zeros are trimmed so
/// degree reflects the highest surviving term.
struct PolyModel {
    Eigen::VectorXd coefficients; ///< a0..an over raw x
    double residual_offset = 0.0; ///< mean residual; zero when an intercept survives
    int degree = 0;
    double aic = 0.0;
    bool weakly_validated = false; ///< set when the correlation gate failed

    double evaluate(double x) const;
};

/// Pearson product-moment correlation coefficient in [-1, 1].
double pearson_r(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Gaussian concentrated-likelihood form n*ln(rss/n) + 2k. rss below 1e-12 is
/// floored there.
double aic(double rss, Eigen::Index n, int k);

/// Least-squares polynomial of max_degree followed by greedy backward
/// elimination: repeatedly drop the term whose removal lowers AIC the most,
/// while any removal improves it.
PolyModel fit_poly_m5(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int max_degree);

/// Trend-to-trend mapping gated by the correlation coefficient: above the
/// threshold, an M5 polynomial over absolute values; otherwise a plain
/// degree-1 fit flagged weakly_validated. Never aborts on a weak gate.
PolyModel correlate_trend(const Eigen::VectorXd& trend_co2, const Eigen::VectorXd& trend_occ,
                          int max_degree, double pcc_threshold);

} // namespace co2occ
