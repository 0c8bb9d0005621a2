#include <doctest.h>

#include <cmath>
#include <vector>

#include "co2occ/regression.hpp"
#include "helpers.hpp"

using namespace co2occ;
using co2occ::testing::random_vector;

TEST_CASE("pearson_r on identical and negated data") {
    const Eigen::VectorXd x = random_vector(50, 3);
    CHECK(pearson_r(x, x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pearson_r(x, Eigen::VectorXd(-x)) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pearson_r matches the direct product-moment formula") {
    const Eigen::Index n = 100;
    const Eigen::VectorXd x = random_vector(n, 5);
    const Eigen::VectorXd y = 0.4 * x + random_vector(n, 6);
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    const double expected = (n * sxy - sx * sy) /
                            std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    CHECK(pearson_r(x, y) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("pearson_r is invariant under positive affine maps") {
    const Eigen::VectorXd x = random_vector(64, 9);
    const Eigen::VectorXd y = random_vector(64, 10);
    const double r = pearson_r(x, y);
    CHECK(pearson_r(Eigen::VectorXd(3.0 * x.array() + 11.0), y) ==
          doctest::Approx(r).epsilon(1e-10));
    CHECK(pearson_r(x, Eigen::VectorXd(0.25 * y.array() - 4.0)) ==
          doctest::Approx(r).epsilon(1e-10));
    CHECK(pearson_r(Eigen::VectorXd(-2.0 * x.array()), y) ==
          doctest::Approx(-r).epsilon(1e-10));
}

TEST_CASE("pearson_r rejects degenerate input") {
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(10, 2.0);
    const Eigen::VectorXd y = random_vector(10, 1);
    CHECK_THROWS_AS(pearson_r(x, y), NoVarianceError);
    CHECK_THROWS_AS(pearson_r(y, x), NoVarianceError);
    CHECK_THROWS_AS(pearson_r(y.head(1), x.head(1)), ValidationError);
}

TEST_CASE("aic evaluates the concentrated-likelihood form") {
    CHECK(aic(100.0, 100, 3) == doctest::Approx(6.0).epsilon(1e-12));
    const double base = aic(42.0, 77, 2);
    CHECK(aic(42.0, 77, 3) == doctest::Approx(base + 2.0).epsilon(1e-12));
    // rss floor keeps the score finite
    CHECK(std::isfinite(aic(0.0, 50, 1)));
    CHECK_THROWS_AS(aic(1.0, 3, 3), ValidationError);
    CHECK_THROWS_AS(aic(1.0, 10, 0), ValidationError);
}

TEST_CASE("aic ranks two candidate models like the direct formula") {
    const Eigen::Index n = 60;
    const double rss_a = 14.0, rss_b = 9.0;
    const int k_a = 2, k_b = 4;
    const double direct_a = n * std::log(rss_a / n) + 2 * k_a;
    const double direct_b = n * std::log(rss_b / n) + 2 * k_b;
    CHECK((aic(rss_a, n, k_a) < aic(rss_b, n, k_b)) == (direct_a < direct_b));
}

namespace {

double poly_eval(const Eigen::VectorXd& coeffs, double x) {
    double acc = 0.0;
    for (Eigen::Index i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

/// Exhaustive best-AIC subset search over monomials {x^0..x^max_degree}.
std::pair<std::vector<int>, double> best_subset(const Eigen::VectorXd& x,
                                                const Eigen::VectorXd& y, int max_degree) {
    const Eigen::Index n = x.size();
    std::vector<int> best_terms;
    double best_aic = 0.0;
    bool first = true;
    for (unsigned mask = 1; mask < (1u << (max_degree + 1)); ++mask) {
        std::vector<int> terms;
        for (int d = 0; d <= max_degree; ++d)
            if (mask & (1u << d)) terms.push_back(d);
        Eigen::MatrixXd design(n, static_cast<Eigen::Index>(terms.size()));
        for (std::size_t j = 0; j < terms.size(); ++j)
            design.col(static_cast<Eigen::Index>(j)) = x.array().pow(terms[j]);
        const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(y);
        const double rss = (y - design * beta).squaredNorm();
        const double score = aic(rss, n, static_cast<int>(terms.size()));
        if (first || score < best_aic) {
            best_aic = score;
            best_terms = terms;
            first = false;
        }
    }
    return {best_terms, best_aic};
}

std::vector<int> surviving_terms(const PolyModel& m) {
    std::vector<int> terms;
    for (Eigen::Index d = 0; d < m.coefficients.size(); ++d)
        if (m.coefficients[d] != 0.0) terms.push_back(static_cast<int>(d));
    return terms;
}

} // namespace

TEST_CASE("fit_poly_m5 keeps only the line for linear data") {
    const Eigen::Index n = 40;
    const Eigen::VectorXd x = random_vector(n, 12, -2.0, 2.0);
    const Eigen::VectorXd y = 2.0 * x.array() + 1.0;
    const PolyModel m = fit_poly_m5(x, y, 3);
    const std::vector<int> terms = surviving_terms(m);
    REQUIRE(terms == std::vector<int>{0, 1});
    CHECK(m.coefficients[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(m.coefficients[1] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(m.residual_offset == doctest::Approx(0.0).epsilon(1e-10));

    const auto [oracle_terms, oracle_aic] = best_subset(x, y, 3);
    CHECK(terms == oracle_terms);
    CHECK(m.aic == doctest::Approx(oracle_aic).epsilon(1e-9));
}

TEST_CASE("fit_poly_m5 collapses constant data to the intercept") {
    const Eigen::VectorXd x = random_vector(30, 8, 0.0, 5.0);
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(30, 4.25);
    const PolyModel m = fit_poly_m5(x, y, 3);
    CHECK(m.degree == 0);
    CHECK(m.coefficients.size() == 1);
    CHECK(m.coefficients[0] == doctest::Approx(4.25).epsilon(1e-9));
}

TEST_CASE("fit_poly_m5 retains an exact quadratic") {
    const Eigen::VectorXd x = random_vector(50, 14, -3.0, 3.0);
    const Eigen::VectorXd y = x.array().square();
    const PolyModel m = fit_poly_m5(x, y, 2);
    REQUIRE(m.degree == 2);
    CHECK(std::abs(m.coefficients[2] - 1.0) <= 1e-6);
    // Normal-equations oracle for the full quadratic
    Eigen::MatrixXd design(x.size(), 3);
    design.col(0).setOnes();
    design.col(1) = x;
    design.col(2) = x.array().square();
    const Eigen::VectorXd beta =
        (design.transpose() * design).ldlt().solve(design.transpose() * y);
    CHECK(beta[2] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("fit_poly_m5 final AIC never exceeds the full-model AIC") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Eigen::Index n = 60;
        const Eigen::VectorXd x = random_vector(n, 100 + seed, -2.0, 2.0);
        const Eigen::VectorXd noise = random_vector(n, 200 + seed, -0.3, 0.3);
        const Eigen::VectorXd y = 0.5 * x.array() + 0.25 * x.array().square() + noise.array();
        const PolyModel m = fit_poly_m5(x, y, 4);

        Eigen::MatrixXd design(n, 5);
        for (int d = 0; d <= 4; ++d) design.col(d) = x.array().pow(d);
        const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(y);
        const double full_aic = aic((y - design * beta).squaredNorm(), n, 5);
        CHECK(m.aic <= full_aic + 1e-9);
    }
}

TEST_CASE("fit_poly_m5 error paths") {
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(10, 1.0);
    const Eigen::VectorXd y = random_vector(10, 2);
    CHECK_THROWS_AS(fit_poly_m5(x, y, 2), NoVarianceError);
    CHECK_THROWS_AS(fit_poly_m5(y.head(3), y.head(3), 3), ValidationError);
}

TEST_CASE("correlate_trend recovers a proportional map without flags") {
    const Eigen::VectorXd t_c = random_vector(120, 31, 400.0, 900.0);
    const Eigen::VectorXd t_o = 0.01 * t_c;
    const PolyModel m = correlate_trend(t_c, t_o, 3, 0.7);
    CHECK_FALSE(m.weakly_validated);
    for (double v : {450.0, 600.0, 850.0})
        CHECK(m.evaluate(v) == doctest::Approx(0.01 * v).epsilon(1e-6));
}

TEST_CASE("correlate_trend flags decorrelated inputs and still fits a line") {
    const Eigen::VectorXd t_c = random_vector(200, 41, 400.0, 900.0);
    const Eigen::VectorXd t_o = random_vector(200, 42, 0.0, 3.0);
    const PolyModel m = correlate_trend(t_c, t_o, 3, 0.7);
    CHECK(m.weakly_validated);
    CHECK(m.degree == 1);
}

TEST_CASE("correlate_trend keeps a quadratic term when it is real") {
    const Eigen::VectorXd t_c = random_vector(300, 51, 300.0, 1000.0);
    const Eigen::VectorXd noise = random_vector(300, 52, -0.05, 0.05);
    const Eigen::VectorXd t_o =
        0.5 * t_c.array() + 0.001 * t_c.array().square() + noise.array();
    REQUIRE(pearson_r(t_c, t_o) > 0.7);
    const PolyModel m = correlate_trend(t_c, t_o, 3, 0.7);
    CHECK_FALSE(m.weakly_validated);
    REQUIRE(m.degree >= 2);
    CHECK(std::abs(m.coefficients[2] - 0.001) <= 0.1 * 0.001);
}
