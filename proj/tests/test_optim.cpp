#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "seriesjj/optim.hpp"

using namespace seriesjj;
using namespace seriesjj::optim;
using Catch::Approx;

namespace {

double rosenbrock(std::span<const double> x) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    return a * a + 100.0 * b * b;
}

std::vector<double> rosenbrock_residuals(std::span<const double> x) {
    return {1.0 - x[0], 10.0 * (x[1] - x[0] * x[0])};
}

}  // namespace

TEST_CASE("simplex finds a convex minimum", "[optim]") {
    const Objective f = [](std::span<const double> x) {
        return (x[0] - 3.0) * (x[0] - 3.0) + (x[1] + 1.0) * (x[1] + 1.0);
    };
    const auto fit = minimize(f, {0.0, 0.0});
    CHECK(fit.converged);
    CHECK(fit.params[0] == Approx(3.0).margin(1e-6));
    CHECK(fit.params[1] == Approx(-1.0).margin(1e-6));
    CHECK(fit.residual >= 0.0);
}

TEST_CASE("Rosenbrock from the standard start", "[optim]") {
    const auto simplex = minimize(Objective(rosenbrock), {-1.2, 1.0});
    CHECK(simplex.params[0] == Approx(1.0).margin(1e-4));
    CHECK(simplex.params[1] == Approx(1.0).margin(1e-4));

    const auto lm = minimize(Residuals(rosenbrock_residuals), {-1.2, 1.0}, {}, Method::gauss_newton_damped);
    CHECK(lm.converged);
    CHECK(lm.params[0] == Approx(1.0).margin(1e-4));
    CHECK(lm.params[1] == Approx(1.0).margin(1e-4));

    const auto simplex_ls = minimize(Residuals(rosenbrock_residuals), {-1.2, 1.0}, {}, Method::simplex);
    CHECK(simplex_ls.params[0] == Approx(1.0).margin(1e-4));
}

TEST_CASE("iteration budget is respected", "[optim]") {
    OptimizerConfig cfg;
    cfg.max_iterations = 1;
    const auto simplex = minimize(Objective(rosenbrock), {-1.2, 1.0}, cfg);
    CHECK_FALSE(simplex.converged);
    CHECK(simplex.iterations <= 1);
    const auto lm = minimize(Residuals(rosenbrock_residuals), {-1.2, 1.0}, cfg, Method::gauss_newton_damped);
    CHECK_FALSE(lm.converged);
    CHECK(lm.iterations <= 1);

    cfg.max_iterations = 50;
    cfg.starts = 3;
    const auto multi = multi_start(Residuals(rosenbrock_residuals), {-1.2, 1.0}, cfg, 0.1);
    CHECK(multi.iterations <= cfg.max_iterations * cfg.starts);
}

TEST_CASE("damped Gauss-Newton matches closed-form linear least squares", "[optim][oracle]") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> noise(0.0, 0.1);
    const int n = 40;
    Eigen::MatrixXd a(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        const double t = -1.0 + 2.0 * i / (n - 1.0);
        a(i, 0) = 1.0;
        a(i, 1) = t;
        a(i, 2) = t * t;
        y(i) = 0.5 - 2.0 * t + 3.0 * t * t + noise(rng);
    }
    const Eigen::VectorXd exact = a.colPivHouseholderQr().solve(y);
    const Residuals r = [&](std::span<const double> x) {
        const Eigen::Map<const Eigen::VectorXd> p(x.data(), 3);
        const Eigen::VectorXd d = a * p - y;
        return std::vector<double>(d.data(), d.data() + d.size());
    };
    const auto fit = minimize(r, {0.0, 0.0, 0.0}, {}, Method::gauss_newton_damped);
    REQUIRE(fit.converged);
    for (int k = 0; k < 3; ++k) CHECK(fit.params[k] == Approx(exact(k)).margin(1e-6));

    // covariance s^2 (A^T A)^-1
    REQUIRE(fit.covariance_estimate.has_value());
    const double s2 = (a * exact - y).squaredNorm() / (n - 3);
    const Eigen::MatrixXd cov = s2 * (a.transpose() * a).inverse();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK((*fit.covariance_estimate)(i, j) == Approx(cov(i, j)).epsilon(1e-4).margin(1e-10));
}

TEST_CASE("multi-start is deterministic per seed", "[optim][property]") {
    OptimizerConfig cfg;
    cfg.seed = 99;
    const auto a = multi_start(Residuals(rosenbrock_residuals), {-1.2, 1.0}, cfg, 0.5);
    const auto b = multi_start(Residuals(rosenbrock_residuals), {-1.2, 1.0}, cfg, 0.5);
    CHECK(a.params == b.params);
    CHECK(a.residual == b.residual);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("non-finite trial points are rejected, non-finite start is an error", "[optim]") {
    // log barrier: undefined for x <= 0, minimum at x = 1
    const Objective f = [](std::span<const double> x) { return x[0] - std::log(x[0]); };
    const auto fit = minimize(f, {0.01});
    CHECK(fit.params[0] == Approx(1.0).margin(1e-4));
    CHECK_THROWS_AS(minimize(f, {-1.0}), NumericalError);
    const Residuals bad = [](std::span<const double>) { return std::vector<double>{std::nan("")}; };
    CHECK_THROWS_AS(minimize(bad, {1.0}, {}, Method::gauss_newton_damped), NumericalError);
    CHECK_THROWS_AS(multi_start(bad, {1.0}, {}, 0.1), NumericalError);
}

TEST_CASE("optimizer configuration is validated", "[optim]") {
    OptimizerConfig cfg;
    cfg.param_tol = 0.0;
    CHECK_THROWS_AS(minimize(Objective(rosenbrock), {0.0, 0.0}, cfg), ValidationError);
    cfg = {};
    cfg.starts = 0;
    CHECK_THROWS_AS(multi_start(Residuals(rosenbrock_residuals), {0.0, 0.0}, cfg, 0.1), ValidationError);
    CHECK_THROWS_AS(minimize(Objective(rosenbrock), {}), ValidationError);
}
