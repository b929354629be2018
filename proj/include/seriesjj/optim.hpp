#pragma once

// Nelder-Mead simplex and damped Gauss-Newton (Levenberg-Marquardt) minimizers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "seriesjj/errors.hpp"

namespace seriesjj::optim {

struct OptimizerConfig {
    std::size_t max_iterations{2000};
    double param_tol{1e-9};
    double objective_tol{1e-12};
    std::uint64_t seed{0};
    std::size_t starts{8};  // multi-start count for fits that use it

    void validate() const {
        seriesjj::detail::require(param_tol > 0.0 && objective_tol > 0.0, "OptimizerConfig: tolerances must be > 0");
        seriesjj::detail::require(starts >= 1, "OptimizerConfig: starts must be >= 1");
    }
};

struct FitResult {
    std::vector<double> params;
    double residual{0.0};  // objective value at params
    std::size_t iterations{0};
    bool converged{false};
    std::optional<Eigen::MatrixXd> covariance_estimate;
};

enum class Method { simplex, gauss_newton_damped };

using Objective = std::function<double(std::span<const double>)>;
using Residuals = std::function<std::vector<double>(std::span<const double>)>;

namespace detail {

inline double sum_of_squares(const std::vector<double>& r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return s;
}

inline double finite_or_inf(double v) { return std::isfinite(v) ? v : std::numeric_limits<double>::infinity(); }

inline bool all_finite(const std::vector<double>& r) {
    return std::all_of(r.begin(), r.end(), [](double v) { return std::isfinite(v); });
}

inline FitResult nelder_mead(const Objective& f, const std::vector<double>& x0, const OptimizerConfig& cfg) {
    const std::size_t n = x0.size();
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) {
        const double step = x0[i] != 0.0 ? 0.05 * x0[i] : 0.00025;
        simplex[i + 1][i] += step;
    }
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i <= n; ++i) values[i] = finite_or_inf(f(simplex[i]));

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<std::vector<double>> s(n + 1);
        std::vector<double> v(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            s[i] = std::move(simplex[order[i]]);
            v[i] = values[order[i]];
        }
        simplex = std::move(s);
        values = std::move(v);
    };
    auto diameter = [&] {
        double d = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t k = 0; k < n; ++k) d = std::max(d, std::abs(simplex[i][k] - simplex[0][k]));
        return d;
    };
    auto blend = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
        std::vector<double> out(n);
        for (std::size_t k = 0; k < n; ++k) out[k] = a[k] + t * (b[k] - a[k]);
        return out;
    };

    FitResult result;
    sort_simplex();
    std::size_t it = 0;
    for (; it < cfg.max_iterations; ++it) {
        if (diameter() < cfg.param_tol) {
            result.converged = true;
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);

        const auto reflected = blend(centroid, simplex[n], -alpha);
        const double f_r = finite_or_inf(f(reflected));
        if (f_r < values[0]) {
            const auto expanded = blend(centroid, simplex[n], -gamma);
            const double f_e = finite_or_inf(f(expanded));
            if (f_e < f_r) {
                simplex[n] = expanded;
                values[n] = f_e;
            } else {
                simplex[n] = reflected;
                values[n] = f_r;
            }
        } else if (f_r < values[n - 1]) {
            simplex[n] = reflected;
            values[n] = f_r;
        } else {
            const bool outside = f_r < values[n];
            const auto contracted = outside ? blend(centroid, reflected, rho) : blend(centroid, simplex[n], rho);
            const double f_c = finite_or_inf(f(contracted));
            if (f_c < (outside ? f_r : values[n])) {
                simplex[n] = contracted;
                values[n] = f_c;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    simplex[i] = blend(simplex[0], simplex[i], sigma);
                    values[i] = finite_or_inf(f(simplex[i]));
                }
            }
        }
        sort_simplex();
    }
    result.params = simplex[0];
    result.residual = values[0];
    result.iterations = it;
    return result;
}

/// Forward-difference Jacobian, step 1e-6 (1 + |x|).
inline std::optional<Eigen::MatrixXd> jacobian(const Residuals& r, const std::vector<double>& x,
                                               const std::vector<double>& r0) {
    const auto m = static_cast<Eigen::Index>(r0.size());
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd j(m, n);
    std::vector<double> xp = x;
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const double h = 1e-6 * (1.0 + std::abs(x[ku]));
        xp[ku] = x[ku] + h;
        const std::vector<double> rp = r(xp);
        xp[ku] = x[ku];
        if (rp.size() != r0.size() || !all_finite(rp)) return std::nullopt;
        for (Eigen::Index i = 0; i < m; ++i) j(i, k) = (rp[static_cast<std::size_t>(i)] - r0[static_cast<std::size_t>(i)]) / h;
    }
    return j;
}

inline FitResult levenberg_marquardt(const Residuals& r, const std::vector<double>& x0, const OptimizerConfig& cfg) {
    const std::size_t n = x0.size();
    std::vector<double> x = x0;
    std::vector<double> res = r(x);
    double f = sum_of_squares(res);

    FitResult result;
    double lambda = 1e-3;
    std::size_t it = 0;
    std::optional<Eigen::MatrixXd> jac;
    bool need_jacobian = true;

    while (it < cfg.max_iterations) {
        if (f == 0.0) {
            result.converged = true;
            break;
        }
        if (need_jacobian) {
            jac = jacobian(r, x, res);
            if (!jac) throw NumericalError("gauss-newton: non-finite residuals while forming the Jacobian");
            need_jacobian = false;
        }
        ++it;
        const Eigen::Map<const Eigen::VectorXd> rv(res.data(), static_cast<Eigen::Index>(res.size()));
        const Eigen::MatrixXd jtj = jac->transpose() * *jac;
        const Eigen::VectorXd grad = jac->transpose() * rv;
        Eigen::MatrixXd a = jtj;
        for (Eigen::Index k = 0; k < a.rows(); ++k) a(k, k) += lambda * std::max(jtj(k, k), 1e-12);
        const Eigen::VectorXd delta = a.ldlt().solve(-grad);

        std::vector<double> trial(n);
        for (std::size_t k = 0; k < n; ++k) trial[k] = x[k] + delta(static_cast<Eigen::Index>(k));
        const std::vector<double> trial_res = r(trial);
        const double f_trial = all_finite(trial_res) && delta.allFinite() ? sum_of_squares(trial_res)
                                                                          : std::numeric_limits<double>::infinity();
        if (f_trial < f) {
            const double decrease = f - f_trial;
            double x_norm = 0.0;
            for (double v : x) x_norm += v * v;
            const bool small_step = delta.norm() < cfg.param_tol * (1.0 + std::sqrt(x_norm));
            const bool small_decrease = decrease <= cfg.objective_tol * f;
            x = trial;
            res = trial_res;
            f = f_trial;
            lambda = std::max(lambda / 10.0, 1e-12);
            need_jacobian = true;
            if (small_step || small_decrease) {
                result.converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if (lambda > 1e16) {
                // no descent direction left at working precision
                result.converged = true;
                break;
            }
        }
    }

    result.params = x;
    result.residual = f;
    result.iterations = it;
    if (const auto j = jacobian(r, x, res); j && res.size() > n) {
        const Eigen::MatrixXd jtj = j->transpose() * *j;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
        if (lu.isInvertible()) {
            const double s2 = f / static_cast<double>(res.size() - n);
            result.covariance_estimate = s2 * lu.inverse();
        }
    }
    return result;
}

}  // namespace detail

/// Minimizes a scalar objective with the simplex method.
inline FitResult minimize(const Objective& objective, const std::vector<double>& x0, const OptimizerConfig& cfg = {}) {
    cfg.validate();
    seriesjj::detail::require(!x0.empty(), "minimize: empty parameter vector");
    if (!std::isfinite(objective(x0))) throw NumericalError("minimize: objective is not finite at x0");
    return detail::nelder_mead(objective, x0, cfg);
}

/// Minimizes the sum of squared residuals.
inline FitResult minimize(const Residuals& residuals, const std::vector<double>& x0, const OptimizerConfig& cfg,
                          Method method) {
    cfg.validate();
    seriesjj::detail::require(!x0.empty(), "minimize: empty parameter vector");
    const std::vector<double> r0 = residuals(x0);
    if (r0.empty() || !detail::all_finite(r0)) throw NumericalError("minimize: residuals are not finite at x0");
    if (method == Method::simplex) {
        const Objective f = [&](std::span<const double> x) { return detail::sum_of_squares(residuals(x)); };
        return detail::nelder_mead(f, x0, cfg);
    }
    return detail::levenberg_marquardt(residuals, x0, cfg);
}

/// Runs `cfg.starts` damped Gauss-Newton fits: one from x0 and the rest from x0 plus Gaussian
/// perturbations of width `spread` (seeded by cfg.seed). Returns the lowest-residual result.
/// Starts whose residuals are not finite are skipped.
inline FitResult multi_start(const Residuals& residuals, const std::vector<double>& x0, const OptimizerConfig& cfg,
                             double spread, std::span<const double> spread_scale = {}) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::optional<FitResult> best;
    std::size_t total_iterations = 0;
    for (std::size_t s = 0; s < cfg.starts; ++s) {
        std::vector<double> start = x0;
        if (s > 0) {
            for (std::size_t k = 0; k < start.size(); ++k) {
                const double scale = spread_scale.empty() ? 1.0 : spread_scale[k];
                start[k] += spread * scale * normal(rng);
            }
        }
        const std::vector<double> r0 = residuals(start);
        if (r0.empty() || !detail::all_finite(r0)) continue;
        FitResult fit;
        try {
            fit = detail::levenberg_marquardt(residuals, start, cfg);
        } catch (const NumericalError&) {
            continue;
        }
        total_iterations += fit.iterations;
        if (!best || fit.residual < best->residual) best = std::move(fit);
    }
    if (!best) throw NumericalError("multi_start: no start produced finite residuals");
    best->iterations = std::min(total_iterations, cfg.max_iterations * cfg.starts);
    return *best;
}

}  // namespace seriesjj::optim
