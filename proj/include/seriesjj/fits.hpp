#pragma once

// Model fits: qubit spectrum vs field, lower envelope of the decay rate, and the
// fixed-slope Gamma_2 vs Gamma_1 line.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "seriesjj/coherence.hpp"
#include "seriesjj/errors.hpp"
#include "seriesjj/field.hpp"
#include "seriesjj/optim.hpp"

namespace seriesjj::fits {

struct SpectrumPoint {
    double b_mT;
    double nu01_ghz;
};

/// Order of the spectrum-fit parameter vector.
enum SpectrumParam : std::size_t { ej0_1, ej0_2, b_delta_1, b_delta_2, b_phi0_1, b_phi0_2, e_c, spectrum_param_count };

inline constexpr std::array<const char*, spectrum_param_count> spectrum_param_names{
    "ej0_1_GHz", "ej0_2_GHz", "b_delta_1_mT", "b_delta_2_mT", "b_phi0_1_mT", "b_phi0_2_mT", "e_c_GHz"};

/// true = held at its initial value. Default fits the six junction parameters with E_C fixed.
using FrozenMask = std::array<bool, spectrum_param_count>;
inline constexpr FrozenMask default_frozen{false, false, false, false, false, false, true};

inline std::array<double, spectrum_param_count> pack(const FieldModel& m) {
    return {m.jj1.ej0, m.jj2.ej0, m.jj1.b_delta, m.jj2.b_delta, m.jj1.b_phi0, m.jj2.b_phi0, m.e_c};
}

inline FieldModel unpack(const std::array<double, spectrum_param_count>& p, FieldModel base) {
    base.jj1 = {p[ej0_1], p[b_delta_1], p[b_phi0_1]};
    base.jj2 = {p[ej0_2], p[b_delta_2], p[b_phi0_2]};
    base.e_c = p[e_c];
    return base;
}

struct SpectrumFit {
    optim::FitResult result;  // params: full 7-vector in physical units
    FieldModel model;
    double initial_residual{0.0};
    std::size_t points_used{0};
};

/// Lowest nu01 a point may have and still be fitted: the single-junction transmon frequency at
/// E_J/E_C = regime.min_ej_over_ec. Below it the data sit on the cusp of a sinc node, where
/// the model is neither valid nor smooth.
inline double spectrum_floor_ghz(double e_c, const RegimeConfig& regime) {
    return std::sqrt(8.0 * regime.min_ej_over_ec) * e_c - e_c;
}

/// Least-squares fit of the approximate-spectrum omega01(B) to measured (B, nu01) points.
/// Free parameters are normalized by their initial values; the search is multi-start.
/// Points below spectrum_floor_ghz (near sinc nodes) are masked out.
inline SpectrumFit fit_spectrum(const std::vector<SpectrumPoint>& all_data, const FieldModel& initial,
                                const FrozenMask& frozen = default_frozen, const optim::OptimizerConfig& cfg = {},
                                const RegimeConfig& regime = {}) {
    initial.validate();
    for (const auto& p : all_data)
        seriesjj::detail::require(std::isfinite(p.b_mT) && std::isfinite(p.nu01_ghz), "fit_spectrum: non-finite data point");
    const double floor_ghz = spectrum_floor_ghz(initial.e_c, regime);
    std::vector<SpectrumPoint> data;
    for (const auto& p : all_data)
        if (p.nu01_ghz >= floor_ghz) data.push_back(p);
    seriesjj::detail::require(initial.jj1.b_phi0 > 0.0 && initial.jj2.b_phi0 > 0.0,
                    "fit_spectrum: degenerate initial guess (zero period)");
    const auto initial_params = pack(initial);
    std::vector<std::size_t> free;
    for (std::size_t k = 0; k < spectrum_param_count; ++k)
        if (!frozen[k]) free.push_back(k);
    seriesjj::detail::require(!free.empty(), "fit_spectrum: every parameter is frozen");
    if (data.size() < free.size() + 2)
        throw ValidationError("fit_spectrum: underdetermined (" + std::to_string(data.size()) + " usable points for " +
                              std::to_string(free.size()) + " free parameters; need at least " +
                              std::to_string(free.size() + 2) + ")");

    std::vector<double> scale(free.size());
    for (std::size_t i = 0; i < free.size(); ++i) {
        const double v = std::abs(initial_params[free[i]]);
        scale[i] = v > 0.0 ? v : 1.0;
    }
    auto to_model = [&](std::span<const double> x) {
        auto p = initial_params;
        for (std::size_t i = 0; i < free.size(); ++i) p[free[i]] = x[i] * scale[i];
        return unpack(p, initial);
    };
    const optim::Residuals residuals = [&](std::span<const double> x) {
        std::vector<double> r(data.size(), std::numeric_limits<double>::quiet_NaN());
        const FieldModel m = to_model(x);
        if (m.jj1.ej0 < 0.0 || m.jj2.ej0 < 0.0 || m.jj1.b_phi0 <= 0.0 || m.jj2.b_phi0 <= 0.0 || m.e_c <= 0.0)
            return r;
        try {
            for (std::size_t i = 0; i < data.size(); ++i)
                r[i] = qubit_frequency_at(m, data[i].b_mT).omega01 - data[i].nu01_ghz;
        } catch (const std::exception&) {
            std::fill(r.begin(), r.end(), std::numeric_limits<double>::quiet_NaN());
        }
        return r;
    };

    const std::vector<double> x0(free.size(), 1.0);
    const std::vector<double> r0 = residuals(x0);
    if (!optim::detail::all_finite(r0)) throw ValidationError("fit_spectrum: model is not evaluable at the initial guess");
    const double initial_residual = optim::detail::sum_of_squares(r0);

    // perturbations of 1% of each normalized parameter; offsets are perturbed on the
    // scale of their own period so a zero-centered offset still moves
    std::vector<double> spread_scale(free.size(), 1.0);
    for (std::size_t i = 0; i < free.size(); ++i) {
        if (free[i] == b_delta_1) spread_scale[i] = initial.jj1.b_phi0 / scale[i];
        if (free[i] == b_delta_2) spread_scale[i] = initial.jj2.b_phi0 / scale[i];
    }
    optim::FitResult best = optim::multi_start(residuals, x0, cfg, 0.01, spread_scale);
    if (best.residual > initial_residual) {
        // never report something worse than the initial guess
        best.params = x0;
        best.residual = initial_residual;
        best.converged = false;
        best.covariance_estimate.reset();
    }

    SpectrumFit out;
    out.model = to_model(best.params);
    out.initial_residual = initial_residual;
    out.points_used = data.size();
    const auto full = pack(out.model);
    out.result = best;
    out.result.params.assign(full.begin(), full.end());
    if (best.covariance_estimate) {
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(spectrum_param_count, spectrum_param_count);
        for (std::size_t i = 0; i < free.size(); ++i)
            for (std::size_t j = 0; j < free.size(); ++j)
                cov(static_cast<Eigen::Index>(free[i]), static_cast<Eigen::Index>(free[j])) =
                    (*best.covariance_estimate)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                    scale[i] * scale[j];
        out.result.covariance_estimate = cov;
    }
    return out;
}

struct EnvelopeFit {
    EnvelopeModel model;
    std::size_t points_below{0};
    double fraction_on_or_above{1.0};
    double shift_khz{0.0};  // downward shift applied after the asymmetric fit
    std::size_t iterations{0};
};

/// Weight of a point lying under the envelope relative to one above it.
inline constexpr double envelope_below_weight = 100.0;

/// Lower envelope gamma_const + c (B - b_offs)^2 of Gamma_1 samples (kHz).
///
/// Asymmetric least squares: residuals below the parabola weigh 100x those above, solved by
/// reweighting the linear problem in (1, u, u^2) until the weights settle. The constant term is
/// then lowered by the 1st-percentile residual so that at least 99% of the points lie on or
/// above the curve.
inline EnvelopeFit fit_envelope(const std::vector<CoherenceSample>& samples) {
    std::vector<double> b;
    std::vector<double> g;
    for (const auto& s : samples) {
        s.validate();
        if (!s.gamma1) continue;
        b.push_back(s.b_mT);
        g.push_back(*s.gamma1 * constants::khz_per_inverse_us);
    }
    const std::size_t n = b.size();
    seriesjj::detail::require(n >= 6, "fit_envelope: need at least 6 samples with gamma1, got " + std::to_string(n));
    const auto [b_min, b_max] = std::minmax_element(b.begin(), b.end());
    if (*b_max - *b_min <= 1e-12 * std::max(1.0, std::abs(*b_min)))
        throw ValidationError("fit_envelope: degenerate data (all samples at one field)");
    const std::size_t argmin = static_cast<std::size_t>(std::min_element(g.begin(), g.end()) - g.begin());
    const double vertex_guess = b[argmin];
    const bool left = std::any_of(b.begin(), b.end(), [&](double v) { return v < vertex_guess; });
    const bool right = std::any_of(b.begin(), b.end(), [&](double v) { return v > vertex_guess; });
    seriesjj::detail::require(left && right, "fit_envelope: samples must lie on both sides of the minimum");

    double center = 0.0;
    for (double v : b) center += v;
    center /= static_cast<double>(n);
    double spread = 0.0;
    for (double v : b) spread = std::max(spread, std::abs(v - center));

    Eigen::MatrixXd design(static_cast<Eigen::Index>(n), 3);
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double u = (b[i] - center) / spread;
        const auto ii = static_cast<Eigen::Index>(i);
        design(ii, 0) = 1.0;
        design(ii, 1) = u;
        design(ii, 2) = u * u;
        y(ii) = g[i];
    }

    Eigen::VectorXd weights = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(3);
    std::size_t iterations = 0;
    for (; iterations < 200; ++iterations) {
        const Eigen::MatrixXd wd = weights.asDiagonal() * design;
        coef = (design.transpose() * wd).ldlt().solve(wd.transpose() * y);
        const Eigen::VectorXd resid = y - design * coef;
        Eigen::VectorXd next(weights.size());
        for (Eigen::Index i = 0; i < next.size(); ++i) next(i) = resid(i) < 0.0 ? envelope_below_weight : 1.0;
        if (next == weights) break;
        weights = next;
    }

    EnvelopeModel model;
    const double a0 = coef(0), a1 = coef(1), a2 = coef(2);
    if (a2 > 0.0) {
        const double u_offs = -a1 / (2.0 * a2);
        model.curvature_khz_per_mT2 = a2 / (spread * spread);
        model.b_offs_mT = center + u_offs * spread;
        model.gamma_const_khz = a0 - a2 * u_offs * u_offs;
    } else {
        model.curvature_khz_per_mT2 = 0.0;
        model.b_offs_mT = vertex_guess;
        model.gamma_const_khz = a0;
    }

    std::vector<double> resid(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double db = b[i] - model.b_offs_mT;
        resid[i] = g[i] - (model.gamma_const_khz + model.curvature_khz_per_mT2 * db * db);
    }
    std::vector<double> sorted = resid;
    std::sort(sorted.begin(), sorted.end());
    const auto allowed_below = static_cast<std::size_t>(std::floor(0.01 * static_cast<double>(n)));
    const double shift = std::min(0.0, sorted[allowed_below]);
    model.gamma_const_khz = std::max(0.0, model.gamma_const_khz + shift);

    EnvelopeFit out;
    out.model = model;
    out.shift_khz = -shift;
    out.iterations = iterations;
    for (std::size_t i = 0; i < n; ++i) {
        const double db = b[i] - model.b_offs_mT;
        const double env = model.gamma_const_khz + model.curvature_khz_per_mT2 * db * db;
        // tolerance for the point that defines the shift
        if (g[i] < env - 1e-9 * std::max(1.0, std::abs(env))) ++out.points_below;
    }
    out.fraction_on_or_above = 1.0 - static_cast<double>(out.points_below) / static_cast<double>(n);
    return out;
}

struct RatePair {
    double gamma1;         // us^-1
    double gamma2_ramsey;  // us^-1
};

struct DephasingLineFit {
    double gamma_phi;   // us^-1
    double half_width;  // standard error, us^-1; NaN when undefined
    bool half_width_defined;
    std::size_t count;
};

/// Intercept of Gamma_2 = Gamma_1 / 2 + Gamma_phi with the slope held at 1/2.
inline DephasingLineFit fit_dephasing_line(const std::vector<RatePair>& pairs) {
    seriesjj::detail::require(!pairs.empty(), "fit_dephasing_line: empty input");
    const double n = static_cast<double>(pairs.size());
    double mean = 0.0;
    for (const auto& p : pairs) {
        seriesjj::detail::require(std::isfinite(p.gamma1) && std::isfinite(p.gamma2_ramsey),
                        "fit_dephasing_line: non-finite rate");
        mean += p.gamma2_ramsey - p.gamma1 / 2.0;
    }
    mean /= n;
    if (pairs.size() < 2) return {mean, std::numeric_limits<double>::quiet_NaN(), false, pairs.size()};
    double ss = 0.0;
    for (const auto& p : pairs) {
        const double d = p.gamma2_ramsey - p.gamma1 / 2.0 - mean;
        ss += d * d;
    }
    const double std_error = std::sqrt(ss / (n - 1.0) / n);
    return {mean, std_error, true, pairs.size()};
}

}  // namespace seriesjj::fits
