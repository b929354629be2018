#pragma once

// Synthetic measurement traces (resonator scan, Rabi, T1, Ramsey), their fits, and the
// per-field-point measurement pipeline built from them. Times in us, frequencies in GHz
// for the resonator and MHz for Ramsey detuning.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "seriesjj/coherence.hpp"
#include "seriesjj/constants.hpp"
#include "seriesjj/errors.hpp"
#include "seriesjj/field.hpp"
#include "seriesjj/optim.hpp"

namespace seriesjj::traces {

struct RabiParams {
    double t_pi;   // us
    double decay;  // us
};
struct T1Params {
    double t1;  // us
};
struct RamseyParams {
    double t2;         // us
    double detuning;   // MHz
};
struct ResonatorParams {
    double f_r;    // GHz
    double q_l;    // loaded quality factor
    double depth;  // dip depth in normalized amplitude
};

using TraceModel = std::variant<RabiParams, T1Params, RamseyParams, ResonatorParams>;

enum class TraceKind { rabi, t1, ramsey, resonator };

inline TraceKind kind_of(const TraceModel& model) { return static_cast<TraceKind>(model.index()); }

inline const char* to_string(TraceKind kind) {
    switch (kind) {
        case TraceKind::rabi: return "rabi";
        case TraceKind::t1: return "t1";
        case TraceKind::ramsey: return "ramsey";
        case TraceKind::resonator: return "resonator";
    }
    return "?";
}

struct TraceConfig {
    std::uint64_t seed{1};
    double noise_sigma{0.0};
    std::size_t n_points{101};
    double span_start{0.0};
    double span_stop{1.0};

    void validate() const {
        seriesjj::detail::require(n_points >= 8, "TraceConfig: n_points must be >= 8");
        seriesjj::detail::require(std::isfinite(noise_sigma) && noise_sigma >= 0.0, "TraceConfig: noise_sigma must be >= 0");
        seriesjj::detail::require(std::isfinite(span_start) && std::isfinite(span_stop) && span_stop > span_start,
                        "TraceConfig: span must be finite and increasing");
    }
};

struct Trace {
    std::vector<double> x;
    std::vector<double> y;

    void validate() const {
        seriesjj::detail::require(x.size() == y.size(), "Trace: x and y lengths differ");
        for (std::size_t i = 0; i < x.size(); ++i) {
            seriesjj::detail::require(std::isfinite(x[i]) && std::isfinite(y[i]), "Trace: non-finite value");
            if (i > 0) seriesjj::detail::require(x[i] > x[i - 1], "Trace: x must be strictly increasing");
        }
    }
};

inline void validate(const TraceModel& model) {
    std::visit(
        [](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, RabiParams>)
                seriesjj::detail::require(p.t_pi > 0.0 && p.decay > 0.0, "rabi: t_pi and decay must be > 0");
            else if constexpr (std::is_same_v<P, T1Params>)
                seriesjj::detail::require(p.t1 > 0.0, "t1: T1 must be > 0");
            else if constexpr (std::is_same_v<P, RamseyParams>)
                seriesjj::detail::require(p.t2 > 0.0 && p.detuning > 0.0, "ramsey: T2 and detuning must be > 0");
            else
                seriesjj::detail::require(p.f_r > 0.0 && p.q_l > 0.0 && p.depth > 0.0,
                                "resonator: f_r, Q_l and depth must be > 0");
        },
        model);
}

/// Noise-free model value at x.
inline double evaluate(const TraceModel& model, double x) {
    return std::visit(
        [x](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, RabiParams>) {
                return std::cos(constants::pi * x / p.t_pi) * std::exp(-x / p.decay);
            } else if constexpr (std::is_same_v<P, T1Params>) {
                return std::exp(-x / p.t1);
            } else if constexpr (std::is_same_v<P, RamseyParams>) {
                return std::cos(constants::two_pi * p.detuning * x) * std::exp(-x / p.t2);
            } else {
                const double u = (x - p.f_r) / p.f_r;
                return 1.0 - p.depth / (1.0 + 4.0 * p.q_l * p.q_l * u * u);
            }
        },
        model);
}

inline Trace simulate_trace(const TraceModel& model, const TraceConfig& config) {
    validate(model);
    config.validate();
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    Trace t;
    t.x.resize(config.n_points);
    t.y.resize(config.n_points);
    const double step = (config.span_stop - config.span_start) / static_cast<double>(config.n_points - 1);
    for (std::size_t i = 0; i < config.n_points; ++i) {
        t.x[i] = config.span_start + step * static_cast<double>(i);
        t.y[i] = evaluate(model, t.x[i]);
        if (config.noise_sigma > 0.0) t.y[i] += config.noise_sigma * noise(rng);
    }
    return t;
}

struct TraceFit {
    TraceModel params;
    double residual{0.0};  // sum of squared residuals
    bool converged{false};
};

namespace detail {

/// Frequency (1/x units) of the strongest non-DC periodogram peak.
inline double dominant_frequency(const Trace& t) {
    const double span = t.x.back() - t.x.front();
    const double dx = span / static_cast<double>(t.x.size() - 1);
    const double f_lo = 0.5 / span;
    const double f_hi = 0.5 / dx;
    auto power = [&](double f) {
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < t.x.size(); ++i) {
            const double arg = constants::two_pi * f * t.x[i];
            re += t.y[i] * std::cos(arg);
            im -= t.y[i] * std::sin(arg);
        }
        return re * re + im * im;
    };
    const std::size_t samples = 8 * t.x.size();
    double best_f = f_lo;
    double best_p = -1.0;
    const double df = (f_hi - f_lo) / static_cast<double>(samples);
    for (std::size_t k = 0; k <= samples; ++k) {
        const double f = f_lo + df * static_cast<double>(k);
        const double p = power(f);
        if (p > best_p) {
            best_p = p;
            best_f = f;
        }
    }
    // golden-section refinement inside the bracketing bins
    double a = std::max(f_lo, best_f - df), b = std::min(f_hi, best_f + df);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int i = 0; i < 60; ++i) {
        const double c = b - g * (b - a);
        const double d = a + g * (b - a);
        if (power(c) > power(d)) b = d; else a = c;
    }
    return 0.5 * (a + b);
}

/// Decay-time guesses spanning the trace length; the best one seeds the least-squares fit.
inline std::vector<double> decay_candidates(const Trace& t) {
    const double span = t.x.back() - t.x.front();
    return {span / 16.0, span / 8.0, span / 4.0, span / 2.0, span, 2.0 * span, 8.0 * span};
}

inline double sum_sq(const Trace& t, const TraceModel& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < t.x.size(); ++i) {
        const double d = evaluate(m, t.x[i]) - t.y[i];
        s += d * d;
    }
    return s;
}

/// Least-squares over a parameterization `make(x)` with x normalized to 1 at the guess.
template <class Make>
TraceFit fit_normalized(const Trace& t, Make make, std::size_t n_params, const optim::OptimizerConfig& cfg) {
    const optim::Residuals residuals = [&](std::span<const double> x) {
        std::vector<double> r(t.x.size(), std::numeric_limits<double>::quiet_NaN());
        const auto model = make(x);
        if (!model) return r;
        for (std::size_t i = 0; i < t.x.size(); ++i) r[i] = evaluate(*model, t.x[i]) - t.y[i];
        return r;
    };
    const optim::FitResult fit =
        optim::minimize(residuals, std::vector<double>(n_params, 1.0), cfg, optim::Method::gauss_newton_damped);
    const auto model = make(fit.params);
    if (!model) throw NumericalError("fit_trace: fit left the physical parameter domain");
    return {*model, fit.residual, fit.converged};
}

inline double estimate_t1(const Trace& t) {
    // log-linear fit over points comfortably above the noise floor
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    const double y0 = *std::max_element(t.y.begin(), t.y.end());
    for (std::size_t i = 0; i < t.x.size(); ++i) {
        if (t.y[i] <= 0.2 * y0) continue;
        const double ly = std::log(t.y[i]);
        sx += t.x[i];
        sy += ly;
        sxx += t.x[i] * t.x[i];
        sxy += t.x[i] * ly;
        ++n;
    }
    const double span = t.x.back() - t.x.front();
    if (n < 2) return span / 4.0;
    const double nd = static_cast<double>(n);
    const double slope = (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
    return slope < 0.0 ? -1.0 / slope : span;
}

}  // namespace detail

/// Least-squares fit of a trace of the given kind; initial guesses come from the trace itself.
inline TraceFit fit_trace(TraceKind kind, const Trace& trace, const optim::OptimizerConfig& cfg = {}) {
    trace.validate();
    const std::size_t need = kind == TraceKind::t1 ? 2 : (kind == TraceKind::resonator ? 4 : 3);
    seriesjj::detail::require(trace.x.size() >= std::max<std::size_t>(need, 8),
                    std::string("fit_trace: too few points for ") + to_string(kind));

    switch (kind) {
        case TraceKind::t1: {
            const double guess = detail::estimate_t1(trace);
            auto make = [guess](std::span<const double> x) -> std::optional<TraceModel> {
                if (!(x[0] > 0.0)) return std::nullopt;
                return T1Params{x[0] * guess};
            };
            return detail::fit_normalized(trace, make, 1, cfg);
        }
        case TraceKind::rabi:
        case TraceKind::ramsey: {
            const double f = detail::dominant_frequency(trace);
            double best_decay = 0.0;
            double best_ss = std::numeric_limits<double>::infinity();
            for (double tau : detail::decay_candidates(trace)) {
                const TraceModel m = kind == TraceKind::rabi ? TraceModel{RabiParams{0.5 / f, tau}}
                                                             : TraceModel{RamseyParams{tau, f}};
                const double ss = detail::sum_sq(trace, m);
                if (ss < best_ss) {
                    best_ss = ss;
                    best_decay = tau;
                }
            }
            if (kind == TraceKind::rabi) {
                const double t_pi = 0.5 / f;
                auto make = [t_pi, best_decay](std::span<const double> x) -> std::optional<TraceModel> {
                    if (!(x[0] > 0.0 && x[1] > 0.0)) return std::nullopt;
                    return RabiParams{x[0] * t_pi, x[1] * best_decay};
                };
                return detail::fit_normalized(trace, make, 2, cfg);
            }
            auto make = [f, best_decay](std::span<const double> x) -> std::optional<TraceModel> {
                if (!(x[0] > 0.0 && x[1] > 0.0)) return std::nullopt;
                return RamseyParams{x[0] * best_decay, x[1] * f};
            };
            return detail::fit_normalized(trace, make, 2, cfg);
        }
        case TraceKind::resonator: {
            const auto min_it = std::min_element(trace.y.begin(), trace.y.end());
            const auto i_min = static_cast<std::size_t>(min_it - trace.y.begin());
            const double f0 = trace.x[i_min];
            const double baseline = 1.0;
            const double depth0 = std::max(baseline - *min_it, 1e-6);
            // full width at half depth
            const double half = baseline - depth0 / 2.0;
            std::size_t lo = i_min, hi = i_min;
            while (lo > 0 && trace.y[lo] < half) --lo;
            while (hi + 1 < trace.x.size() && trace.y[hi] < half) ++hi;
            const double width = std::max(trace.x[hi] - trace.x[lo], trace.x[1] - trace.x[0]);
            const double q0 = f0 / width;
            // f_r is parameterized as an offset in units of the guessed linewidth
            auto make = [f0, width, q0, depth0](std::span<const double> x) -> std::optional<TraceModel> {
                if (!(x[1] > 0.0 && x[2] > 0.0)) return std::nullopt;
                return ResonatorParams{f0 + (x[0] - 1.0) * width, x[1] * q0, x[2] * depth0};
            };
            return detail::fit_normalized(trace, make, 3, cfg);
        }
    }
    throw ValidationError("fit_trace: unknown kind");
}

/// Ground truth for one field point of the simulated measurement sequence.
struct SequenceTruth {
    FieldModel field{};
    EnvelopeModel envelope{};
    double gamma_hyst_khz{0.0};
    double gamma_phi_per_us{0.0939};
    ResonatorParams resonator{7.5, 5100.0, 0.6};
    double rabi_t_pi_us{0.05};
    double rabi_decay_us{2.0};
    double ramsey_detuning_mhz{0.5};
};

struct SequenceConfig {
    TraceConfig trace{};        // seed, noise and point count; the span is set per stage
    double resonator_span_linewidths{10.0};
    double rabi_span_periods{4.0};
    double decay_span_lifetimes{5.0};
};

struct SequenceResult {
    CoherenceSample sample;
    double nu01_ghz{0.0};
    double f_r_ghz{0.0};
    double t_pi_us{0.0};
};

/// Resonator scan, Rabi, T1 and Ramsey at one field, each simulated from ground truth and
/// fitted back. Failing stages raise NumericalError tagged with the stage name.
inline SequenceResult run_sequence(double b_mT, const SequenceTruth& truth, const SequenceConfig& config,
                                   SweepDirection direction = SweepDirection::up) {
    truth.field.validate();
    truth.envelope.validate();
    seriesjj::detail::require(truth.gamma_hyst_khz >= 0.0 && truth.gamma_phi_per_us >= 0.0,
                    "run_sequence: ground-truth rates must be >= 0");

    SequenceResult out;
    const FieldPoint fp = qubit_frequency_at(truth.field, b_mT);
    if (!fp.regime_valid || fp.omega01 <= 0.0)
        throw ValidationError("run_sequence: qubit model outside the transmon regime at B = " + std::to_string(b_mT) +
                              " mT");
    out.nu01_ghz = fp.omega01;

    const double gamma1 = (envelope_rate(truth.envelope, b_mT) + truth.gamma_hyst_khz) / constants::khz_per_inverse_us;
    const double gamma2 = gamma1 / 2.0 + truth.gamma_phi_per_us;

    auto stage = [&](const char* name, const TraceModel& model, double start, double stop, std::uint64_t salt) {
        TraceConfig tc = config.trace;
        tc.seed = config.trace.seed * 1000003ULL + salt;
        tc.span_start = start;
        tc.span_stop = stop;
        try {
            const Trace t = simulate_trace(model, tc);
            return fit_trace(kind_of(model), t);
        } catch (const std::exception& e) {
            throw NumericalError(std::string("run_sequence stage '") + name + "': " + e.what());
        }
    };

    const auto& res = truth.resonator;
    const double linewidth = res.f_r / res.q_l;
    const double half_span = config.resonator_span_linewidths * linewidth / 2.0;
    const auto res_fit = stage("resonator", res, res.f_r - half_span, res.f_r + half_span, 1);
    out.f_r_ghz = std::get<ResonatorParams>(res_fit.params).f_r;

    const auto rabi_fit = stage("rabi", RabiParams{truth.rabi_t_pi_us, truth.rabi_decay_us}, 0.0,
                                config.rabi_span_periods * 2.0 * truth.rabi_t_pi_us, 2);
    out.t_pi_us = std::get<RabiParams>(rabi_fit.params).t_pi;

    const double t1 = 1.0 / gamma1;
    const auto t1_fit = stage("t1", T1Params{t1}, 0.0, config.decay_span_lifetimes * t1, 3);
    const double t2 = 1.0 / gamma2;
    const auto ramsey_fit =
        stage("ramsey", RamseyParams{t2, truth.ramsey_detuning_mhz}, 0.0, config.decay_span_lifetimes * t2, 4);

    out.sample.b_mT = b_mT;
    out.sample.direction = direction;
    out.sample.gamma1 = 1.0 / std::get<T1Params>(t1_fit.params).t1;
    out.sample.gamma2_ramsey = 1.0 / std::get<RamseyParams>(ramsey_fit.params).t2;
    return out;
}

}  // namespace seriesjj::traces
