#pragma once

// Loss-rate decomposition, parabolic lower envelope of the decay rate and dephasing rates.
// Sample rates are in us^-1; envelope and budget quantities in kHz.

#include <cmath>
#include <optional>
#include <string>

#include "seriesjj/constants.hpp"
#include "seriesjj/errors.hpp"
#include "seriesjj/field.hpp"

namespace seriesjj {

struct CoherenceSample {
    double b_mT{0.0};
    std::optional<double> gamma1;         // us^-1
    std::optional<double> gamma2_ramsey;  // us^-1
    std::optional<double> gamma2_echo;    // us^-1
    SweepDirection direction{SweepDirection::up};

    void validate() const {
        detail::require(std::isfinite(b_mT), "CoherenceSample: non-finite field");
        for (const auto& rate : {gamma1, gamma2_ramsey, gamma2_echo}) {
            if (rate) detail::require(std::isfinite(*rate) && *rate >= 0.0, "CoherenceSample: rates must be >= 0");
        }
    }
};

/// Gamma(B) = gamma_const + c (B - b_offs)^2
struct EnvelopeModel {
    double gamma_const_khz{53.4};
    double curvature_khz_per_mT2{0.785};
    double b_offs_mT{2.25};

    void validate() const {
        detail::require(std::isfinite(gamma_const_khz) && std::isfinite(curvature_khz_per_mT2) &&
                            std::isfinite(b_offs_mT),
                        "EnvelopeModel: non-finite parameter");
        detail::require(gamma_const_khz >= 0.0, "EnvelopeModel: gamma_const must be >= 0");
        detail::require(curvature_khz_per_mT2 >= 0.0, "EnvelopeModel: curvature must be >= 0");
    }
};

struct LossBudget {
    double gamma_hyst_khz{0.0};
    double gamma_nonhyst_khz{0.0};
    double gamma_const_khz{0.0};
    bool below_envelope{false};  // gamma1 fell under the envelope; hyst clipped to 0

    [[nodiscard]] double total_khz() const { return gamma_hyst_khz + gamma_nonhyst_khz + gamma_const_khz; }
};

struct NoiseSpec {
    double s_i_a2_per_hz{1e-15};
    double coil_constant_mT_per_a{1.0};

    void validate() const {
        detail::require(std::isfinite(s_i_a2_per_hz) && s_i_a2_per_hz >= 0.0, "NoiseSpec: S_I must be >= 0");
        detail::require(std::isfinite(coil_constant_mT_per_a) && coil_constant_mT_per_a > 0.0,
                        "NoiseSpec: coil constant must be > 0");
    }
};

struct DephasingEstimate {
    double gamma_phi;  // same unit as the inputs
    bool physical;     // false when gamma2 < gamma1/2
};

/// Gamma_phi = Gamma_2^Ramsey - Gamma_1 / 2.
inline DephasingEstimate pure_dephasing(double gamma1, double gamma2_ramsey) {
    detail::require(std::isfinite(gamma1) && std::isfinite(gamma2_ramsey) && gamma1 >= 0.0 && gamma2_ramsey >= 0.0,
                    "pure_dephasing: rates must be finite and >= 0");
    const double rate = gamma2_ramsey - gamma1 / 2.0;
    return {rate, rate >= 0.0};
}

/// pi (d omega01/dI)^2 S_I. Slope in rad s^-1 A^-1, S_I in A^2/Hz, result in s^-1.
inline double flux_noise_dephasing(double slope_rad_per_s_per_a, double s_i_a2_per_hz) {
    detail::require(std::isfinite(slope_rad_per_s_per_a), "flux_noise_dephasing: non-finite slope");
    detail::require(std::isfinite(s_i_a2_per_hz) && s_i_a2_per_hz >= 0.0, "flux_noise_dephasing: S_I must be >= 0");
    return constants::pi * slope_rad_per_s_per_a * slope_rad_per_s_per_a * s_i_a2_per_hz;
}

namespace detail {

inline bool node_within(const JunctionFieldParams& jj, double lo, double hi) {
    if (jj.ej0 == 0.0) return false;
    const double x_lo = (lo - jj.b_delta) / jj.b_phi0;
    const double x_hi = (hi - jj.b_delta) / jj.b_phi0;
    for (double n = std::ceil(x_lo); n <= x_hi; n += 1.0) {
        if (n != 0.0) return true;
    }
    return false;
}

inline double central_difference(const FieldModel& model, double b, double h) {
    return (qubit_frequency_at(model, b + h).omega01 - qubit_frequency_at(model, b - h).omega01) / (2.0 * h);
}

}  // namespace detail

/// d nu01 / dB in GHz/mT by central differences. The step starts at `step_mT` and is halved
/// until successive estimates agree to 1e-6 (relative) or the halving budget runs out.
inline double frequency_field_slope(const FieldModel& model, double b_mT, double step_mT = 0.01) {
    model.validate();
    detail::require(std::isfinite(b_mT) && step_mT > 0.0, "frequency_field_slope: invalid field or step");
    if (detail::node_within(model.jj1, b_mT - step_mT, b_mT + step_mT) ||
        detail::node_within(model.jj2, b_mT - step_mT, b_mT + step_mT))
        throw NumericalError("frequency_field_slope: sinc node within the difference stencil at B = " +
                             std::to_string(b_mT) + " mT");
    double h = step_mT;
    double estimate = detail::central_difference(model, b_mT, h);
    for (int halving = 0; halving < 8; ++halving) {
        h /= 2.0;
        const double refined = detail::central_difference(model, b_mT, h);
        const double diff = std::abs(refined - estimate);
        estimate = refined;
        if (diff <= 1e-6 * std::abs(refined) || diff < 1e-12) break;
    }
    return estimate;
}

/// |d omega01 / dI| in rad s^-1 A^-1 from the field slope and the coil constant.
inline double frequency_slope_vs_current(const FieldModel& model, double b_mT, const NoiseSpec& noise,
                                         double step_mT = 0.01) {
    noise.validate();
    const double ghz_per_mT = frequency_field_slope(model, b_mT, step_mT);
    const double hz_per_a = ghz_per_mT * 1e9 * noise.coil_constant_mT_per_a;
    return std::abs(constants::two_pi * hz_per_a);
}

/// Coil constant (mT/A) for which the model slope at `b_mT` equals `target_hz_per_a` (ordinary frequency).
inline double calibrate_coil_constant(const FieldModel& model, double b_mT, double target_hz_per_a,
                                      double step_mT = 0.01) {
    detail::require(target_hz_per_a > 0.0, "calibrate_coil_constant: target slope must be > 0");
    const double hz_per_mT = std::abs(frequency_field_slope(model, b_mT, step_mT)) * 1e9;
    if (hz_per_mT == 0.0) throw NumericalError("calibrate_coil_constant: field slope is zero at this point");
    return target_hz_per_a / hz_per_mT;
}

inline double envelope_rate(const EnvelopeModel& model, double b_mT) {
    model.validate();
    const double db = b_mT - model.b_offs_mT;
    return model.gamma_const_khz + model.curvature_khz_per_mT2 * db * db;
}

/// Splits gamma1 into constant, non-hysteretic (parabolic) and hysteretic (remainder) parts.
inline LossBudget loss_budget(const CoherenceSample& sample, const EnvelopeModel& model) {
    sample.validate();
    model.validate();
    detail::require(sample.gamma1.has_value(), "loss_budget: sample has no gamma1");
    const double gamma1_khz = *sample.gamma1 * constants::khz_per_inverse_us;
    const double envelope = envelope_rate(model, sample.b_mT);
    LossBudget out;
    out.gamma_const_khz = model.gamma_const_khz;
    out.gamma_nonhyst_khz = envelope - model.gamma_const_khz;
    const double hyst = gamma1_khz - envelope;
    out.below_envelope = hyst < 0.0;
    out.gamma_hyst_khz = out.below_envelope ? 0.0 : hyst;
    return out;
}

}  // namespace seriesjj
