#pragma once

// In-plane field response of the two junctions and the resulting qubit spectrum.
// Fields in mT, lengths in nm, energies in GHz.

#include <cmath>
#include <string>
#include <vector>

#include "seriesjj/circuit.hpp"
#include "seriesjj/constants.hpp"
#include "seriesjj/errors.hpp"

namespace seriesjj {

struct JunctionFieldParams {
    double ej0{0.0};      // zero-field E_J/h (GHz)
    double b_delta{0.0};  // offset field (mT)
    double b_phi0{1.0};   // node spacing of the interference pattern (mT)

    void validate() const {
        detail::require(std::isfinite(ej0) && std::isfinite(b_delta) && std::isfinite(b_phi0),
                        "JunctionFieldParams: non-finite parameter");
        detail::require(ej0 >= 0.0, "JunctionFieldParams: ej0 must be >= 0");
        detail::require(b_phi0 > 0.0, "JunctionFieldParams: b_phi0 must be > 0");
    }
};

struct JunctionGeometry {
    double barrier_thickness_nm{1.0};
    double london_depth_nm{16.0};
    double length_nm{1.0};

    void validate() const {
        detail::require(barrier_thickness_nm > 0.0 && london_depth_nm > 0.0 && length_nm > 0.0,
                        "JunctionGeometry: all lengths must be > 0");
    }

    /// d + 2 lambda_L
    [[nodiscard]] double magnetic_thickness_nm() const { return barrier_thickness_nm + 2.0 * london_depth_nm; }
};

struct GapModel {
    double b_c{168.0};  // critical field (mT)
    void validate() const { detail::require(std::isfinite(b_c) && b_c > 0.0, "GapModel: b_c must be > 0"); }
};

enum class SweepDirection { up, down };

inline const char* to_string(SweepDirection d) { return d == SweepDirection::up ? "up" : "down"; }

inline SweepDirection parse_direction(const std::string& s) {
    if (s == "up") return SweepDirection::up;
    if (s == "down") return SweepDirection::down;
    throw ValidationError("unknown sweep direction '" + s + "' (expected up or down)");
}

struct FieldSweep {
    std::vector<double> b_mT;
    SweepDirection direction{SweepDirection::up};

    void validate() const {
        for (double b : b_mT) detail::require(std::isfinite(b), "FieldSweep: non-finite field value");
    }

    /// start, start+step, ... up to and including stop (within half a step).
    static FieldSweep range(double start, double stop, double step,
                            SweepDirection direction = SweepDirection::up) {
        detail::require(step > 0.0 && std::isfinite(start) && std::isfinite(stop) && stop >= start,
                        "FieldSweep::range: need finite start <= stop and step > 0");
        FieldSweep sweep;
        sweep.direction = direction;
        const auto count = static_cast<long>(std::floor((stop - start) / step + 0.5));
        for (long i = 0; i <= count; ++i) sweep.b_mT.push_back(start + static_cast<double>(i) * step);
        return sweep;
    }
};

/// sin(pi x)/(pi x), exactly zero at nonzero integers.
inline double sinc_pi(double x) {
    if (x == 0.0) return 1.0;
    const double nearest = std::round(x);
    if (x == nearest) return 0.0;
    // sin(pi x) = (-1)^n sin(pi (x - n)) keeps the argument small near nodes
    const double frac = x - nearest;
    const double sign = (std::fmod(std::abs(nearest), 2.0) == 1.0) ? -1.0 : 1.0;
    return sign * std::sin(constants::pi * frac) / (constants::pi * x);
}

struct FraunhoferResult {
    double scale;  // |sinc| in [0, 1]
    double ej;     // ej0 * scale (GHz)
};

inline FraunhoferResult fraunhofer_ic(const JunctionFieldParams& params, double b_mT) {
    params.validate();
    detail::require(std::isfinite(b_mT), "fraunhofer_ic: non-finite field");
    const double scale = std::abs(sinc_pi((b_mT - params.b_delta) / params.b_phi0));
    return {scale, params.ej0 * scale};
}

/// l = Phi0 / ((d + 2 lambda_L) B_Phi0), in nm.
inline double junction_length_from_period(double b_phi0_mT, const JunctionGeometry& geometry) {
    detail::require(std::isfinite(b_phi0_mT) && b_phi0_mT > 0.0,
                    "junction_length_from_period: period must be > 0");
    detail::require(geometry.barrier_thickness_nm > 0.0 && geometry.london_depth_nm > 0.0,
                    "junction_length_from_period: d and lambda_L must be > 0");
    const double thickness_m = geometry.magnetic_thickness_nm() * constants::nm_to_m;
    const double length_m = constants::flux_quantum_wb / (thickness_m * b_phi0_mT * constants::mT_to_T);
    return length_m / constants::nm_to_m;
}

/// Inverse of junction_length_from_period; uses geometry.length_nm.
inline double period_from_length(const JunctionGeometry& geometry) {
    geometry.validate();
    const double area_m2 = geometry.magnetic_thickness_nm() * geometry.length_nm * constants::nm_to_m *
                           constants::nm_to_m;
    return constants::flux_quantum_wb / area_m2 / constants::mT_to_T;
}

/// Flux through the junction barrier in units of Phi0.
inline double flux_through_junction(double b_mT, const JunctionGeometry& geometry) {
    geometry.validate();
    const double area_m2 = geometry.magnetic_thickness_nm() * geometry.length_nm * constants::nm_to_m *
                           constants::nm_to_m;
    return b_mT * constants::mT_to_T * area_m2 / constants::flux_quantum_wb;
}

/// E_J(B) = E_J0 sqrt(1 - (B/B_c)^2), i.e. I_c proportional to the BCS gap with the tanh factor dropped.
inline double gap_suppressed_ic(double ej0, double b_mT, const GapModel& gap) {
    gap.validate();
    detail::require(std::isfinite(ej0) && ej0 >= 0.0 && std::isfinite(b_mT),
                    "gap_suppressed_ic: invalid input");
    if (std::abs(b_mT) > gap.b_c)
        throw ValidationError("gap_suppressed_ic: |B| = " + std::to_string(std::abs(b_mT)) +
                              " mT exceeds B_c = " + std::to_string(gap.b_c) + " mT (gap closed)");
    const double t = b_mT / gap.b_c;
    return ej0 * std::sqrt(std::max(0.0, 1.0 - t * t));
}

/// How the critical current of junction 1 responds to field. Junction 2 always follows
/// its interference pattern.
enum class CriticalCurrentModel { interference, gap, both };

enum class LevelMethod { approx, exact };

struct FieldModel {
    JunctionFieldParams jj1{16.15, 1.8, 300.0};
    JunctionFieldParams jj2{300.0, -0.2, 25.5};
    double e_c{0.19};
    CriticalCurrentModel ic_model{CriticalCurrentModel::interference};
    GapModel gap{};

    void validate() const {
        jj1.validate();
        jj2.validate();
        detail::require(std::isfinite(e_c) && e_c > 0.0, "FieldModel: e_c must be > 0");
        if (ic_model != CriticalCurrentModel::interference) gap.validate();
    }

    [[nodiscard]] double ej1_at(double b_mT) const {
        switch (ic_model) {
            case CriticalCurrentModel::interference:
                return fraunhofer_ic(jj1, b_mT).ej;
            case CriticalCurrentModel::gap:
                return gap_suppressed_ic(jj1.ej0, b_mT, gap);
            case CriticalCurrentModel::both:
                return fraunhofer_ic(jj1, b_mT).scale * gap_suppressed_ic(jj1.ej0, b_mT, gap);
        }
        return 0.0;
    }

    [[nodiscard]] double ej2_at(double b_mT) const { return fraunhofer_ic(jj2, b_mT).ej; }

    [[nodiscard]] TransmonCircuit circuit_at(double b_mT) const { return {e_c, ej1_at(b_mT), ej2_at(b_mT)}; }
};

struct FieldPoint {
    double b_mT;
    double omega01;  // GHz
    double omega12;  // GHz
    bool regime_valid;
};

inline FieldPoint qubit_frequency_at(const FieldModel& model, double b_mT,
                                     LevelMethod method = LevelMethod::approx,
                                     const PhaseGridConfig& grid = {}, const RegimeConfig& regime = {}) {
    const TransmonCircuit circuit = model.circuit_at(b_mT);
    const SpectrumResult s = method == LevelMethod::approx ? approx_levels(circuit, 3, regime)
                                                           : exact_levels(circuit, grid, regime);
    return {b_mT, s.omega01, s.omega12, s.regime_valid};
}

/// Qubit transitions along a field sweep. The model has no memory, so the sweep
/// direction does not enter.
inline std::vector<FieldPoint> qubit_frequency_vs_field(const FieldModel& model, const FieldSweep& sweep,
                                                        LevelMethod method = LevelMethod::approx,
                                                        const PhaseGridConfig& grid = {},
                                                        const RegimeConfig& regime = {}) {
    model.validate();
    sweep.validate();
    std::vector<FieldPoint> out;
    out.reserve(sweep.b_mT.size());
    for (double b : sweep.b_mT) out.push_back(qubit_frequency_at(model, b, method, grid, regime));
    return out;
}

/// Out-of-plane component b sin(alpha) of a misaligned coil field, in uT.
inline double perpendicular_component(double b_mT, double alpha_deg) {
    detail::require(std::isfinite(b_mT), "perpendicular_component: non-finite field");
    detail::require(alpha_deg >= 0.0 && alpha_deg <= 90.0, "perpendicular_component: alpha must be in [0, 90]");
    if (alpha_deg == 90.0) return b_mT * 1e3;
    return b_mT * std::sin(alpha_deg * constants::pi / 180.0) * 1e3;
}

}  // namespace seriesjj
