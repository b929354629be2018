#pragma once

#include <numbers>

namespace seriesjj::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Magnetic flux quantum h/2e in Wb (CODATA).
inline constexpr double flux_quantum_wb = 2.067833848e-15;

inline constexpr double mT_to_T = 1e-3;
inline constexpr double nm_to_m = 1e-9;

/// 1 us^-1 expressed in kHz.
inline constexpr double khz_per_inverse_us = 1e3;

}  // namespace seriesjj::constants
