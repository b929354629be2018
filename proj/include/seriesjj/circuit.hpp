#pragma once

// Energy levels of a transmon whose Josephson element is two tunnel junctions
// in series. Energies are ordinary frequencies in GHz (E/h).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "seriesjj/constants.hpp"
#include "seriesjj/errors.hpp"

namespace seriesjj {

struct TransmonCircuit {
    double e_c{0.19};   // charging energy E_C/h (GHz)
    double ej1{16.15};  // E_J,1/h (GHz)
    double ej2{300.0};  // E_J,2/h (GHz)

    void validate() const {
        detail::require(std::isfinite(e_c) && std::isfinite(ej1) && std::isfinite(ej2),
                        "TransmonCircuit: non-finite parameter");
        detail::require(e_c > 0.0, "TransmonCircuit: e_c must be > 0");
        detail::require(ej1 >= 0.0 && ej2 >= 0.0, "TransmonCircuit: Josephson energies must be >= 0");
    }

    [[nodiscard]] double limiting_ej() const { return std::min(ej1, ej2); }

    /// max/min of the two Josephson energies; +inf when exactly one is zero.
    [[nodiscard]] double ratio() const {
        const double lo = std::min(ej1, ej2);
        const double hi = std::max(ej1, ej2);
        if (lo == 0.0) return hi == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
        return hi / lo;
    }

    /// Series combination ej1*ej2/(ej1+ej2), equal to E_J,lim * r/(r+1).
    [[nodiscard]] double effective_ej() const {
        const double sum = ej1 + ej2;
        return sum == 0.0 ? 0.0 : ej1 * ej2 / sum;
    }
};

struct SpectrumResult {
    std::vector<double> levels;  // ground state at 0 (GHz)
    double omega01{0.0};
    double omega12{std::numeric_limits<double>::quiet_NaN()};
    double anharmonicity{std::numeric_limits<double>::quiet_NaN()};  // omega12 - omega01
    bool regime_valid{false};
};

struct PhaseGridConfig {
    std::size_t points{512};
    std::size_t max_levels{6};
    double rel_tol{1e-9};
    std::size_t max_points{8192};

    void validate() const {
        detail::require(points >= 64, "PhaseGridConfig: points must be >= 64");
        detail::require((points & (points - 1)) == 0, "PhaseGridConfig: points must be a power of two");
        detail::require(max_points >= points, "PhaseGridConfig: max_points < points");
        detail::require(max_levels >= 2, "PhaseGridConfig: max_levels must be >= 2");
        detail::require(rel_tol > 0.0, "PhaseGridConfig: rel_tol must be > 0");
    }
};

/// Transmon-regime bound on E_J,eff/E_C and what to do at a sinc node.
struct RegimeConfig {
    double min_ej_over_ec{20.0};
    bool throw_at_node{false};
};

/// Current through two junctions in series at total phase phi_total (radians).
/// Same units as the critical currents.
inline double current_phase(double phi_total, double ic1, double ic2) {
    detail::require(std::isfinite(phi_total) && std::isfinite(ic1) && std::isfinite(ic2),
                    "current_phase: non-finite input");
    detail::require(ic1 >= 0.0 && ic2 >= 0.0, "current_phase: critical currents must be >= 0");
    detail::require(ic1 > 0.0 || ic2 > 0.0, "current_phase: both critical currents are zero");
    const double ic_big = std::max(ic1, ic2);
    const double ic_small = std::min(ic1, ic2);
    if (ic_small == 0.0) return 0.0;
    const double r = ic_big / ic_small;
    const double phase_big = std::atan(std::sin(phi_total) / (r + std::cos(phi_total)));
    return ic_big * std::sin(phase_big);
}

/// Prefactor (r^2 - r + 1)/(r + 1)^2 of the anharmonic term. 1/4 at r = 1, 1 as r -> inf.
inline double anharmonicity_coefficient(double r) {
    detail::require(r > 0.0 && !std::isnan(r), "anharmonicity_coefficient: r must be > 0");
    if (std::isinf(r)) return 1.0;
    const double s = r + 1.0;
    return (r * r - r + 1.0) / (s * s);
}

namespace detail {

inline SpectrumResult make_spectrum(std::vector<double> levels, const TransmonCircuit& circuit,
                                    const RegimeConfig& regime) {
    SpectrumResult out;
    const double ground = levels.front();
    for (double& e : levels) e -= ground;
    out.levels = std::move(levels);
    out.omega01 = out.levels[1];
    if (out.levels.size() >= 3) {
        out.omega12 = out.levels[2] - out.levels[1];
        out.anharmonicity = out.omega12 - out.omega01;
    }
    out.regime_valid = circuit.effective_ej() / circuit.e_c >= regime.min_ej_over_ec;
    return out;
}

inline void check_node(const TransmonCircuit& circuit, const RegimeConfig& regime) {
    if (regime.throw_at_node && circuit.effective_ej() == 0.0)
        throw NumericalError("circuit at a sinc node: effective E_J is zero");
}

/// Two-junction potential -sqrt(ej1^2 + ej2^2 + 2 ej1 ej2 cos(phi)), i.e. -E_J,1 sqrt(r^2 + 2r cos(phi) + 1).
inline double series_potential(const TransmonCircuit& circuit, double phi) {
    const double a = circuit.ej1;
    const double b = circuit.ej2;
    const double radicand = a * a + b * b + 2.0 * a * b * std::cos(phi);
    return -std::sqrt(std::max(radicand, 0.0));
}

inline std::vector<double> sample_potential(const TransmonCircuit& circuit, std::size_t points,
                                            double phase_offset = 0.0) {
    std::vector<double> v(points);
    for (std::size_t j = 0; j < points; ++j) {
        const double phi = constants::two_pi * static_cast<double>(j) / static_cast<double>(points);
        v[j] = series_potential(circuit, phi + phase_offset);
    }
    return v;
}

inline std::vector<double> lowest(const Eigen::VectorXd& eigenvalues, std::size_t count) {
    std::vector<double> out(eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
    std::sort(out.begin(), out.end());
    out.resize(std::min(count, out.size()));
    return out;
}

/// Lowest `count` eigenvalues of 4 e_c N^2 + V on a uniform periodic grid (phi_j = 2 pi j / M),
/// N = -i d/dphi represented spectrally. General potential; dense M x M in the position basis.
inline std::vector<double> grid_eigenvalues(std::span<const double> potential, double e_c,
                                            std::size_t count) {
    const auto m = static_cast<Eigen::Index>(potential.size());
    const double md = static_cast<double>(m);
    const Eigen::Index half = m / 2;
    // kinetic kernel t(d) = (4 e_c / M) sum_k k^2 cos(2 pi k d / M), k in (-M/2, M/2]
    std::vector<double> kernel(static_cast<std::size_t>(m));
    for (Eigen::Index d = 0; d < m; ++d) {
        double acc = 0.0;
        for (Eigen::Index k = 1; k < half; ++k) {
            const double kd = static_cast<double>(k);
            acc += 2.0 * kd * kd * std::cos(constants::two_pi * kd * static_cast<double>(d) / md);
        }
        const double nyq = static_cast<double>(half);
        acc += nyq * nyq * ((d % 2 == 0) ? 1.0 : -1.0);
        kernel[static_cast<std::size_t>(d)] = 4.0 * e_c * acc / md;
    }
    Eigen::MatrixXd h(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            h(i, j) = kernel[static_cast<std::size_t>((i - j + m) % m)];
        }
        h(i, i) += potential[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("grid_eigenvalues: eigensolver failed");
    return lowest(solver.eigenvalues(), count);
}

/// Same operator for an even potential V(phi) = V(-phi), split into the even and odd
/// parity blocks of the plane-wave basis (each about M/2 wide).
inline std::vector<double> even_grid_eigenvalues(std::span<const double> potential, double e_c,
                                                 std::size_t count) {
    const std::size_t m = potential.size();
    const double md = static_cast<double>(m);
    const std::size_t half = m / 2;
    // real Fourier coefficients c_k = (1/M) sum_j V_j cos(2 pi k j / M), k = 0..M/2 ... M-1
    std::vector<double> c(m);
    for (std::size_t k = 0; k <= half; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t phase = (k * j) % m;
            acc += potential[j] * std::cos(constants::two_pi * static_cast<double>(phase) / md);
        }
        c[k] = acc / md;
        if (k > 0) c[m - k] = c[k];
    }
    auto coef = [&](std::ptrdiff_t k) {
        const auto mi = static_cast<std::ptrdiff_t>(m);
        return c[static_cast<std::size_t>(((k % mi) + mi) % mi)];
    };
    auto kinetic = [&](std::size_t k) {
        const double kd = static_cast<double>(k);
        return 4.0 * e_c * kd * kd;
    };

    const auto ne = static_cast<Eigen::Index>(half + 1);
    Eigen::MatrixXd even = Eigen::MatrixXd::Zero(ne, ne);
    for (std::size_t i = 0; i <= half; ++i) {
        for (std::size_t j = 0; j <= half; ++j) {
            const bool i_edge = (i == 0 || i == half);
            const bool j_edge = (j == 0 || j == half);
            const auto ii = static_cast<std::ptrdiff_t>(i);
            const auto jj = static_cast<std::ptrdiff_t>(j);
            double value;
            if (i_edge && j_edge) {
                value = coef(ii - jj);
            } else if (i_edge || j_edge) {
                value = std::numbers::sqrt2 * coef(ii - jj);
            } else {
                value = coef(ii - jj) + coef(ii + jj);
            }
            even(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
        }
        even(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += kinetic(i);
    }

    const auto no = static_cast<Eigen::Index>(half - 1);
    Eigen::MatrixXd odd = Eigen::MatrixXd::Zero(no, no);
    for (std::size_t i = 1; i < half; ++i) {
        for (std::size_t j = 1; j < half; ++j) {
            const auto ii = static_cast<std::ptrdiff_t>(i);
            const auto jj = static_cast<std::ptrdiff_t>(j);
            odd(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1)) =
                coef(ii - jj) - coef(ii + jj);
        }
        odd(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(i - 1)) += kinetic(i);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> even_solver(even, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> odd_solver(odd, Eigen::EigenvaluesOnly);
    if (even_solver.info() != Eigen::Success || odd_solver.info() != Eigen::Success)
        throw NumericalError("even_grid_eigenvalues: eigensolver failed");
    std::vector<double> all = lowest(even_solver.eigenvalues(), count);
    const std::vector<double> odd_levels = lowest(odd_solver.eigenvalues(), count);
    all.insert(all.end(), odd_levels.begin(), odd_levels.end());
    std::sort(all.begin(), all.end());
    all.resize(std::min(count, all.size()));
    return all;
}

}  // namespace detail

/// Closed-form levels E_n = sqrt(8 E_C E_J,lim r/(r+1)) n - (r^2-r+1)/(r+1)^2 (E_C/2) n(n+1).
inline SpectrumResult approx_levels(const TransmonCircuit& circuit, std::size_t n_levels,
                                    const RegimeConfig& regime = {}) {
    circuit.validate();
    detail::require(n_levels >= 2, "approx_levels: n_levels must be >= 2");
    detail::check_node(circuit, regime);
    const double harmonic = std::sqrt(8.0 * circuit.e_c * circuit.effective_ej());
    const double anharmonic = anharmonicity_coefficient(circuit.ratio()) * circuit.e_c / 2.0;
    std::vector<double> levels(n_levels);
    for (std::size_t n = 0; n < n_levels; ++n) {
        const double nd = static_cast<double>(n);
        levels[n] = harmonic * nd - anharmonic * nd * (nd + 1.0);
    }
    return detail::make_spectrum(std::move(levels), circuit, regime);
}

/// Numerical levels of H = 4 E_C N^2 - E_J,1 sqrt(r^2 + 2r cos(phi) + 1) on a phase grid.
/// The grid is doubled from `grid.points` until omega01 moves by less than rel_tol (relative).
inline SpectrumResult exact_levels(const TransmonCircuit& circuit, const PhaseGridConfig& grid = {},
                                   const RegimeConfig& regime = {}) {
    circuit.validate();
    grid.validate();
    detail::check_node(circuit, regime);

    auto solve = [&](std::size_t points) {
        std::vector<double> v = detail::sample_potential(circuit, points);
        // drop the constant part; it only shifts every level and costs precision when r is large
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        for (double& x : v) x -= mean;
        return detail::even_grid_eigenvalues(v, circuit.e_c, grid.max_levels);
    };

    std::size_t points = grid.points;
    std::vector<double> previous = solve(points);
    while (points * 2 <= grid.max_points) {
        points *= 2;
        std::vector<double> current = solve(points);
        const double w_prev = previous[1] - previous[0];
        const double w_curr = current[1] - current[0];
        const double scale = std::max(std::abs(w_curr), std::numeric_limits<double>::min());
        if (std::abs(w_curr - w_prev) / scale < grid.rel_tol)
            return detail::make_spectrum(std::move(current), circuit, regime);
        previous = std::move(current);
    }
    throw NumericalError("exact_levels: not converged at " + std::to_string(points) + " grid points");
}

}  // namespace seriesjj
