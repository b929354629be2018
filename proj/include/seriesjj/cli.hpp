#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage, 2 validation, 3 fit failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seriesjj/circuit.hpp"
#include "seriesjj/coherence.hpp"
#include "seriesjj/errors.hpp"
#include "seriesjj/field.hpp"
#include "seriesjj/fits.hpp"
#include "seriesjj/io.hpp"
#include "seriesjj/traces.hpp"

namespace seriesjj::cli {

enum ExitCode : int { ok = 0, usage = 1, validation = 2, fit_failure = 3 };

/// Field slope target used when no coil constant is configured: (d omega01/dI)/2pi at 21 mT.
inline constexpr double reference_slope_hz_per_a = 652e6;
inline constexpr double reference_slope_field_mT = 21.0;

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

namespace detail {

inline std::string num(double v, int precision = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

inline bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

inline FieldSweep parse_range(const std::string& spec, SweepDirection direction) {
    const auto parts = io::detail::split(spec, ':');
    if (parts.size() != 3) throw ValidationError("--b-range must be start:stop:step (got '" + spec + "')");
    const auto a = io::detail::parse_double(parts[0]);
    const auto b = io::detail::parse_double(parts[1]);
    const auto s = io::detail::parse_double(parts[2]);
    if (!a || !b || !s) throw ValidationError("--b-range must hold three numbers (got '" + spec + "')");
    return FieldSweep::range(*a, *b, *s, direction);
}

inline void write_report(const std::filesystem::path& path, const std::vector<std::pair<std::string, std::string>>& kv,
                         std::ostream& out) {
    std::ostringstream s;
    for (const auto& [k, v] : kv) s << k << " = " << v << '\n';
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    io::detail::write_file(path, s.str());
    out << s.str();
}

inline NoiseSpec resolved_noise(const io::RunConfig& cfg) {
    NoiseSpec noise = cfg.noise;
    if (!cfg.coil_constant_given)
        noise.coil_constant_mT_per_a =
            calibrate_coil_constant(cfg.field, reference_slope_field_mT, reference_slope_hz_per_a);
    return noise;
}

}  // namespace detail

/// Reproductions of the published numbers the toolkit is expected to match.
inline std::vector<CheckResult> reference_checks() {
    using detail::num;
    using detail::within;
    std::vector<CheckResult> checks;

    const JunctionGeometry geometry{1.0, 16.0, 1.0};
    const double l1 = junction_length_from_period(300.0, geometry);
    const double l2 = junction_length_from_period(25.5, geometry);
    checks.push_back({"junction length JJ1 (209 nm)", within(l1, 209.0, 1.0), num(l1) + " nm"});
    checks.push_back({"junction length JJ2 (2460 nm)", within(l2, 2460.0, 5.0), num(l2) + " nm"});

    const double rate = flux_noise_dephasing(constants::two_pi * 652e6, 1e-15);
    checks.push_back({"flux-noise dephasing (53 kHz)", std::abs(rate / 1e3 - 53.0) <= 0.02 * 53.0,
                      num(rate / 1e3) + " kHz"});

    const double c1 = anharmonicity_coefficient(1.0);
    checks.push_back({"anharmonicity coefficient at r = 1 (1/4)", c1 == 0.25, num(c1, 17)});
    const SpectrumResult equal = approx_levels({0.19, 16.15, 16.15}, 3);
    checks.push_back({"anharmonicity at r = 1 is -E_C/4", within(equal.anharmonicity, -0.19 / 4.0, 1e-12),
                      num(equal.anharmonicity, 12) + " GHz"});

    const EnvelopeModel envelope{};
    const double at_vertex = envelope_rate(envelope, envelope.b_offs_mT);
    const double at_ten = envelope_rate(envelope, envelope.b_offs_mT + 10.0);
    checks.push_back({"envelope at B_offs (53.4 kHz)", within(at_vertex, 53.4, 1e-9), num(at_vertex) + " kHz"});
    checks.push_back({"envelope at B_offs + 10 mT (131.9 kHz)", within(at_ten, 131.9, 1e-9), num(at_ten) + " kHz"});

    const DephasingEstimate deph = pure_dephasing(1.0, 0.5939);
    checks.push_back({"pure dephasing (93.9 kHz)", within(deph.gamma_phi * 1e3, 93.9, 1e-9),
                      num(deph.gamma_phi * 1e3) + " kHz"});

    const double perp = perpendicular_component(8.5, 3.0);
    checks.push_back({"misalignment field (about 450 uT)", within(perp, 450.0, 10.0), num(perp) + " uT"});

    const double closed = gap_suppressed_ic(16.15, 168.0, GapModel{168.0});
    checks.push_back({"gap closes at B_c = 168 mT", closed == 0.0, num(closed) + " GHz"});
    return checks;
}

namespace detail {

struct Options {
    std::string config;
    std::string input;
    std::string output;
    std::string b_range{"-30:30:0.1"};
    std::string method{"approx"};
    std::string csv;
    std::string free;
    std::string direction{"up"};
    double noise_mhz{0.0};
    long long seed{-1};
    double noise_sigma{-1.0};
};

inline io::RunConfig load(const Options& o) {
    io::RunConfig cfg = o.config.empty() ? io::RunConfig{} : io::load_config(o.config);
    if (!o.input.empty()) {
        if (!std::filesystem::exists(o.input)) throw ValidationError("input '" + o.input + "' does not exist");
        cfg.input = o.input;
    }
    if (!o.output.empty()) cfg.output_dir = o.output;
    if (!o.free.empty()) cfg.frozen = io::parse_free_list(o.free);
    if (o.seed >= 0) {
        cfg.optimizer.seed = static_cast<std::uint64_t>(o.seed);
        cfg.trace.seed = static_cast<std::uint64_t>(o.seed);
    }
    if (o.noise_sigma >= 0.0) cfg.trace.noise_sigma = o.noise_sigma;
    return cfg;
}

inline io::SweepTable require_input(const io::RunConfig& cfg) {
    if (!cfg.input) throw ValidationError("no input table: pass --in or set [cli-io] input");
    return io::load_sweep_csv(*cfg.input);
}

inline const std::vector<double>& require_column(const std::optional<std::vector<double>>& column, const char* name) {
    if (!column) throw ValidationError(std::string("input table lacks column '") + name + "'");
    return *column;
}

inline int cmd_spectrum(const Options& o, std::ostream& out) {
    const io::RunConfig cfg = load(o);
    const FieldSweep sweep = parse_range(o.b_range, parse_direction(o.direction));
    if (o.method != "approx" && o.method != "exact") throw ValidationError("--method must be approx or exact");
    const LevelMethod method = o.method == "exact" ? LevelMethod::exact : LevelMethod::approx;
    const auto points = qubit_frequency_vs_field(cfg.field, sweep, method, cfg.grid, cfg.regime);

    io::PlotTable table{"qubit transitions vs in-plane field", {"b_mT", "nu01_GHz", "nu12_GHz", "regime_valid"}, {}};
    table.columns.resize(4);
    for (const auto& p : points) {
        table.columns[0].push_back(p.b_mT);
        table.columns[1].push_back(p.omega01);
        table.columns[2].push_back(p.omega12);
        table.columns[3].push_back(p.regime_valid ? 1.0 : 0.0);
    }
    io::PlotTable plot = table;
    plot.names.pop_back();
    plot.columns.pop_back();
    const auto files = io::emit_plot_data(plot, io::PlotStyle::xy, cfg.output_dir, "spectrum");
    io::detail::write_file(files.data, [&] {
        std::ostringstream s;
        s << "# b_mT\tnu01_GHz\tnu12_GHz\tregime_valid\n";
        for (std::size_t i = 0; i < points.size(); ++i)
            s << io::detail::format_double(points[i].b_mT) << '\t' << io::detail::format_double(points[i].omega01)
              << '\t' << io::detail::format_double(points[i].omega12) << '\t' << (points[i].regime_valid ? 1 : 0)
              << '\n';
        return s.str();
    }());

    if (!o.csv.empty()) {
        std::mt19937_64 rng(cfg.trace.seed);
        std::normal_distribution<double> noise(0.0, 1.0);
        io::SweepTable t;
        t.nu01_ghz.emplace();
        for (const auto& p : points) {
            if (!p.regime_valid) continue;
            t.b_mT.push_back(p.b_mT);
            t.nu01_ghz->push_back(p.omega01 + (o.noise_mhz > 0.0 ? o.noise_mhz * 1e-3 * noise(rng) : 0.0));
            t.direction.push_back(sweep.direction);
        }
        io::save_sweep_csv(t, o.csv);
    }
    out << "wrote " << files.data.string() << " and " << files.graphic.string() << " (" << points.size()
        << " points)\n";
    return ok;
}

inline int cmd_fit_spectrum(const Options& o, std::ostream& out) {
    const io::RunConfig cfg = load(o);
    const io::SweepTable table = require_input(cfg);
    const auto& nu = require_column(table.nu01_ghz, "nu01_GHz");
    std::vector<fits::SpectrumPoint> data;
    for (std::size_t i = 0; i < table.size(); ++i) data.push_back({table.b_mT[i], nu[i]});
    const fits::SpectrumFit fit = fits::fit_spectrum(data, cfg.field, cfg.frozen, cfg.optimizer, cfg.regime);

    std::vector<std::pair<std::string, std::string>> report;
    report.emplace_back("converged", fit.result.converged ? "true" : "false");
    report.emplace_back("iterations", std::to_string(fit.result.iterations));
    report.emplace_back("residual_GHz2", io::detail::format_double(fit.result.residual));
    report.emplace_back("points_used", std::to_string(fit.points_used));
    report.emplace_back("points_masked", std::to_string(data.size() - fit.points_used));
    report.emplace_back("rms_MHz", num(std::sqrt(fit.result.residual / static_cast<double>(fit.points_used)) * 1e3));
    for (std::size_t k = 0; k < fits::spectrum_param_count; ++k) {
        report.emplace_back(fits::spectrum_param_names[k], io::detail::format_double(fit.result.params[k]));
        if (fit.result.covariance_estimate && !cfg.frozen[k]) {
            const auto kk = static_cast<Eigen::Index>(k);
            report.emplace_back(std::string(fits::spectrum_param_names[k]) + "_stderr",
                                num(std::sqrt(std::max(0.0, (*fit.result.covariance_estimate)(kk, kk)))));
        }
        report.emplace_back(std::string(fits::spectrum_param_names[k]) + "_frozen", cfg.frozen[k] ? "true" : "false");
    }
    write_report(cfg.output_dir / "fit_spectrum.txt", report, out);

    io::PlotTable plot{"spectrum fit", {"b_mT", "nu01_GHz_data", "nu01_GHz_model"}, {{}, {}, {}}};
    for (const auto& p : data) {
        plot.columns[0].push_back(p.b_mT);
        plot.columns[1].push_back(p.nu01_ghz);
        plot.columns[2].push_back(qubit_frequency_at(fit.model, p.b_mT).omega01);
    }
    io::emit_plot_data(plot, io::PlotStyle::scatter_with_model, cfg.output_dir, "fit_spectrum");
    return fit.result.converged ? ok : fit_failure;
}

inline int cmd_coherence_budget(const Options& o, std::ostream& out) {
    const io::RunConfig cfg = load(o);
    const io::SweepTable table = require_input(cfg);
    require_column(table.gamma1_per_us, "gamma1_per_us");
    io::PlotTable plot{"decay-rate budget",
                       {"b_mT", "gamma1_kHz", "envelope_kHz", "gamma_hyst_kHz", "gamma_nonhyst_kHz", "gamma_const_kHz",
                        "below_envelope"},
                       std::vector<std::vector<double>>(7)};
    std::size_t below = 0;
    for (const auto& s : table.coherence_samples()) {
        const LossBudget budget = loss_budget(s, cfg.envelope);
        below += budget.below_envelope ? 1 : 0;
        plot.columns[0].push_back(s.b_mT);
        plot.columns[1].push_back(*s.gamma1 * constants::khz_per_inverse_us);
        plot.columns[2].push_back(envelope_rate(cfg.envelope, s.b_mT));
        plot.columns[3].push_back(budget.gamma_hyst_khz);
        plot.columns[4].push_back(budget.gamma_nonhyst_khz);
        plot.columns[5].push_back(budget.gamma_const_khz);
        plot.columns[6].push_back(budget.below_envelope ? 1.0 : 0.0);
    }
    io::PlotTable graphic = plot;
    graphic.names.resize(3);
    graphic.columns.resize(3);
    const auto files = io::emit_plot_data(graphic, io::PlotStyle::scatter_with_model, cfg.output_dir, "coherence_budget");
    // the data file carries the full budget
    io::emit_plot_data(plot, io::PlotStyle::scatter_with_model, cfg.output_dir, "coherence_budget_full");
    out << "samples = " << table.size() << "\nbelow_envelope = " << below << "\nwrote " << files.data.string() << '\n';
    return ok;
}

inline int cmd_fit_envelope(const Options& o, std::ostream& out) {
    const io::RunConfig cfg = load(o);
    const io::SweepTable table = require_input(cfg);
    require_column(table.gamma1_per_us, "gamma1_per_us");
    const auto samples = table.coherence_samples();
    const fits::EnvelopeFit fit = fits::fit_envelope(samples);
    write_report(cfg.output_dir / "fit_envelope.txt",
                 {{"gamma_const_kHz", io::detail::format_double(fit.model.gamma_const_khz)},
                  {"curvature_kHz_per_mT2", io::detail::format_double(fit.model.curvature_khz_per_mT2)},
                  {"b_offs_mT", io::detail::format_double(fit.model.b_offs_mT)},
                  {"points_below", std::to_string(fit.points_below)},
                  {"fraction_on_or_above", num(fit.fraction_on_or_above)},
                  {"shift_kHz", io::detail::format_double(fit.shift_khz)}},
                 out);
    io::PlotTable plot{"decay-rate lower envelope", {"b_mT", "gamma1_kHz", "envelope_kHz"}, {{}, {}, {}}};
    for (const auto& s : samples) {
        plot.columns[0].push_back(s.b_mT);
        plot.columns[1].push_back(*s.gamma1 * constants::khz_per_inverse_us);
        plot.columns[2].push_back(envelope_rate(fit.model, s.b_mT));
    }
    io::emit_plot_data(plot, io::PlotStyle::scatter_with_model, cfg.output_dir, "fit_envelope");
    return ok;
}

inline int cmd_dephasing(const Options& o, std::ostream& out) {
    const io::RunConfig cfg = load(o);
    const io::SweepTable table = require_input(cfg);
    const auto& g1 = require_column(table.gamma1_per_us, "gamma1_per_us");
    const auto& g2 = require_column(table.gamma2_per_us, "gamma2_per_us");
    const NoiseSpec noise = resolved_noise(cfg);
    io::PlotTable plot{"pure dephasing vs field",
                       {"b_mT", "gamma_phi_kHz", "flux_noise_gamma_phi_kHz", "physical"},
                       std::vector<std::vector<double>>(4)};
    std::size_t unphysical = 0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const DephasingEstimate d = pure_dephasing(g1[i], g2[i]);
        unphysical += d.physical ? 0 : 1;
        double flux = std::numeric_limits<double>::quiet_NaN();
        try {
            flux = flux_noise_dephasing(frequency_slope_vs_current(cfg.field, table.b_mT[i], noise),
                                        noise.s_i_a2_per_hz) / 1e3;
        } catch (const NumericalError&) {
        }
        plot.columns[0].push_back(table.b_mT[i]);
        plot.columns[1].push_back(d.gamma_phi * constants::khz_per_inverse_us);
        plot.columns[2].push_back(flux);
        plot.columns[3].push_back(d.physical ? 1.0 : 0.0);
    }
    const auto files = io::emit_plot_data(plot, io::PlotStyle::scatter_with_model, cfg.output_dir, "dephasing");
    out << "samples = " << table.size() << "\nunphysical = " << unphysical
        << "\ncoil_constant_mT_per_A = " << num(noise.coil_constant_mT_per_a) << "\nwrote " << files.data.string()
        << '\n';
    return ok;
}

inline int cmd_fit_dephasing(const Options& o, std::ostream& out) {
    const io::RunConfig cfg = load(o);
    const io::SweepTable table = require_input(cfg);
    const auto& g1 = require_column(table.gamma1_per_us, "gamma1_per_us");
    const auto& g2 = require_column(table.gamma2_per_us, "gamma2_per_us");
    std::vector<fits::RatePair> pairs;
    for (std::size_t i = 0; i < table.size(); ++i) pairs.push_back({g1[i], g2[i]});
    const fits::DephasingLineFit fit = fits::fit_dephasing_line(pairs);
    write_report(cfg.output_dir / "fit_dephasing.txt",
                 {{"gamma_phi_kHz", io::detail::format_double(fit.gamma_phi * constants::khz_per_inverse_us)},
                  {"half_width_kHz", fit.half_width_defined
                                         ? io::detail::format_double(fit.half_width * constants::khz_per_inverse_us)
                                         : std::string("undefined")},
                  {"pairs", std::to_string(fit.count)}},
                 out);
    io::PlotTable plot{"Ramsey vs decay rate", {"gamma1_kHz", "gamma2_kHz", "model_kHz"}, {{}, {}, {}}};
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return pairs[a].gamma1 < pairs[b].gamma1; });
    for (auto i : order) {
        plot.columns[0].push_back(pairs[i].gamma1 * constants::khz_per_inverse_us);
        plot.columns[1].push_back(pairs[i].gamma2_ramsey * constants::khz_per_inverse_us);
        plot.columns[2].push_back((pairs[i].gamma1 / 2.0 + fit.gamma_phi) * constants::khz_per_inverse_us);
    }
    io::emit_plot_data(plot, io::PlotStyle::scatter_with_model, cfg.output_dir, "fit_dephasing");
    return ok;
}

inline int cmd_simulate_sequence(const Options& o, std::ostream& out, std::ostream& err) {
    io::RunConfig cfg = load(o);
    const SweepDirection direction = parse_direction(o.direction);
    const FieldSweep sweep = parse_range(o.b_range, direction);
    traces::SequenceTruth truth = cfg.truth_template;
    truth.field = cfg.field;
    truth.envelope = cfg.envelope;
    truth.gamma_phi_per_us = cfg.gamma_phi_khz / constants::khz_per_inverse_us;
    truth.gamma_hyst_khz = cfg.gamma_hyst_khz;
    traces::SequenceConfig seq;
    seq.trace = cfg.trace;

    io::SweepTable table;
    table.nu01_ghz.emplace();
    table.gamma1_per_us.emplace();
    table.gamma2_per_us.emplace();
    table.has_direction_column = true;
    for (std::size_t i = 0; i < sweep.b_mT.size(); ++i) {
        const double b = sweep.b_mT[i];
        if (!qubit_frequency_at(cfg.field, b, LevelMethod::approx, cfg.grid, cfg.regime).regime_valid) {
            err << "skipping B = " << num(b) << " mT: outside the transmon regime\n";
            continue;
        }
        seq.trace.seed = cfg.trace.seed + i;
        const traces::SequenceResult r = traces::run_sequence(b, truth, seq, direction);
        table.b_mT.push_back(b);
        table.nu01_ghz->push_back(r.nu01_ghz);
        table.gamma1_per_us->push_back(*r.sample.gamma1);
        table.gamma2_per_us->push_back(*r.sample.gamma2_ramsey);
        table.direction.push_back(direction);
    }
    if (table.b_mT.empty()) throw ValidationError("simulate-sequence: no field point inside the transmon regime");
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    const auto path = cfg.output_dir / "sequence.csv";
    io::save_sweep_csv(table, path);
    io::PlotTable plot{"simulated decay and Ramsey rates", {"b_mT", "gamma1_kHz", "gamma2_kHz"}, {{}, {}, {}}};
    for (std::size_t i = 0; i < table.size(); ++i) {
        plot.columns[0].push_back(table.b_mT[i]);
        plot.columns[1].push_back((*table.gamma1_per_us)[i] * constants::khz_per_inverse_us);
        plot.columns[2].push_back((*table.gamma2_per_us)[i] * constants::khz_per_inverse_us);
    }
    io::emit_plot_data(plot, io::PlotStyle::xy, cfg.output_dir, "sequence");
    out << "wrote " << path.string() << " (" << table.size() << " field points)\n";
    return ok;
}

inline int cmd_reference_checks(std::ostream& out) {
    bool all = true;
    for (const auto& c : reference_checks()) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        all = all && c.passed;
    }
    return all ? ok : fit_failure;
}

}  // namespace detail

/// Runs one subcommand; `args` excludes the program name.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-junction transmon modeling and parameter extraction", "seriesjj"};
    app.require_subcommand(1);
    detail::Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "INI run configuration");
        sub->add_option("--out", o.output, "output directory");
        sub->add_option("--seed", o.seed, "seed override for optimizer and trace noise");
    };
    auto add_input = [&](CLI::App* sub) { sub->add_option("--in", o.input, "input sweep CSV"); };

    auto* spectrum = app.add_subcommand("spectrum", "qubit transitions over a field sweep");
    add_common(spectrum);
    spectrum->add_option("--b-range", o.b_range, "start:stop:step in mT");
    spectrum->add_option("--method", o.method, "approx or exact");
    spectrum->add_option("--direction", o.direction, "sweep direction tag (up/down)");
    spectrum->add_option("--csv", o.csv, "also write (b_mT, nu01_GHz) in sweep-CSV form");
    spectrum->add_option("--noise-mhz", o.noise_mhz, "Gaussian noise added to the CSV frequencies (MHz)");

    auto* fit_spectrum = app.add_subcommand("fit-spectrum", "fit junction parameters to nu01(B)");
    add_common(fit_spectrum);
    add_input(fit_spectrum);
    fit_spectrum->add_option("--free", o.free, "comma-separated free parameters");

    auto* budget = app.add_subcommand("coherence-budget", "split Gamma_1 into envelope and hysteretic parts");
    add_common(budget);
    add_input(budget);

    auto* envelope = app.add_subcommand("fit-envelope", "fit the parabolic lower envelope of Gamma_1");
    add_common(envelope);
    add_input(envelope);

    auto* dephasing = app.add_subcommand("dephasing", "pure dephasing per sample and flux-noise estimate");
    add_common(dephasing);
    add_input(dephasing);

    auto* fit_deph = app.add_subcommand("fit-dephasing", "fit the constant pure-dephasing line");
    add_common(fit_deph);
    add_input(fit_deph);

    auto* sequence = app.add_subcommand("simulate-sequence", "simulate and fit the per-field measurement sequence");
    add_common(sequence);
    sequence->add_option("--b-range", o.b_range, "start:stop:step in mT");
    sequence->add_option("--direction", o.direction, "sweep direction tag (up/down)");
    sequence->add_option("--noise", o.noise_sigma, "trace noise sigma");

    auto* check = app.add_subcommand("check-paper", "run the built-in reproduction checks");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        if (spectrum->parsed()) return detail::cmd_spectrum(o, out);
        if (fit_spectrum->parsed()) return detail::cmd_fit_spectrum(o, out);
        if (budget->parsed()) return detail::cmd_coherence_budget(o, out);
        if (envelope->parsed()) return detail::cmd_fit_envelope(o, out);
        if (dephasing->parsed()) return detail::cmd_dephasing(o, out);
        if (fit_deph->parsed()) return detail::cmd_fit_dephasing(o, out);
        if (sequence->parsed()) return detail::cmd_simulate_sequence(o, out, err);
        if (check->parsed()) return detail::cmd_reference_checks(out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return validation;
    } catch (const NumericalError& e) {
        err << "fit failure: " << e.what() << '\n';
        return fit_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return validation;
    }
    err << app.help();
    return usage;
}

}  // namespace seriesjj::cli
