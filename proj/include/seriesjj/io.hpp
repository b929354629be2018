#pragma once

// Sweep-table CSV ingestion/emission, run configuration, and plot-data files.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "seriesjj/circuit.hpp"
#include "seriesjj/coherence.hpp"
#include "seriesjj/errors.hpp"
#include "seriesjj/field.hpp"
#include "seriesjj/fits.hpp"
#include "seriesjj/optim.hpp"
#include "seriesjj/traces.hpp"

namespace seriesjj::io {

// ---------------------------------------------------------------------------------------------
// sweep tables

inline constexpr std::array<std::string_view, 5> known_columns{"b_mT", "nu01_GHz", "gamma1_per_us", "gamma2_per_us",
                                                               "direction"};

/// Column-oriented sweep records. Units are part of the column names.
struct SweepTable {
    std::vector<double> b_mT;
    std::optional<std::vector<double>> nu01_ghz;
    std::optional<std::vector<double>> gamma1_per_us;
    std::optional<std::vector<double>> gamma2_per_us;
    std::vector<SweepDirection> direction;  // "up" when the column is absent
    bool has_direction_column{false};

    [[nodiscard]] std::size_t size() const { return b_mT.size(); }
    bool operator==(const SweepTable&) const = default;

    [[nodiscard]] std::vector<CoherenceSample> coherence_samples() const {
        std::vector<CoherenceSample> out(size());
        for (std::size_t i = 0; i < size(); ++i) {
            out[i].b_mT = b_mT[i];
            if (gamma1_per_us) out[i].gamma1 = (*gamma1_per_us)[i];
            if (gamma2_per_us) out[i].gamma2_ramsey = (*gamma2_per_us)[i];
            out[i].direction = direction[i];
        }
        return out;
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == sep) cells.emplace_back();
    return cells;
}

inline std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const char* begin = s.data();
    if (*begin == '+') ++begin;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline SweepTable parse_sweep_csv(std::istream& in, const std::string& source = "<input>") {
    std::string line;
    std::size_t line_no = 0;
    std::string header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!detail::trim(line).empty()) {
            header = line;
            break;
        }
    }
    if (header.empty()) throw ValidationError(source + ": empty input");

    const std::vector<std::string> names = detail::split(header, ',');
    std::vector<std::string> unknown;
    std::set<std::string> seen;
    for (const auto& name : names) {
        if (std::find(known_columns.begin(), known_columns.end(), name) == known_columns.end())
            unknown.push_back("'" + name + "'");
        else if (!seen.insert(name).second)
            throw ValidationError(source + ": duplicate column '" + name + "'");
    }
    if (!unknown.empty()) {
        std::string list;
        for (std::size_t i = 0; i < unknown.size(); ++i) list += (i ? ", " : "") + unknown[i];
        throw ValidationError(source + ": unknown column(s) " + list +
                              " (known: b_mT, nu01_GHz, gamma1_per_us, gamma2_per_us, direction)");
    }
    if (!seen.count("b_mT")) throw ValidationError(source + ": missing required column 'b_mT'");

    SweepTable table;
    for (const auto& name : names) {
        if (name == "nu01_GHz") table.nu01_ghz.emplace();
        if (name == "gamma1_per_us") table.gamma1_per_us.emplace();
        if (name == "gamma2_per_us") table.gamma2_per_us.emplace();
        if (name == "direction") table.has_direction_column = true;
    }

    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        ++row;
        const std::vector<std::string> cells = detail::split(line, ',');
        if (cells.size() != names.size())
            throw ValidationError(source + ": row " + std::to_string(row) + " (line " + std::to_string(line_no) +
                                  ") has " + std::to_string(cells.size()) + " cells, header has " +
                                  std::to_string(names.size()));
        SweepDirection dir = SweepDirection::up;
        for (std::size_t c = 0; c < names.size(); ++c) {
            const std::string& name = names[c];
            if (name == "direction") {
                try {
                    dir = parse_direction(cells[c]);
                } catch (const ValidationError&) {
                    throw ValidationError(source + ": row " + std::to_string(row) + ", column direction: '" +
                                          cells[c] + "' is not up/down");
                }
                continue;
            }
            const auto value = detail::parse_double(cells[c]);
            if (!value)
                throw ValidationError(source + ": row " + std::to_string(row) + ", column " + name + ": '" +
                                      cells[c] + "' is not a number");
            if (name == "b_mT") {
                if (!std::isfinite(*value))
                    throw ValidationError(source + ": row " + std::to_string(row) + ", column b_mT: non-finite field");
                table.b_mT.push_back(*value);
            } else if (name == "nu01_GHz") {
                table.nu01_ghz->push_back(*value);
            } else if (name == "gamma1_per_us") {
                table.gamma1_per_us->push_back(*value);
            } else {
                table.gamma2_per_us->push_back(*value);
            }
        }
        table.direction.push_back(dir);
    }
    if (table.b_mT.empty()) throw ValidationError(source + ": no data rows");
    return table;
}

inline SweepTable load_sweep_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read '" + path.string() + "'");
    return parse_sweep_csv(in, path.string());
}

inline void write_sweep_csv(const SweepTable& table, std::ostream& out) {
    out << "b_mT";
    if (table.nu01_ghz) out << ",nu01_GHz";
    if (table.gamma1_per_us) out << ",gamma1_per_us";
    if (table.gamma2_per_us) out << ",gamma2_per_us";
    if (table.has_direction_column) out << ",direction";
    out << '\n';
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << detail::format_double(table.b_mT[i]);
        if (table.nu01_ghz) out << ',' << detail::format_double((*table.nu01_ghz)[i]);
        if (table.gamma1_per_us) out << ',' << detail::format_double((*table.gamma1_per_us)[i]);
        if (table.gamma2_per_us) out << ',' << detail::format_double((*table.gamma2_per_us)[i]);
        if (table.has_direction_column) out << ',' << to_string(table.direction[i]);
        out << '\n';
    }
}

inline void save_sweep_csv(const SweepTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    write_sweep_csv(table, out);
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------------------------------------
// plot data

enum class PlotStyle { xy, scatter_with_model };

/// First column is x; `xy` draws every further column as a line, `scatter_with_model`
/// draws column 1 as markers and the remaining columns as lines.
struct PlotTable {
    std::string title;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
};

struct PlotFiles {
    std::filesystem::path data;
    std::filesystem::path graphic;
};

namespace detail {

inline std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string render_svg(const PlotTable& t, PlotStyle style) {
    constexpr double width = 640, height = 400, left = 70, right = 20, top = 30, bottom = 50;
    const auto& x = t.columns[0];
    double x_lo = x[0], x_hi = x[0], y_lo = 0, y_hi = 0;
    bool have_y = false;
    for (double v : x) {
        if (!std::isfinite(v)) continue;
        x_lo = std::min(x_lo, v);
        x_hi = std::max(x_hi, v);
    }
    for (std::size_t c = 1; c < t.columns.size(); ++c)
        for (double v : t.columns[c]) {
            if (!std::isfinite(v)) continue;
            if (!have_y) y_lo = y_hi = v, have_y = true;
            y_lo = std::min(y_lo, v);
            y_hi = std::max(y_hi, v);
        }
    if (x_hi == x_lo) x_hi = x_lo + 1.0;
    if (y_hi == y_lo) y_hi = y_lo + 1.0;
    auto px = [&](double v) { return left + (v - x_lo) / (x_hi - x_lo) * (width - left - right); };
    auto py = [&](double v) { return height - bottom - (v - y_lo) / (y_hi - y_lo) * (height - top - bottom); };

    static constexpr std::array<const char*, 6> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                                        "#17becf"};
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
    s << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    s << "<text x=\"320\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(t.title) << "</text>\n";
    s << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(width - left - right)
      << "\" height=\"" << fixed(height - top - bottom) << "\" fill=\"none\" stroke=\"black\"/>\n";
    s << "<text x=\"" << fixed(left) << "\" y=\"" << fixed(height - bottom + 16) << "\" font-size=\"11\">"
      << format_double(x_lo) << "</text>\n";
    s << "<text x=\"" << fixed(width - right) << "\" y=\"" << fixed(height - bottom + 16)
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(x_hi) << "</text>\n";
    s << "<text x=\"" << fixed(left - 4) << "\" y=\"" << fixed(height - bottom)
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(y_lo) << "</text>\n";
    s << "<text x=\"" << fixed(left - 4) << "\" y=\"" << fixed(top + 10) << "\" text-anchor=\"end\" font-size=\"11\">"
      << format_double(y_hi) << "</text>\n";
    s << "<text x=\"320\" y=\"" << fixed(height - 10) << "\" text-anchor=\"middle\" font-size=\"12\">"
      << xml_escape(t.names[0]) << "</text>\n";

    for (std::size_t c = 1; c < t.columns.size(); ++c) {
        const char* color = palette[(c - 1) % palette.size()];
        const auto& y = t.columns[c];
        if (style == PlotStyle::scatter_with_model && c == 1) {
            for (std::size_t i = 0; i < y.size(); ++i) {
                if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
                s << "<circle cx=\"" << fixed(px(x[i])) << "\" cy=\"" << fixed(py(y[i])) << "\" r=\"2\" fill=\""
                  << color << "\"/>\n";
            }
        } else {
            s << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
            bool first = true;
            for (std::size_t i = 0; i < y.size(); ++i) {
                if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
                s << (first ? "" : " ") << fixed(px(x[i])) << ',' << fixed(py(y[i]));
                first = false;
            }
            s << "\"/>\n";
        }
        s << "<text x=\"" << fixed(width - right - 4) << "\" y=\"" << fixed(top + 14.0 * static_cast<double>(c))
          << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">" << xml_escape(t.names[c])
          << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace detail

/// Writes <stem>.tsv and <stem>.svg into `dir`. Output depends only on the table contents.
inline PlotFiles emit_plot_data(const PlotTable& table, PlotStyle style, const std::filesystem::path& dir,
                                const std::string& stem) {
    seriesjj::detail::require(table.columns.size() >= 2 && table.names.size() == table.columns.size(),
                              "emit_plot_data: need an x column and at least one y column with names");
    const std::size_t rows = table.columns[0].size();
    seriesjj::detail::require(rows > 0, "emit_plot_data: empty table");
    for (const auto& c : table.columns)
        seriesjj::detail::require(c.size() == rows, "emit_plot_data: columns differ in length");

    std::ostringstream tsv;
    tsv << '#';
    for (std::size_t c = 0; c < table.names.size(); ++c) tsv << (c ? "\t" : " ") << table.names[c];
    tsv << '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            tsv << (c ? "\t" : "") << detail::format_double(table.columns[c][i]);
        tsv << '\n';
    }

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    PlotFiles files{dir / (stem + ".tsv"), dir / (stem + ".svg")};
    detail::write_file(files.data, tsv.str());
    detail::write_file(files.graphic, detail::render_svg(table, style));
    return files;
}

// ---------------------------------------------------------------------------------------------
// run configuration

/// Every key a config file may carry, by section, with its unit.
inline const std::map<std::string, std::map<std::string, std::string>>& units_table() {
    static const std::map<std::string, std::map<std::string, std::string>> table{
        {"circuit-model",
         {{"e_c_GHz", "GHz"}, {"min_ej_over_ec", "1"}, {"grid_points", "count"}, {"max_levels", "count"},
          {"rel_tol", "1"}}},
        {"field-model",
         {{"jj1_ej0_GHz", "GHz"}, {"jj1_b_delta_mT", "mT"}, {"jj1_b_phi0_mT", "mT"},
          {"jj2_ej0_GHz", "GHz"}, {"jj2_b_delta_mT", "mT"}, {"jj2_b_phi0_mT", "mT"},
          {"ic_model", "interference|gap|both"}, {"b_c_mT", "mT"},
          {"barrier_thickness_nm", "nm"}, {"london_depth_nm", "nm"}}},
        {"coherence-model",
         {{"gamma_const_kHz", "kHz"}, {"curvature_kHz_per_mT2", "kHz/mT^2"}, {"b_offs_mT", "mT"},
          {"s_i_A2_per_Hz", "A^2/Hz"}, {"coil_constant_mT_per_A", "mT/A"}, {"gamma_phi_kHz", "kHz"},
          {"gamma_hyst_kHz", "kHz"}}},
        {"optim",
         {{"max_iterations", "count"}, {"param_tol", "1"}, {"objective_tol", "1"}, {"seed", "integer"},
          {"starts", "count"}, {"free", "list"}}},
        {"trace-sim",
         {{"seed", "integer"}, {"noise_sigma", "1"}, {"n_points", "count"}, {"resonator_f_r_GHz", "GHz"},
          {"resonator_q_l", "1"}, {"resonator_depth", "1"}, {"rabi_t_pi_us", "us"}, {"rabi_decay_us", "us"},
          {"ramsey_detuning_MHz", "MHz"}}},
        {"cli-io", {{"input", "path"}, {"output_dir", "path"}}},
    };
    return table;
}

struct RunConfig {
    FieldModel field{};
    RegimeConfig regime{};
    PhaseGridConfig grid{};
    JunctionGeometry geometry{};
    EnvelopeModel envelope{};
    NoiseSpec noise{};
    bool coil_constant_given{false};
    double gamma_phi_khz{93.9};
    double gamma_hyst_khz{0.0};
    optim::OptimizerConfig optimizer{};
    fits::FrozenMask frozen{fits::default_frozen};
    traces::TraceConfig trace{};
    traces::SequenceTruth truth_template{};
    std::optional<std::filesystem::path> input;
    std::filesystem::path output_dir{"."};
};

namespace detail {

inline CriticalCurrentModel parse_ic_model(const std::string& s) {
    if (s == "interference") return CriticalCurrentModel::interference;
    if (s == "gap") return CriticalCurrentModel::gap;
    if (s == "both") return CriticalCurrentModel::both;
    throw ValidationError("ic_model must be interference, gap or both (got '" + s + "')");
}

inline fits::FrozenMask parse_free_list(const std::string& list) {
    fits::FrozenMask frozen{};
    frozen.fill(true);
    for (const auto& raw : split(list, ',')) {
        if (raw.empty()) continue;
        const auto it = std::find_if(fits::spectrum_param_names.begin(), fits::spectrum_param_names.end(),
                                     [&](const char* n) { return raw == n; });
        if (it == fits::spectrum_param_names.end())
            throw ValidationError("unknown fit parameter '" + raw + "'");
        frozen[static_cast<std::size_t>(it - fits::spectrum_param_names.begin())] = false;
    }
    return frozen;
}

}  // namespace detail

inline fits::FrozenMask parse_free_list(const std::string& list) { return detail::parse_free_list(list); }

/// Parses an INI document whose sections are module names. Unknown sections or keys are rejected.
inline RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = ".",
                              const std::string& source = "<config>") {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ValidationError(source + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }

    const auto& units = units_table();
    for (const auto& [section, keys] : tree) {
        const auto sec = units.find(section);
        if (sec == units.end()) {
            if (keys.empty()) throw ValidationError(source + ": key '" + section + "' outside of a section");
            throw ValidationError(source + ": unknown section [" + section + "]");
        }
        for (const auto& [key, value] : keys) {
            if (!sec->second.count(key))
                throw ValidationError(source + ": unknown key '" + key + "' in [" + section + "]");
        }
    }

    auto text = [&](const std::string& section, const std::string& key) -> std::optional<std::string> {
        const auto sec = tree.get_child_optional(section);
        if (!sec) return std::nullopt;
        const auto v = sec->get_optional<std::string>(key);
        if (!v) return std::nullopt;
        return detail::trim(*v);
    };
    auto number = [&](const std::string& section, const std::string& key, double& target) {
        if (const auto t = text(section, key)) {
            const auto v = detail::parse_double(*t);
            if (!v || !std::isfinite(*v))
                throw ValidationError(source + ": [" + section + "] " + key + " = '" + *t + "' is not a number (unit " +
                                      units.at(section).at(key) + ")");
            target = *v;
            return true;
        }
        return false;
    };
    auto count = [&](const std::string& section, const std::string& key, auto& target) {
        double v = 0.0;
        if (number(section, key, v)) {
            if (v < 0.0 || v != std::floor(v))
                throw ValidationError(source + ": [" + section + "] " + key + " must be a non-negative integer");
            target = static_cast<std::remove_reference_t<decltype(target)>>(v);
        }
    };

    RunConfig cfg;
    number("circuit-model", "e_c_GHz", cfg.field.e_c);
    number("circuit-model", "min_ej_over_ec", cfg.regime.min_ej_over_ec);
    count("circuit-model", "grid_points", cfg.grid.points);
    count("circuit-model", "max_levels", cfg.grid.max_levels);
    number("circuit-model", "rel_tol", cfg.grid.rel_tol);

    number("field-model", "jj1_ej0_GHz", cfg.field.jj1.ej0);
    number("field-model", "jj1_b_delta_mT", cfg.field.jj1.b_delta);
    number("field-model", "jj1_b_phi0_mT", cfg.field.jj1.b_phi0);
    number("field-model", "jj2_ej0_GHz", cfg.field.jj2.ej0);
    number("field-model", "jj2_b_delta_mT", cfg.field.jj2.b_delta);
    number("field-model", "jj2_b_phi0_mT", cfg.field.jj2.b_phi0);
    if (const auto m = text("field-model", "ic_model")) cfg.field.ic_model = detail::parse_ic_model(*m);
    number("field-model", "b_c_mT", cfg.field.gap.b_c);
    number("field-model", "barrier_thickness_nm", cfg.geometry.barrier_thickness_nm);
    number("field-model", "london_depth_nm", cfg.geometry.london_depth_nm);

    number("coherence-model", "gamma_const_kHz", cfg.envelope.gamma_const_khz);
    number("coherence-model", "curvature_kHz_per_mT2", cfg.envelope.curvature_khz_per_mT2);
    number("coherence-model", "b_offs_mT", cfg.envelope.b_offs_mT);
    number("coherence-model", "s_i_A2_per_Hz", cfg.noise.s_i_a2_per_hz);
    cfg.coil_constant_given = number("coherence-model", "coil_constant_mT_per_A", cfg.noise.coil_constant_mT_per_a);
    number("coherence-model", "gamma_phi_kHz", cfg.gamma_phi_khz);
    number("coherence-model", "gamma_hyst_kHz", cfg.gamma_hyst_khz);

    count("optim", "max_iterations", cfg.optimizer.max_iterations);
    number("optim", "param_tol", cfg.optimizer.param_tol);
    number("optim", "objective_tol", cfg.optimizer.objective_tol);
    count("optim", "seed", cfg.optimizer.seed);
    count("optim", "starts", cfg.optimizer.starts);
    if (const auto f = text("optim", "free")) cfg.frozen = detail::parse_free_list(*f);

    count("trace-sim", "seed", cfg.trace.seed);
    number("trace-sim", "noise_sigma", cfg.trace.noise_sigma);
    count("trace-sim", "n_points", cfg.trace.n_points);
    number("trace-sim", "resonator_f_r_GHz", cfg.truth_template.resonator.f_r);
    number("trace-sim", "resonator_q_l", cfg.truth_template.resonator.q_l);
    number("trace-sim", "resonator_depth", cfg.truth_template.resonator.depth);
    number("trace-sim", "rabi_t_pi_us", cfg.truth_template.rabi_t_pi_us);
    number("trace-sim", "rabi_decay_us", cfg.truth_template.rabi_decay_us);
    number("trace-sim", "ramsey_detuning_MHz", cfg.truth_template.ramsey_detuning_mhz);

    if (const auto p = text("cli-io", "input")) {
        std::filesystem::path path = *p;
        if (path.is_relative()) path = base_dir / path;
        if (!std::filesystem::exists(path))
            throw ValidationError(source + ": [cli-io] input '" + path.string() + "' does not exist");
        cfg.input = path;
    }
    if (const auto p = text("cli-io", "output_dir")) {
        std::filesystem::path path = *p;
        cfg.output_dir = path.is_relative() ? base_dir / path : path;
    }

    try {
        cfg.field.validate();
        cfg.grid.validate();
        seriesjj::detail::require(cfg.geometry.barrier_thickness_nm > 0.0 && cfg.geometry.london_depth_nm > 0.0,
                                  "geometry lengths must be > 0");
        cfg.envelope.validate();
        cfg.noise.validate();
        cfg.optimizer.validate();
        cfg.trace.validate();
        traces::validate(cfg.truth_template.resonator);
        traces::validate(traces::RabiParams{cfg.truth_template.rabi_t_pi_us, cfg.truth_template.rabi_decay_us});
        seriesjj::detail::require(cfg.gamma_phi_khz >= 0.0 && cfg.gamma_hyst_khz >= 0.0,
                                  "gamma_phi and gamma_hyst must be >= 0");
    } catch (const ValidationError& e) {
        throw ValidationError(source + ": " + e.what());
    }
    return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config '" + path.string() + "'");
    return parse_config(in, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path(),
                        path.string());
}

}  // namespace seriesjj::io
