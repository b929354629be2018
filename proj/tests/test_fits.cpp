#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "seriesjj/fits.hpp"

using namespace seriesjj;
using namespace seriesjj::fits;
using Catch::Approx;

namespace {

std::vector<SpectrumPoint> synthetic_spectrum(const FieldModel& truth, double sigma_ghz, std::uint64_t seed,
                                              double step = 0.1) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma_ghz);
    std::vector<SpectrumPoint> data;
    for (double b : FieldSweep::range(-30.0, 30.0, step).b_mT) {
        const double nu = qubit_frequency_at(truth, b).omega01;
        data.push_back({b, sigma_ghz > 0.0 ? nu + noise(rng) : nu});
    }
    return data;
}

FieldModel perturbed(const FieldModel& truth) {
    FieldModel m = truth;
    m.jj1.ej0 *= 1.05;
    m.jj2.ej0 *= 0.95;
    m.jj1.b_delta = 1.5;
    m.jj2.b_delta = 0.1;
    m.jj1.b_phi0 *= 1.05;
    m.jj2.b_phi0 *= 1.02;
    return m;
}

double sum_sq(const std::vector<SpectrumPoint>& data, const FieldModel& m) {
    const double floor = spectrum_floor_ghz(m.e_c, {});
    double s = 0.0;
    for (const auto& p : data) {
        if (p.nu01_ghz < floor) continue;
        const double r = qubit_frequency_at(m, p.b_mT).omega01 - p.nu01_ghz;
        s += r * r;
    }
    return s;
}

std::vector<CoherenceSample> synthetic_envelope(const EnvelopeModel& truth, double sigma_khz, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma_khz);
    std::vector<CoherenceSample> out;
    for (double b : FieldSweep::range(-30.0, 30.0, 0.25).b_mT) {
        CoherenceSample s;
        s.b_mT = b;
        const double extra = sigma_khz > 0.0 ? std::abs(noise(rng)) : 0.0;
        s.gamma1 = (envelope_rate(truth, b) + extra) / constants::khz_per_inverse_us;
        out.push_back(s);
    }
    return out;
}

}  // namespace

TEST_CASE("parameter packing round trip", "[fits]") {
    const FieldModel m;
    const auto p = pack(m);
    CHECK(p[ej0_1] == 16.15);
    CHECK(p[b_phi0_2] == 25.5);
    const FieldModel back = unpack(p, FieldModel{});
    CHECK(pack(back) == p);
    CHECK(std::string(spectrum_param_names[e_c]) == "e_c_GHz");
}

TEST_CASE("spectrum fit recovers noise-free parameters", "[fits]") {
    const FieldModel truth;
    const auto data = synthetic_spectrum(truth, 0.0, 0);
    const auto fit = fit_spectrum(data, perturbed(truth));
    const auto expected = pack(truth);
    for (std::size_t k = 0; k < spectrum_param_count; ++k) {
        INFO(spectrum_param_names[k]);
        CHECK(fit.result.params[k] == Approx(expected[k]).epsilon(1e-5));
    }
    CHECK(fit.points_used < data.size());
    CHECK(fit.points_used > data.size() * 9 / 10);
}

TEST_CASE("spectrum fit with noise reaches the least-squares optimum", "[fits]") {
    const FieldModel truth;
    const auto data = synthetic_spectrum(truth, 0.002, 42);
    const auto fit = fit_spectrum(data, perturbed(truth));
    CHECK(fit.result.residual <= fit.initial_residual);
    // the truth is a feasible point, so the optimum cannot be worse than it
    CHECK(fit.result.residual <= sum_sq(data, truth) * (1.0 + 1e-9));
    const auto expected = pack(truth);
    for (auto k : {ej0_1, ej0_2, b_phi0_1, b_phi0_2}) {
        INFO(spectrum_param_names[k]);
        CHECK(std::abs(fit.result.params[k] / expected[k] - 1.0) < 0.02);
    }
    REQUIRE(fit.result.covariance_estimate.has_value());
    // error bars are consistent with the deviation from the truth
    for (auto k : {ej0_1, ej0_2, b_delta_1, b_delta_2, b_phi0_1, b_phi0_2}) {
        const auto kk = static_cast<Eigen::Index>(k);
        const double sd = std::sqrt((*fit.result.covariance_estimate)(kk, kk));
        INFO(spectrum_param_names[k] << " sd " << sd);
        CHECK(std::abs(fit.result.params[k] - expected[k]) < 4.0 * sd);
    }
    CHECK((*fit.result.covariance_estimate)(e_c, e_c) == 0.0);
}

TEST_CASE("spectrum fit is deterministic and never worse than the start", "[fits][property]") {
    const FieldModel truth;
    const auto data = synthetic_spectrum(truth, 0.002, 7, 0.5);
    optim::OptimizerConfig cfg;
    cfg.seed = 5;
    const auto a = fit_spectrum(data, perturbed(truth), default_frozen, cfg);
    const auto b = fit_spectrum(data, perturbed(truth), default_frozen, cfg);
    CHECK(a.result.params == b.result.params);
    CHECK(a.result.residual == b.result.residual);
    CHECK(a.result.residual <= a.initial_residual);

    // a start far from the truth still must not report a worse objective
    FieldModel far = truth;
    far.jj2.b_phi0 = 40.0;
    far.jj1.ej0 = 8.0;
    const auto c = fit_spectrum(data, far, default_frozen, cfg);
    CHECK(c.result.residual <= c.initial_residual);
}

TEST_CASE("frozen parameters stay at their initial values", "[fits]") {
    const FieldModel truth;
    const auto data = synthetic_spectrum(truth, 0.0, 0, 0.5);
    FrozenMask frozen = default_frozen;
    frozen[b_phi0_1] = true;
    frozen[e_c] = false;
    FieldModel start = truth;
    start.jj1.b_phi0 = 310.0;
    start.e_c = 0.2;
    const auto fit = fit_spectrum(data, start, frozen);
    CHECK(fit.result.params[b_phi0_1] == 310.0);
    CHECK(fit.result.params[e_c] != 0.2);
}

TEST_CASE("spectrum fit input validation", "[fits]") {
    const FieldModel truth;
    std::vector<SpectrumPoint> three{{-1.0, 4.6}, {0.0, 4.66}, {1.0, 4.65}};
    FrozenMask none{};
    CHECK_THROWS_WITH(fit_spectrum(three, truth, none), Catch::Matchers::ContainsSubstring("underdetermined"));
    CHECK_THROWS_AS(fit_spectrum(three, truth, none), ValidationError);
    FrozenMask all;
    all.fill(true);
    CHECK_THROWS_AS(fit_spectrum(synthetic_spectrum(truth, 0.0, 0, 1.0), truth, all), ValidationError);
    std::vector<SpectrumPoint> bad = synthetic_spectrum(truth, 0.0, 0, 1.0);
    bad[3].nu01_ghz = std::nan("");
    CHECK_THROWS_AS(fit_spectrum(bad, truth), ValidationError);
}

TEST_CASE("envelope fit on exact parabola", "[fits]") {
    const EnvelopeModel truth;
    const auto fit = fit_envelope(synthetic_envelope(truth, 0.0, 0));
    CHECK(fit.model.gamma_const_khz == Approx(53.4).epsilon(1e-6));
    CHECK(fit.model.curvature_khz_per_mT2 == Approx(0.785).epsilon(1e-6));
    CHECK(fit.model.b_offs_mT == Approx(2.25).epsilon(1e-6));
    CHECK(fit.points_below == 0);
}

TEST_CASE("envelope fit with one-sided noise", "[fits]") {
    const EnvelopeModel truth;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto samples = synthetic_envelope(truth, 10.0, seed);
        const auto fit = fit_envelope(samples);
        CHECK(std::abs(fit.model.gamma_const_khz / 53.4 - 1.0) < 0.05);
        CHECK(std::abs(fit.model.curvature_khz_per_mT2 / 0.785 - 1.0) < 0.05);
        CHECK(std::abs(fit.model.b_offs_mT / 2.25 - 1.0) < 0.05);
        CHECK(fit.fraction_on_or_above >= 0.99);
    }
}

TEST_CASE("envelope leaves at least 99 percent of points on or above", "[fits][property]") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> field(-40.0, 40.0);
    std::exponential_distribution<double> excess(0.05);
    std::normal_distribution<double> jitter(0.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<CoherenceSample> samples;
        for (int i = 0; i < 150; ++i) {
            CoherenceSample s;
            s.b_mT = field(rng);
            // two-sided jitter too, so the raw asymmetric fit would leave points below
            s.gamma1 = std::max(0.0, envelope_rate({}, s.b_mT) + excess(rng) + jitter(rng)) / 1e3;
            samples.push_back(s);
        }
        const auto fit = fit_envelope(samples);
        std::size_t below = 0;
        for (const auto& s : samples)
            if (*s.gamma1 * 1e3 < envelope_rate(fit.model, s.b_mT) - 1e-9) ++below;
        CHECK(below <= samples.size() / 100);
        CHECK(below == fit.points_below);
    }
}

TEST_CASE("envelope fit rejects degenerate input", "[fits]") {
    std::vector<CoherenceSample> same(10);
    for (auto& s : same) {
        s.b_mT = 4.0;
        s.gamma1 = 0.1;
    }
    CHECK_THROWS_WITH(fit_envelope(same), Catch::Matchers::ContainsSubstring("degenerate"));
    CHECK_THROWS_AS(fit_envelope(std::vector<CoherenceSample>(3)), ValidationError);
    // no gamma1 at all
    std::vector<CoherenceSample> empty_rates(10);
    CHECK_THROWS_AS(fit_envelope(empty_rates), ValidationError);
    // monotone data: the minimum is at the edge
    std::vector<CoherenceSample> edge;
    for (int i = 0; i < 10; ++i) {
        CoherenceSample s;
        s.b_mT = i;
        s.gamma1 = 0.05 + 0.01 * i;
        edge.push_back(s);
    }
    CHECK_THROWS_AS(fit_envelope(edge), ValidationError);
}

TEST_CASE("dephasing line with fixed slope", "[fits]") {
    std::vector<RatePair> exact;
    for (int i = 0; i < 20; ++i) {
        const double g1 = 0.05 + 0.1 * i;
        exact.push_back({g1, g1 / 2.0 + 0.0939});
    }
    const auto fit = fit_dephasing_line(exact);
    CHECK(fit.gamma_phi * 1e3 == Approx(93.9).epsilon(1e-12));
    CHECK(fit.half_width < 1e-12);
    CHECK(fit.count == 20);

    const auto single = fit_dephasing_line({{1.0, 0.5}});
    CHECK(single.gamma_phi == 0.0);
    CHECK_FALSE(single.half_width_defined);
    CHECK(std::isnan(single.half_width));

    CHECK_THROWS_AS(fit_dephasing_line({}), ValidationError);
}

TEST_CASE("dephasing line with noise", "[fits]") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> g1(0.02, 2.0);
    std::normal_distribution<double> noise(0.0, 0.010);
    std::vector<RatePair> pairs;
    for (int i = 0; i < 50; ++i) {
        const double g = g1(rng);
        pairs.push_back({g, g / 2.0 + 0.0939 + noise(rng)});
    }
    const auto fit = fit_dephasing_line(pairs);
    CHECK(std::abs(fit.gamma_phi * 1e3 - 93.9) < 5.0);
    CHECK(fit.half_width_defined);
    CHECK(fit.half_width * 1e3 == Approx(10.0 / std::sqrt(50.0)).epsilon(0.3));
}

TEST_CASE("dephasing line is shift equivariant", "[fits][property]") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> rate(0.0, 2.0);
    std::vector<RatePair> pairs;
    for (int i = 0; i < 30; ++i) pairs.push_back({rate(rng), rate(rng)});
    const auto base = fit_dephasing_line(pairs);
    for (double delta : {0.125, -0.5, 0.0625}) {
        auto shifted = pairs;
        for (auto& p : shifted) p.gamma2_ramsey += delta;
        CHECK(fit_dephasing_line(shifted).gamma_phi == Approx(base.gamma_phi + delta).margin(1e-14));
        CHECK(fit_dephasing_line(shifted).half_width == Approx(base.half_width).epsilon(1e-9));
    }
}
