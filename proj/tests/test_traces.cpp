#include <catch_amalgamated.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "seriesjj/traces.hpp"

using namespace seriesjj;
using namespace seriesjj::traces;
using Catch::Approx;

namespace {

std::vector<double> values(const TraceModel& m) {
    return std::visit(
        [](const auto& p) -> std::vector<double> {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, RabiParams>) return {p.t_pi, p.decay};
            else if constexpr (std::is_same_v<P, T1Params>) return {p.t1};
            else if constexpr (std::is_same_v<P, RamseyParams>) return {p.t2, p.detuning};
            else return {p.f_r, p.q_l, p.depth};
        },
        m);
}

struct Case {
    TraceModel model;
    double start;
    double stop;
};

std::vector<Case> cases() {
    const double linewidth = 7.5 / 5100.0;
    return {
        {RabiParams{0.05, 0.5}, 0.0, 1.0},
        {T1Params{0.49}, 0.0, 2.45},
        {T1Params{3.2}, 0.0, 16.0},
        {RamseyParams{2.0, 2.0}, 0.0, 6.0},
        {ResonatorParams{7.5, 5100.0, 0.6}, 7.5 - 5.0 * linewidth, 7.5 + 5.0 * linewidth},
    };
}

}  // namespace

TEST_CASE("trace model values", "[traces]") {
    CHECK(evaluate(T1Params{3.2}, 3.2) == Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(evaluate(RabiParams{0.05, 2.0}, 0.05) == Approx(-std::exp(-0.05 / 2.0)).epsilon(1e-14));
    CHECK(evaluate(RamseyParams{2.0, 0.5}, 0.0) == 1.0);
    CHECK(evaluate(ResonatorParams{7.5, 5100.0, 0.6}, 7.5) == Approx(0.4).epsilon(1e-15));
    // half depth one half-linewidth off resonance
    CHECK(evaluate(ResonatorParams{7.5, 5100.0, 0.6}, 7.5 * (1.0 + 0.5 / 5100.0)) == Approx(0.7).epsilon(1e-12));
    CHECK(std::string(to_string(TraceKind::ramsey)) == "ramsey");
    CHECK(kind_of(ResonatorParams{1.0, 1.0, 1.0}) == TraceKind::resonator);
}

TEST_CASE("simulated traces are deterministic per seed", "[traces][property]") {
    TraceConfig cfg;
    cfg.noise_sigma = 0.02;
    cfg.seed = 12;
    const auto a = simulate_trace(T1Params{1.0}, cfg);
    const auto b = simulate_trace(T1Params{1.0}, cfg);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    cfg.seed = 13;
    CHECK(simulate_trace(T1Params{1.0}, cfg).y != a.y);
    CHECK(a.x.size() == 101);
    CHECK(a.x.back() == Approx(1.0));
}

TEST_CASE("trace configuration and model validation", "[traces]") {
    TraceConfig cfg;
    cfg.n_points = 5;
    CHECK_THROWS_AS(simulate_trace(T1Params{1.0}, cfg), ValidationError);
    cfg = {};
    cfg.noise_sigma = -0.1;
    CHECK_THROWS_AS(simulate_trace(T1Params{1.0}, cfg), ValidationError);
    cfg = {};
    cfg.span_stop = cfg.span_start;
    CHECK_THROWS_AS(simulate_trace(T1Params{1.0}, cfg), ValidationError);
    CHECK_THROWS_AS(simulate_trace(T1Params{-1.0}, {}), ValidationError);
    CHECK_THROWS_AS(simulate_trace(RabiParams{0.0, 1.0}, {}), ValidationError);

    Trace bad{{0.0, 1.0, 0.5, 2.0, 3.0, 4.0, 5.0, 6.0}, {1, 1, 1, 1, 1, 1, 1, 1}};
    CHECK_THROWS_AS(fit_trace(TraceKind::t1, bad), ValidationError);
    Trace short_trace{{0.0, 1.0}, {1.0, 0.5}};
    CHECK_THROWS_AS(fit_trace(TraceKind::t1, short_trace), ValidationError);
}

TEST_CASE("noise-free round trip for every kind", "[traces][property]") {
    for (const auto& c : cases()) {
        TraceConfig cfg;
        cfg.span_start = c.start;
        cfg.span_stop = c.stop;
        const auto fit = fit_trace(kind_of(c.model), simulate_trace(c.model, cfg));
        const auto truth = values(c.model);
        const auto got = values(fit.params);
        INFO(to_string(kind_of(c.model)));
        CHECK(fit.converged);
        for (std::size_t i = 0; i < truth.size(); ++i) CHECK(got[i] == Approx(truth[i]).epsilon(1e-6));
    }
}

TEST_CASE("resonator quality factor matches the linewidth", "[traces]") {
    const ResonatorParams truth{7.5, 5100.0, 0.6};
    TraceConfig cfg;
    const double linewidth = truth.f_r / truth.q_l;
    cfg.span_start = truth.f_r - 5.0 * linewidth;
    cfg.span_stop = truth.f_r + 5.0 * linewidth;
    cfg.n_points = 201;
    const auto fit = std::get<ResonatorParams>(fit_trace(TraceKind::resonator, simulate_trace(truth, cfg)).params);
    CHECK(std::abs(fit.q_l / 5100.0 - 1.0) < 0.01);
    CHECK(fit.f_r / fit.q_l == Approx(linewidth).epsilon(0.01));
}

TEST_CASE("noisy round trip median error below 3 percent", "[traces][property]") {
    for (const auto& c : cases()) {
        const auto truth = values(c.model);
        std::vector<std::vector<double>> errors(truth.size());
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            TraceConfig cfg;
            cfg.seed = seed;
            cfg.noise_sigma = 0.02;
            cfg.span_start = c.start;
            cfg.span_stop = c.stop;
            const auto got = values(fit_trace(kind_of(c.model), simulate_trace(c.model, cfg)).params);
            for (std::size_t i = 0; i < truth.size(); ++i) errors[i].push_back(std::abs(got[i] / truth[i] - 1.0));
        }
        INFO(to_string(kind_of(c.model)));
        for (auto& e : errors) {
            std::nth_element(e.begin(), e.begin() + 50, e.end());
            CHECK(e[50] < 0.03);
        }
    }
}

TEST_CASE("sequence reproduces ground truth without noise", "[traces]") {
    const SequenceTruth truth;
    SequenceConfig cfg;
    const double b = truth.envelope.b_offs_mT;
    const auto result = run_sequence(b, truth, cfg, SweepDirection::down);
    const double gamma1 = envelope_rate(truth.envelope, b) / 1e3;
    const double gamma2 = gamma1 / 2.0 + truth.gamma_phi_per_us;
    REQUIRE(result.sample.gamma1.has_value());
    REQUIRE(result.sample.gamma2_ramsey.has_value());
    CHECK(*result.sample.gamma1 == Approx(gamma1).epsilon(1e-6));
    CHECK(*result.sample.gamma2_ramsey == Approx(gamma2).epsilon(1e-6));
    CHECK(result.sample.direction == SweepDirection::down);
    CHECK(result.f_r_ghz == Approx(7.5).epsilon(1e-9));
    CHECK(result.t_pi_us == Approx(0.05).epsilon(1e-6));
    CHECK(result.nu01_ghz == Approx(qubit_frequency_at(truth.field, b).omega01));
    const auto phi = pure_dephasing(*result.sample.gamma1, *result.sample.gamma2_ramsey);
    CHECK(phi.gamma_phi == Approx(truth.gamma_phi_per_us).epsilon(1e-6));
}

TEST_CASE("sequence with noise", "[traces]") {
    SequenceTruth truth;
    truth.gamma_hyst_khz = 40.0;
    SequenceConfig cfg;
    cfg.trace.noise_sigma = 0.02;
    cfg.trace.seed = 3;
    const double b = 10.0;
    const auto result = run_sequence(b, truth, cfg);
    const double gamma1 = (envelope_rate(truth.envelope, b) + truth.gamma_hyst_khz) / 1e3;
    const double gamma2 = gamma1 / 2.0 + truth.gamma_phi_per_us;
    CHECK(std::abs(*result.sample.gamma1 / gamma1 - 1.0) < 0.05);
    CHECK(std::abs(*result.sample.gamma2_ramsey / gamma2 - 1.0) < 0.05);
}

TEST_CASE("sequence dephasing recovers the injected rate", "[traces][property]") {
    // 0.02 amplitude noise gives roughly 1-2% rate errors; propagate that to gamma_phi
    const SequenceTruth truth;
    SequenceConfig cfg;
    cfg.trace.noise_sigma = 0.02;
    std::vector<double> estimates;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        cfg.trace.seed = seed;
        const auto r = run_sequence(0.0, truth, cfg);
        const double g1 = *r.sample.gamma1;
        const double g2 = *r.sample.gamma2_ramsey;
        const double bound = 3.0 * std::hypot(0.02 * g2, 0.02 * g1 / 2.0);
        const double phi = pure_dephasing(g1, g2).gamma_phi;
        CHECK(std::abs(phi - truth.gamma_phi_per_us) < bound);
        estimates.push_back(phi);
    }
    double mean = 0.0;
    for (double e : estimates) mean += e;
    mean /= static_cast<double>(estimates.size());
    CHECK(std::abs(mean - truth.gamma_phi_per_us) < 0.005);
}

TEST_CASE("sequence is deterministic and refuses invalid regimes", "[traces]") {
    const SequenceTruth truth;
    SequenceConfig cfg;
    cfg.trace.noise_sigma = 0.02;
    cfg.trace.seed = 9;
    const auto a = run_sequence(5.0, truth, cfg);
    const auto b = run_sequence(5.0, truth, cfg);
    CHECK(*a.sample.gamma1 == *b.sample.gamma1);
    CHECK(*a.sample.gamma2_ramsey == *b.sample.gamma2_ramsey);
    CHECK_THROWS_AS(run_sequence(-0.2 + 25.5, truth, cfg), ValidationError);
    SequenceTruth negative = truth;
    negative.gamma_phi_per_us = -1.0;
    CHECK_THROWS_AS(run_sequence(0.0, negative, cfg), ValidationError);
}

TEST_CASE("a 21-point sweep fits the time budget", "[traces]") {
    const SequenceTruth truth;
    SequenceConfig cfg;
    cfg.trace.noise_sigma = 0.02;
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t done = 0;
    for (double b : FieldSweep::range(-20.0, 20.0, 2.0).b_mT) {
        run_sequence(b, truth, cfg);
        ++done;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(done == 21);
    CHECK(seconds < 10.0);
}
