#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ksr/sampling.hpp"
#include "ksr/signal.hpp"

using namespace ksr;

namespace {

constexpr double kPi = std::numbers::pi;

// term-by-term analytic derivative, used as the oracle for evaluate()
double derivative_at(const Signal& s, double t) {
    double acc = 0.0;
    for (const auto& term : s.terms) {
        if (term.degree > 0) {
            acc += term.amplitude * term.degree * std::pow(t, term.degree - 1) *
                   std::exp(term.growth * t) * std::cos(term.omega * t + term.phase);
        }
        acc += term.amplitude * term.growth * std::pow(t, term.degree) *
               std::exp(term.growth * t) * std::cos(term.omega * t + term.phase);
        acc -= term.amplitude * term.omega * std::pow(t, term.degree) *
               std::exp(term.growth * t) * std::sin(term.omega * t + term.phase);
    }
    return acc;
}

} // namespace

TEST_CASE("evaluate: printed formulas") {
    // -cos 0 + cos(pi/2) + 1.5 cos(pi/3) = -1 + 0 + 0.75
    CHECK(evaluate(preset("paper-a"), 0.0) == doctest::Approx(-0.25).epsilon(1e-14));

    CHECK(evaluate(make_cardinal_sine(0.0, 4.0), 0.0) == doctest::Approx(1.0));

    CHECK(evaluate(preset("paper-c"), 1.0) ==
          doctest::Approx(std::cos(4.0 + kPi / 3)).epsilon(1e-14));
}

TEST_CASE("evaluate: cardinal sine removable singularity is smooth") {
    const Signal cs = make_cardinal_sine(-0.3, 2.0, 1.5);
    const double just_off = evaluate(cs, 1e-12);
    CHECK(std::abs(just_off - evaluate(cs, 0.0)) < 1e-9);
}

TEST_CASE("koopman_spectrum: critical periods of the presets") {
    for (const auto& name : preset_names()) {
        const auto rep = koopman_spectrum(preset(name));
        CHECK(std::abs(rep.critical_period - kPi / 4.0) < 1e-12);
        CHECK(rep.max_abs_imag == doctest::Approx(4.0));
    }
}

TEST_CASE("koopman_spectrum: constant signal has empty imaginary part") {
    const Signal c = make_term_sum({{1.0, 0, 0.0, 0.0, 0.0}});
    const auto rep = koopman_spectrum(c);
    CHECK(rep.max_abs_imag == 0.0);
    CHECK(std::isinf(rep.critical_period));
}

TEST_CASE("koopman_spectrum: cardinal sine reports its band endpoints") {
    const auto rep = koopman_spectrum(make_cardinal_sine(-0.4, 2.0), 1.0);
    REQUIRE(rep.eigenvalues.size() == 2);
    CHECK(rep.eigenvalues[0] == Complex(-0.4, 2.0));
    CHECK(rep.eigenvalues[1] == Complex(-0.4, -2.0));
    CHECK(rep.max_abs_imag == 2.0);
    CHECK(rep.critical_period == doctest::Approx(kPi / 2.0));
    CHECK(rep.verdict == AliasingVerdict::NoAliasing); // 1.0 < pi/2
}

TEST_CASE("koopman_spectrum: eigenvalue set of preset b") {
    const auto rep = koopman_spectrum(preset("paper-b"));
    REQUIRE(rep.eigenvalues.size() == 4);
    auto has = [&](double re, double im) {
        for (const auto& ev : rep.eigenvalues) {
            if (std::abs(ev.real() - re) < 1e-12 && std::abs(ev.imag() - im) < 1e-12)
                return true;
        }
        return false;
    };
    CHECK(has(-1.0, 4.0));
    CHECK(has(-1.0, -4.0));
    CHECK(has(-0.5, 2.0));
    CHECK(has(-0.5, -2.0));
}

TEST_CASE("koopman_spectrum: verdict against a sampling period") {
    const Signal s = preset("paper-a"); // T_gamma = pi/4
    CHECK(koopman_spectrum(s, 0.3).verdict == AliasingVerdict::NoAliasing);
    CHECK(koopman_spectrum(s, 0.79).verdict == AliasingVerdict::Aliasing);
    CHECK(koopman_spectrum(s, kPi / 4.0).verdict == AliasingVerdict::Critical);
    CHECK(koopman_spectrum(s, kPi / 4.0 + 5e-13).verdict == AliasingVerdict::Critical);
}

TEST_CASE("min_space_dimension: analytic counts") {
    CHECK(min_space_dimension(preset("paper-a")) == 6);
    CHECK(min_space_dimension(preset("paper-b")) == 4);
    // degree-1 conjugate pairs: 2 eigenvalues x multiplicity 2
    CHECK(min_space_dimension(preset("paper-c")) == 4);
    CHECK(min_space_dimension(preset("paper-d")) == 4);
    CHECK(min_space_dimension(make_term_sum({{1.0, 0, 0.0, 2.0, 0.0}})) == 2);
    CHECK_THROWS_AS(min_space_dimension(make_cardinal_sine(0.0, 2.0)), precondition_error);
}

TEST_CASE("min_space_dimension equals numerical Hankel rank for the presets") {
    for (const auto& name : preset_names()) {
        const Signal s = preset(name);
        const SampleSet ss = sample(s, 0.3, 40);
        const auto sel = select_dimension(ss, 12, 1e-10);
        CHECK(sel.dimension == min_space_dimension(s));
    }
}

TEST_CASE("evaluate: central difference matches the analytic derivative") {
    const double h = 1e-6;
    for (const auto& name : preset_names()) {
        const Signal s = preset(name);
        for (int i = 0; i <= 120; ++i) {
            const double t = 12.0 * i / 120.0;
            const double numeric = (evaluate(s, t + h) - evaluate(s, t - h)) / (2.0 * h);
            CHECK(std::abs(numeric - derivative_at(s, t)) < 1e-5);
        }
    }
}

TEST_CASE("preset b decays and its spectrum is strictly stable") {
    const auto rep = koopman_spectrum(preset("paper-b"));
    for (const auto& ev : rep.eigenvalues) CHECK(ev.real() < 0.0);
    CHECK(std::abs(evaluate(preset("paper-b"), 40.0)) < 1e-9);
}

TEST_CASE("add_white_noise: sentinel and determinism") {
    SampleSet ss;
    ss.period = 1.0;
    ss.values = {1.0, 1.0, 1.0, 1.0};
    const auto same = add_white_noise(ss, std::numeric_limits<double>::infinity(), 5);
    CHECK(same.values == ss.values);
    CHECK(!same.noise.has_value());

    const auto a = add_white_noise(ss, 20.0, 42);
    const auto b = add_white_noise(ss, 20.0, 42);
    CHECK(a.values == b.values);
    CHECK(a.noise->snr_db == 20.0);
    CHECK(a.noise->seed == 42);
    CHECK(a.values != ss.values);
}

TEST_CASE("add_white_noise: variance matches the SNR definition") {
    SampleSet ss;
    ss.period = 1.0;
    ss.values = {1.0, 1.0, 1.0, 1.0};
    // 10^4 draws across seeds; estimator sigma ~ var*sqrt(2/(n-1))
    const int reps = 2500;
    double sq = 0.0;
    std::size_t n = 0;
    for (int seed = 0; seed < reps; ++seed) {
        const auto noisy = add_white_noise(ss, 20.0, static_cast<std::uint64_t>(seed));
        for (std::size_t k = 0; k < ss.values.size(); ++k) {
            const double d = noisy.values[k] - ss.values[k];
            sq += d * d;
            ++n;
        }
    }
    const double expected = 0.01; // P=1, snr 20 dB
    const double est = sq / static_cast<double>(n);
    const double sigma = expected * std::sqrt(2.0 / static_cast<double>(n - 1));
    CHECK(std::abs(est - expected) <= 3.0 * sigma);
}

TEST_CASE("add_white_noise: power ratio on preset a") {
    const SampleSet clean = sample(preset("paper-a"), 0.3, 2000);
    double ps = 0.0;
    for (double v : clean.values) ps += v * v;
    ps /= static_cast<double>(clean.values.size());
    const auto noisy = add_white_noise(clean, 10.0, 9);
    double pn = 0.0;
    for (std::size_t k = 0; k < clean.values.size(); ++k) {
        const double d = noisy.values[k] - clean.values[k];
        pn += d * d;
    }
    pn /= static_cast<double>(clean.values.size());
    CHECK(pn / ps == doctest::Approx(0.1).epsilon(0.15));
}

TEST_CASE("add_white_noise: all-zero signal is rejected") {
    SampleSet ss;
    ss.period = 1.0;
    ss.values = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(add_white_noise(ss, 10.0, 1), precondition_error);
}

TEST_CASE("signal json round trip") {
    const std::string text = R"({"label":"demo","kind":"term_sum",
        "terms":[{"a":-1,"l":0,"sigma":0,"omega":2,"phi":0},
                 {"a":1.5,"l":1,"sigma":-0.25,"omega":4,"phi":1.0471975511965976}]})";
    const Signal s = signal_from_json_text(text);
    CHECK(s.label == "demo");
    REQUIRE(s.terms.size() == 2);
    CHECK(s.terms[1].degree == 1);
    const Signal back = signal_from_json_text(signal_to_json_text(s));
    CHECK(back.terms[1].growth == s.terms[1].growth);
    CHECK(evaluate(back, 0.7) == evaluate(s, 0.7));

    const Signal cs = signal_from_json_text(R"({"kind":"cardinal_sine","alpha":0,"c":4,"scale":1})");
    CHECK(evaluate(cs, 0.0) == doctest::Approx(1.0));
    const Signal cs2 = signal_from_json_text(signal_to_json_text(cs));
    CHECK(evaluate(cs2, 0.31) == evaluate(cs, 0.31));
}

TEST_CASE("signal validation rejects malformed inputs") {
    CHECK_THROWS_AS(make_term_sum({}), precondition_error);
    CHECK_THROWS_AS(make_term_sum({{0.0, 0, 0, 1, 0}}), precondition_error);
    CHECK_THROWS_AS(make_term_sum({{1.0, 9, 0, 1, 0}}), precondition_error);
    CHECK_THROWS_AS(make_cardinal_sine(0.0, 0.0), precondition_error);
    CHECK_THROWS_AS(preset("paper-z"), precondition_error);
}
