#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ksr/koopman.hpp"

using namespace ksr;

namespace {

constexpr double kPi = std::numbers::pi;

double max_error_on_grid(const KoopmanModel& model, const Signal& sig, double lo, double hi,
                         int n) {
    std::vector<double> times;
    for (int i = 0; i < n; ++i) times.push_back(lo + (hi - lo) * i / (n - 1));
    const auto series = reconstruct(model, times);
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
        err = std::max(err, std::abs(series.values[static_cast<std::size_t>(i)] -
                                     evaluate(sig, times[static_cast<std::size_t>(i)])));
    }
    return err;
}

double max_abs_signal(const Signal& sig, double lo, double hi, int n) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
        m = std::max(m, std::abs(evaluate(sig, lo + (hi - lo) * i / (n - 1))));
    }
    return m;
}

int preset_dim(const std::string& name) {
    if (name == "paper-a") return 6;
    if (name == "paper-b") return 4;
    if (name == "paper-c") return 6;
    return 8;
}

} // namespace

TEST_CASE("identify: scalar geometric and constant sequences") {
    SampleSet geo;
    geo.period = 0.5;
    for (int k = 0; k < 8; ++k) geo.values.push_back(std::exp(-0.5 * k * 0.5));
    const auto m = identify(geo, 1);
    CHECK(std::abs(m.u_dt(0, 0) - Complex(std::exp(-0.25))) < 1e-12);
    CHECK(std::abs(m.l_gen(0, 0) - Complex(-0.5)) < 1e-12);

    SampleSet cst;
    cst.period = 0.5;
    cst.values.assign(6, 1.0);
    const auto mc = identify(cst, 1);
    CHECK(std::abs(mc.u_dt(0, 0) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(mc.l_gen(0, 0)) < 1e-14);
    CHECK(mc.diagnostics.pinv_residual < 1e-14);
}

TEST_CASE("identify: preset a frequencies at T_s = 0.78") {
    const auto ss = sample(preset("paper-a"), 0.78, 20);
    const auto model = identify(ss, 6);
    auto dec = linalg::eig(model.l_gen);
    std::vector<double> imags;
    for (int i = 0; i < 6; ++i) {
        CHECK(std::abs(dec.eigenvalues(i).real()) < 1e-6);
        imags.push_back(dec.eigenvalues(i).imag());
    }
    std::sort(imags.begin(), imags.end());
    const std::vector<double> expected{-4.0, -2.0, -0.5, 0.5, 2.0, 4.0};
    for (int i = 0; i < 6; ++i) CHECK(std::abs(imags[static_cast<std::size_t>(i)] - expected[static_cast<std::size_t>(i)]) < 1e-6);
}

TEST_CASE("identify: model invariants hold") {
    const auto ss = sample(preset("paper-b"), 0.3, 24);
    const auto model = identify(ss, 4);
    const auto back = linalg::expm(model.period * model.l_gen);
    CHECK((back - model.u_dt).norm() <= 1e-7 * (1.0 + model.u_dt.norm()));
    auto dec = linalg::eig(model.period * model.l_gen);
    for (int i = 0; i < 4; ++i) {
        CHECK(dec.eigenvalues(i).imag() > -kPi);
        CHECK(dec.eigenvalues(i).imag() < kPi);
    }
    CHECK(model.diagnostics.branch_margin > 0.0);
}

TEST_CASE("identify: branch cut surfaces as the aliasing boundary") {
    SampleSet alt; // (-0.5)^k has its DT eigenvalue on the negative real axis
    alt.period = 1.0;
    for (int k = 0; k < 8; ++k) alt.values.push_back(std::pow(-0.5, k));
    CHECK_THROWS_AS(identify(alt, 1), aliasing_boundary_error);
}

TEST_CASE("propagate: semigroup anchors") {
    const auto ss = sample(preset("paper-b"), 0.3, 24);
    const auto model = identify(ss, 4);

    CHECK((propagate(model, 0.0) - linalg::Matrix::Identity(4, 4)).norm() < 1e-14);
    CHECK((propagate(model, model.period) - model.u_dt).norm() <=
          1e-7 * model.u_dt.norm());
    CHECK((propagate(model, 2 * model.period) - model.u_dt * model.u_dt).norm() <=
          1e-6 * (model.u_dt * model.u_dt).norm());

    for (double t1 : {0.1, 0.35, 1.0}) {
        for (double t2 : {0.1, 0.35, 1.0}) {
            const linalg::Matrix lhs = propagate(model, t1 + t2);
            const linalg::Matrix rhs = propagate(model, t1) * propagate(model, t2);
            CHECK((lhs - rhs).norm() <= 1e-6 * std::max(1.0, rhs.norm()));
        }
    }

    CHECK_THROWS_AS(propagate(model, -0.1), precondition_error);
    CHECK_NOTHROW(propagate(model, -0.1, /*allow_backward=*/true));
}

TEST_CASE("reconstruct: anchor at zero and interpolation of anchor samples") {
    const auto ss = sample(preset("paper-a"), 0.3, 30);
    const auto model = identify(ss, 6);
    const auto at0 = reconstruct(model, {0.0});
    CHECK(at0.values[0] == ss.values[0]); // U^0 e1 = e1 exactly

    std::vector<double> anchor_times;
    for (int k = 0; k < 6; ++k) anchor_times.push_back(k * 0.3);
    const auto at_anchor = reconstruct(model, anchor_times);
    for (int k = 0; k < 6; ++k) {
        CHECK(std::abs(at_anchor.values[static_cast<std::size_t>(k)] -
                       ss.values[static_cast<std::size_t>(k)]) < 1e-8);
    }
    CHECK(at_anchor.method == "kr");
}

TEST_CASE("reconstruct: preset b at near-critical sampling") {
    const auto ss = sample(preset("paper-b"), 0.78, 20);
    const auto model = identify(ss, 4);
    const double err = max_error_on_grid(model, preset("paper-b"), 0.0, 14.8, 1000);
    CHECK(err <= 1e-6);
}

TEST_CASE("reconstruct: aliased preset a still passes through the samples") {
    const double ts = 0.79;
    const auto ss = sample(preset("paper-a"), ts, 20);
    const auto model = identify(ss, 6);

    std::vector<double> sample_times;
    for (int k = 0; k < 20; ++k) sample_times.push_back(k * ts);
    const auto at_samples = reconstruct(model, sample_times);
    double interp_err = 0.0;
    for (int k = 0; k < 20; ++k) {
        interp_err = std::max(interp_err, std::abs(at_samples.values[static_cast<std::size_t>(k)] -
                                                   ss.values[static_cast<std::size_t>(k)]));
    }
    CHECK(interp_err <= 1e-6);
    CHECK(max_error_on_grid(model, preset("paper-a"), 0.0, 19 * ts, 1000) > 0.1);

    // the identified spectrum folds below pi/ts, so the model sees no aliasing
    const auto rep = estimate_spectrum(model);
    CHECK(rep.max_abs_imag < kPi / ts);
    CHECK(rep.verdict == AliasingVerdict::NoAliasing);
}

TEST_CASE("exactness at the minimal embedding (presets)") {
    for (const auto& name : preset_names()) {
        const Signal sig = preset(name);
        const int m = min_space_dimension(sig);
        const int n = 2 * m + 2;
        const double ts = 0.3;
        const auto model = identify(sample(sig, ts, n), m);
        const double hi = (n - 1) * ts;
        const double scale = 1.0 + max_abs_signal(sig, 0.0, hi, 600);
        CHECK(max_error_on_grid(model, sig, 0.0, hi, 600) <= 1e-6 * scale);
    }
}

TEST_CASE("monotone refinement: preset a error vs sample count") {
    const Signal sig = preset("paper-a");
    const double ts = 0.3;
    std::vector<double> errs;
    for (int n : {14, 20, 40}) {
        const auto model = identify(sample(sig, ts, n), 6);
        errs.push_back(max_error_on_grid(model, sig, 0.0, (14 - 1) * ts, 500));
    }
    CHECK(errs[1] <= 2.0 * errs[0]);
    CHECK(errs[2] <= 2.0 * errs[1]);
}

TEST_CASE("spectrum recovery at T_s = 0.3, N = 40") {
    struct Case {
        const char* name;
        std::vector<Complex> lambdas;
        int dim;
    };
    const std::vector<Case> cases{
        {"paper-a", {{0, 2}, {0, -2}, {0, 0.5}, {0, -0.5}, {0, 4}, {0, -4}}, 6},
        {"paper-b", {{-1, 4}, {-1, -4}, {-0.5, 2}, {-0.5, -2}}, 4},
        {"paper-c", {{0, 4}, {0, -4}}, 4},
        {"paper-d", {{-1, 4}, {-1, -4}}, 4},
    };
    for (const auto& c : cases) {
        const auto model = identify(sample(preset(c.name), 0.3, 40), c.dim);
        const auto rep = estimate_spectrum(model);
        double hausdorff = 0.0;
        for (const auto& ev : rep.eigenvalues) {
            double best = 1e300;
            for (const auto& lam : c.lambdas) best = std::min(best, std::abs(ev - lam));
            hausdorff = std::max(hausdorff, best);
        }
        for (const auto& lam : c.lambdas) {
            double best = 1e300;
            for (const auto& ev : rep.eigenvalues) best = std::min(best, std::abs(ev - lam));
            hausdorff = std::max(hausdorff, best);
        }
        CHECK(hausdorff <= 1e-6);
        CHECK(rep.verdict == AliasingVerdict::NoAliasing);
        CHECK(std::abs(rep.critical_period - kPi / 4.0) < 1e-6);
    }
}

TEST_CASE("estimate_spectrum: constant-signal model") {
    SampleSet cst;
    cst.period = 0.5;
    cst.values.assign(6, 2.5);
    const auto rep = estimate_spectrum(identify(cst, 1));
    CHECK(rep.max_abs_imag < 1e-12);
    CHECK(std::isinf(rep.critical_period));
    CHECK(rep.verdict == AliasingVerdict::NoAliasing);
}

TEST_CASE("estimate_spectrum: preset c identified from exact data at 0.6") {
    const auto model = identify(sample(preset("paper-c"), 0.6, 20), 4);
    const auto rep = estimate_spectrum(model);
    CHECK(rep.max_abs_imag == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(rep.critical_period == doctest::Approx(kPi / 4.0).epsilon(1e-6));
    CHECK(rep.verdict == AliasingVerdict::NoAliasing);
}

TEST_CASE("reconstruct_windowed: agrees with plain reconstruction, hits samples") {
    const auto ss = sample(preset("paper-b"), 0.3, 30);
    const auto model = identify(ss, 4);
    const double span = (30 - 4) * 0.3;
    std::vector<double> grid;
    for (int i = 0; i < 400; ++i) grid.push_back(span * 0.999 * i / 399.0);
    const auto w = reconstruct_windowed(model, ss, grid);
    const auto p = reconstruct(model, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(std::abs(w.values[i] - p.values[i]) <= 1e-6);
    }
    CHECK(w.method == "kr-windowed");

    // exact (noisy) sample values at the window anchors
    auto noisy = add_white_noise(ss, 20.0, 11);
    const auto nm = identify_with_backoff(noisy, 4);
    for (int k = 0; k < 30 - nm.embedding; ++k) {
        const auto one = reconstruct_windowed(nm, noisy, {k * 0.3});
        CHECK(one.values[0] == doctest::Approx(noisy.values[static_cast<std::size_t>(k)]).epsilon(1e-12));
    }

    CHECK_THROWS_AS(reconstruct_windowed(model, ss, {span + 0.1}), range_error);
    CHECK_THROWS_AS(reconstruct_windowed(model, ss, {-0.5}), range_error);
}

TEST_CASE("windowed reconstruction under 30 dB noise stays near the truth") {
    for (const auto& name : preset_names()) {
        const Signal sig = preset(name);
        const auto clean = sample(sig, 0.3, 20);
        const auto noisy = add_white_noise(clean, 30.0, 11);
        const auto model = identify_with_backoff(noisy, preset_dim(name));
        const int m = model.embedding;
        const double span = (20 - m) * 0.3;
        std::vector<double> grid;
        for (int i = 0; i < 500; ++i) grid.push_back(span * 0.999 * i / 499.0);
        const auto rec = reconstruct_windowed(model, noisy, grid);
        double sq = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double e = rec.values[i] - evaluate(sig, grid[i]);
            sq += e * e;
        }
        const double rms = std::sqrt(sq / static_cast<double>(grid.size()));
        double power = 0.0;
        for (double v : clean.values) power += v * v;
        power /= static_cast<double>(clean.values.size());
        const double noise_rms = std::sqrt(power / std::pow(10.0, 3.0));
        CHECK(rms <= 3.0 * noise_rms);
    }
}

TEST_CASE("model json round trip") {
    const auto model = identify(sample(preset("paper-b"), 0.3, 24), 4);
    const auto back = model_from_json_text(model_to_json_text(model));
    CHECK((back.u_dt - model.u_dt).norm() == 0.0);
    CHECK((back.l_gen - model.l_gen).norm() == 0.0);
    CHECK(back.anchor == model.anchor);
    CHECK(back.period == model.period);
    CHECK(back.diagnostics.pinv_residual == model.diagnostics.pinv_residual);

    const auto r1 = reconstruct(model, {0.4, 1.1});
    const auto r2 = reconstruct(back, {0.4, 1.1});
    CHECK(r1.values == r2.values);
}
