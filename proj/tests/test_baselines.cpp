#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ksr/baselines.hpp"
#include "ksr/koopman.hpp"

using namespace ksr;

namespace {

SampleSet from_values(std::vector<double> v, double ts) {
    SampleSet ss;
    ss.period = ts;
    ss.values = std::move(v);
    return ss;
}

std::vector<double> interior_grid(double lo, double hi, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * (i + 0.5) / n);
    return g;
}

} // namespace

TEST_CASE("all methods reproduce a straight line") {
    std::vector<double> v;
    for (int k = 0; k < 10; ++k) v.push_back(0.7 * k - 2.0);
    const auto ss = from_values(v, 1.0);
    const auto grid = interior_grid(0.0, 9.0, 40);
    for (BaselineMethod m : {BaselineMethod{BaselineKind::CubicSpline},
                             BaselineMethod{BaselineKind::Pchip},
                             BaselineMethod{BaselineKind::PolyFit, 3}}) {
        const auto rec = baseline_reconstruct(m, ss, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(std::abs(rec.values[i] - (0.7 * grid[i] - 2.0)) < 1e-10);
        }
    }
}

TEST_CASE("polyfit reproduces t^2 exactly from degree 2 up") {
    std::vector<double> v;
    for (int k = 0; k < 12; ++k) v.push_back(0.25 * k * k);
    const auto ss = from_values(v, 0.5); // t = 0.5k, value = t^2
    const auto grid = interior_grid(0.0, 5.5, 30);
    for (int degree : {2, 5}) {
        const auto rec = baseline_reconstruct({BaselineKind::PolyFit, degree}, ss, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(std::abs(rec.values[i] - grid[i] * grid[i]) < 1e-9);
        }
    }
}

TEST_CASE("spline and pchip interpolate the knots") {
    const auto ss = sample(preset("paper-a"), 0.6, 20);
    std::vector<double> knots;
    for (int k = 0; k < 20; ++k) knots.push_back(0.6 * k);
    for (auto kind : {BaselineKind::CubicSpline, BaselineKind::Pchip}) {
        const auto rec = baseline_reconstruct({kind}, ss, knots);
        for (int k = 0; k < 20; ++k) {
            CHECK(std::abs(rec.values[static_cast<std::size_t>(k)] -
                           ss.values[static_cast<std::size_t>(k)]) <= 1e-12);
        }
    }
}

TEST_CASE("pchip preserves monotonicity without overshoot") {
    std::vector<double> v{0.0, 0.05, 0.1, 0.8, 0.9, 1.0, 1.0, 1.0};
    const auto ss = from_values(v, 1.0);
    const auto grid = interior_grid(0.0, 7.0, 300);
    const auto rec = baseline_reconstruct({BaselineKind::Pchip}, ss, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(rec.values[i] >= 0.0 - 1e-12);
        CHECK(rec.values[i] <= 1.0 + 1e-12);
        if (i > 0) CHECK(rec.values[i] >= rec.values[i - 1] - 1e-12);
    }
}

TEST_CASE("polyfit at degree N-1 interpolates (N <= 14)") {
    const auto ss = sample(preset("paper-b"), 0.5, 12);
    std::vector<double> knots;
    double scale = 0.0;
    for (int k = 0; k < 12; ++k) {
        knots.push_back(0.5 * k);
        scale = std::max(scale, std::abs(ss.values[static_cast<std::size_t>(k)]));
    }
    const auto rec = baseline_reconstruct({BaselineKind::PolyFit, 11}, ss, knots);
    for (int k = 0; k < 12; ++k) {
        CHECK(std::abs(rec.values[static_cast<std::size_t>(k)] -
                       ss.values[static_cast<std::size_t>(k)]) <= 1e-6 * (1.0 + scale));
    }
}

TEST_CASE("extrapolation and degree bounds are rejected") {
    const auto ss = sample(preset("paper-a"), 0.5, 10);
    CHECK_THROWS_AS(baseline_reconstruct({BaselineKind::CubicSpline}, ss, {-0.2}), range_error);
    CHECK_THROWS_AS(baseline_reconstruct({BaselineKind::Pchip}, ss, {4.8}), range_error);
    CHECK_THROWS_AS(baseline_reconstruct({BaselineKind::PolyFit, 10}, ss, {1.0}),
                    precondition_error);
    CHECK_THROWS_AS(baseline_reconstruct({BaselineKind::PolyFit, 0}, ss, {1.0}),
                    precondition_error);
}

TEST_CASE("not-a-knot boundary reproduces a global cubic exactly") {
    std::vector<double> v;
    for (int k = 0; k < 8; ++k) {
        const double t = 0.5 * k;
        v.push_back(0.3 * t * t * t - t * t + 0.2 * t + 1.0);
    }
    const auto ss = from_values(v, 0.5);
    const auto grid = interior_grid(0.0, 3.5, 50);
    BaselineMethod m{BaselineKind::CubicSpline};
    m.boundary = SplineBoundary::NotAKnot;
    const auto rec = baseline_reconstruct(m, ss, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        const double truth = 0.3 * t * t * t - t * t + 0.2 * t + 1.0;
        CHECK(std::abs(rec.values[i] - truth) < 1e-10);
    }
    // natural boundary cannot reproduce a cubic with nonzero end curvature
    const auto nat = baseline_reconstruct({BaselineKind::CubicSpline}, ss, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        worst = std::max(worst,
                         std::abs(nat.values[i] - (0.3 * t * t * t - t * t + 0.2 * t + 1.0)));
    }
    CHECK(worst > 1e-6);
}

TEST_CASE("degree-12 fit degrades by orders of magnitude vs KR on preset a") {
    const auto ss = sample(preset("paper-a"), 0.6, 20);
    std::vector<double> grid = interior_grid(0.0, 19 * 0.6, 600);

    const auto pf = baseline_reconstruct({BaselineKind::PolyFit, 12}, ss, grid);
    const auto model = identify(ss, 6);
    const auto kr = reconstruct(model, grid);

    double pf_err = 0.0, kr_err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double truth = evaluate(preset("paper-a"), grid[i]);
        pf_err = std::max(pf_err, std::abs(pf.values[i] - truth));
        kr_err = std::max(kr_err, std::abs(kr.values[i] - truth));
    }
    CHECK(pf_err >= 1e3 * kr_err);
}
