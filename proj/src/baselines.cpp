#include "ksr/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "ksr/linalg.hpp"

namespace ksr {

namespace {

int locate_interval(const std::vector<double>& knots, double t) {
    // rightmost interval whose left knot is <= t, clamped to the last one
    const auto it = std::upper_bound(knots.begin(), knots.end(), t);
    int idx = static_cast<int>(it - knots.begin()) - 1;
    idx = std::clamp(idx, 0, static_cast<int>(knots.size()) - 2);
    return idx;
}

void check_range(const std::vector<double>& knots, const std::vector<double>& times,
                 const char* who) {
    const double slack = 1e-9 * std::max(1.0, std::abs(knots.back() - knots.front()));
    for (double t : times) {
        if (t < knots.front() - slack || t > knots.back() + slack) {
            throw range_error(std::string(who) + ": extrapolation requested at t=" +
                              std::to_string(t));
        }
    }
}

// Second derivatives of the interpolating cubic spline.
std::vector<double> spline_second_derivatives(const std::vector<double>& x,
                                              const std::vector<double>& y,
                                              SplineBoundary boundary) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (int i = 1; i + 1 < n; ++i) {
        const double h0 = x[i] - x[i - 1];
        const double h1 = x[i + 1] - x[i];
        a(i, i - 1) = h0 / 6.0;
        a(i, i) = (h0 + h1) / 3.0;
        a(i, i + 1) = h1 / 6.0;
        rhs(i) = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
    }
    if (boundary == SplineBoundary::Natural || n < 4) {
        a(0, 0) = 1.0;
        a(n - 1, n - 1) = 1.0;
    } else {
        // not-a-knot: third derivative continuous across the first and last
        // interior knots
        const double h0 = x[1] - x[0], h1 = x[2] - x[1];
        a(0, 0) = h1;
        a(0, 1) = -(h0 + h1);
        a(0, 2) = h0;
        const double hm = x[n - 2] - x[n - 3], hl = x[n - 1] - x[n - 2];
        a(n - 1, n - 3) = hl;
        a(n - 1, n - 2) = -(hm + hl);
        a(n - 1, n - 1) = hm;
    }
    const Eigen::VectorXd sol = a.partialPivLu().solve(rhs);
    return {sol.data(), sol.data() + n};
}

double spline_eval(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& m2, double t) {
    const int i = locate_interval(x, t);
    const double h = x[i + 1] - x[i];
    const double u = (x[i + 1] - t) / h;
    const double w = (t - x[i]) / h;
    return u * y[i] + w * y[i + 1] +
           ((u * u * u - u) * m2[i] + (w * w * w - w) * m2[i + 1]) * h * h / 6.0;
}

// Fritsch-Carlson monotone derivative choice.
std::vector<double> pchip_derivatives(const std::vector<double>& x,
                                      const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    std::vector<double> h(n - 1), delta(n - 1), d(n);
    for (int i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    if (n == 2) {
        d[0] = d[1] = delta[0];
        return d;
    }
    for (int i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    auto edge = [](double h0, double h1, double d0, double d1) {
        double v = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (v * d0 <= 0.0) {
            v = 0.0;
        } else if (d0 * d1 < 0.0 && std::abs(v) > 3.0 * std::abs(d0)) {
            v = 3.0 * d0;
        }
        return v;
    };
    d[0] = edge(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = edge(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return d;
}

double hermite_eval(const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<double>& d, double t) {
    const int i = locate_interval(x, t);
    const double h = x[i + 1] - x[i];
    const double s = (t - x[i]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * y[i] + h10 * h * d[i] + h01 * y[i + 1] + h11 * h * d[i + 1];
}

ReconstructionSeries polyfit_reconstruct(int degree, const SampleSet& ss,
                                         const std::vector<double>& times) {
    const int n = static_cast<int>(ss.values.size());
    if (degree < 1 || degree >= n) {
        throw precondition_error("polyfit: degree must satisfy 1 <= degree < N");
    }
    std::vector<double> knots(n);
    for (int i = 0; i < n; ++i) knots[i] = ss.time_at(static_cast<std::size_t>(i));
    double mean = 0.0;
    for (double t : knots) mean += t;
    mean /= n;
    double rms = 0.0;
    for (double t : knots) rms += (t - mean) * (t - mean);
    rms = std::sqrt(rms / n);
    if (rms == 0.0) throw precondition_error("polyfit: degenerate time axis");

    linalg::Matrix vand(n, degree + 1);
    for (int i = 0; i < n; ++i) {
        const double u = (knots[static_cast<std::size_t>(i)] - mean) / rms;
        double p = 1.0;
        for (int j = 0; j <= degree; ++j) {
            vand(i, j) = p;
            p *= u;
        }
    }
    const auto dec = linalg::svd(vand);
    const double smin = dec.singular_values(dec.singular_values.size() - 1);
    if (!(smin > linalg::default_pinv_tol(vand) * dec.singular_values(0))) {
        throw numerical_error("polyfit: rank-deficient Vandermonde system");
    }
    linalg::Matrix rhs(n, 1);
    for (int i = 0; i < n; ++i) rhs(i, 0) = ss.values[static_cast<std::size_t>(i)];
    const linalg::Matrix coef = linalg::pinv(vand) * rhs;

    ReconstructionSeries out;
    out.method = "polyfit";
    out.times = times;
    out.values.reserve(times.size());
    for (double t : times) {
        const double u = (t - mean) / rms;
        linalg::Complex acc(0.0, 0.0);
        double p = 1.0;
        for (int j = 0; j <= degree; ++j) {
            acc += coef(j, 0) * p;
            p *= u;
        }
        out.values.push_back(acc.real());
    }
    return out;
}

} // namespace

ReconstructionSeries baseline_reconstruct(const BaselineMethod& method, const SampleSet& ss,
                                          const std::vector<double>& times) {
    const int n = static_cast<int>(ss.values.size());
    if (n < 2) throw insufficient_data_error("baseline: need at least 2 samples");
    std::vector<double> knots(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) knots[static_cast<std::size_t>(i)] = ss.time_at(static_cast<std::size_t>(i));

    ReconstructionSeries out;
    out.times = times;
    switch (method.kind) {
        case BaselineKind::CubicSpline: {
            check_range(knots, times, "spline");
            const auto m2 = spline_second_derivatives(knots, ss.values, method.boundary);
            out.method = "spline";
            out.values.reserve(times.size());
            for (double t : times) out.values.push_back(spline_eval(knots, ss.values, m2, t));
            break;
        }
        case BaselineKind::Pchip: {
            check_range(knots, times, "pchip");
            const auto d = pchip_derivatives(knots, ss.values);
            out.method = "pchip";
            out.values.reserve(times.size());
            for (double t : times) out.values.push_back(hermite_eval(knots, ss.values, d, t));
            break;
        }
        case BaselineKind::PolyFit:
            return polyfit_reconstruct(method.degree, ss, times);
    }
    return out;
}

} // namespace ksr
