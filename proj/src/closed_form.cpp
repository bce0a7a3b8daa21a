#include "ksr/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ksr {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc_stable(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

int numerical_rank(const linalg::Matrix& m, double rel_tol) {
    const auto dec = linalg::svd(m);
    if (dec.singular_values.size() == 0) return 0;
    const double cutoff = rel_tol * dec.singular_values(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < dec.singular_values.size(); ++i) {
        if (dec.singular_values(i) > cutoff) ++rank;
    }
    return rank;
}

} // namespace

int PolyExpStructure::dimension() const {
    int m = 0;
    for (int b : degrees) m += b + 1;
    return m;
}

ReconstructionSeries exp_sinc_reconstruct(const SampleSet& ss, double alpha,
                                          const std::vector<double>& times) {
    const double ts = ss.period;
    ReconstructionSeries out;
    out.method = alpha == 0.0 ? "sinc" : "exp-sinc";
    out.times = times;
    out.values.reserve(times.size());
    for (double t : times) {
        double acc = 0.0;
        for (std::size_t k = 0; k < ss.values.size(); ++k) {
            const double dt = t - ss.time_at(k);
            acc += ss.values[k] * std::exp(alpha * dt) * sinc_stable(kPi / ts * dt);
        }
        out.values.push_back(acc);
    }
    return out;
}

ReconstructionSeries sinc_reconstruct(const SampleSet& ss, const std::vector<double>& times) {
    return exp_sinc_reconstruct(ss, 0.0, times);
}

double truncation_bound(const ExpSincConfig& cfg, double energy, double t) {
    if (!(energy > 0.0)) throw precondition_error("truncation_bound: energy must be > 0");
    if (!(cfg.band * cfg.period < kPi)) {
        throw precondition_error("truncation_bound: requires c * T_s < pi");
    }
    if (cfg.n_left < 1 || cfg.n_right < 1) {
        throw precondition_error("truncation_bound: window counts must be >= 1");
    }
    const double amp = 2.0 * std::sqrt(energy * cfg.band / kPi) * std::exp(cfg.alpha * t) *
                       std::abs(std::sin(kPi * t / cfg.period));
    return amp / (kPi * (kPi - cfg.band * cfg.period)) *
           (1.0 / cfg.n_left + 1.0 / cfg.n_right);
}

PbhDetails pbh_time_delay_test(const linalg::Matrix& u, const linalg::Matrix& a,
                               double rel_tol) {
    if (u.rows() != u.cols()) throw precondition_error("pbh: U must be square");
    if (a.rows() != u.rows() || a.cols() != 1) {
        throw precondition_error("pbh: a must be an M x 1 column");
    }
    const Eigen::Index m = u.rows();

    linalg::Matrix ctrl(m, m);
    linalg::Matrix col = a;
    for (Eigen::Index j = 0; j < m; ++j) {
        ctrl.col(j) = col.col(0);
        col = u * col;
    }
    PbhDetails out;
    out.controllability_rank = numerical_rank(ctrl, rel_tol);
    out.controllability_passes = (out.controllability_rank == m);

    const auto dec = linalg::eig(u);
    out.pbh_passes = true;
    for (Eigen::Index i = 0; i < m; ++i) {
        linalg::Matrix pencil(m, m + 1);
        pencil.leftCols(m) =
            dec.eigenvalues(i) * linalg::Matrix::Identity(m, m) - u;
        pencil.col(m) = a.col(0);
        if (numerical_rank(pencil, rel_tol) < m) {
            out.pbh_passes = false;
            break;
        }
    }
    out.disagreement = (out.controllability_passes != out.pbh_passes);
    return out;
}

linalg::Matrix build_poly_exp_koopman_block(Complex lambda, int degree, double tau) {
    if (degree < 0) throw precondition_error("koopman block: degree must be >= 0");
    const int p = degree + 1;
    linalg::Matrix block = linalg::Matrix::Zero(p, p);
    const Complex e = std::exp(lambda * tau);
    for (int r = 0; r < p; ++r) {
        for (int s = 0; s <= r; ++s) {
            block(r, s) = binomial(degree - s, r - s) * std::pow(tau, r - s) * e;
        }
    }
    return block;
}

linalg::Matrix build_poly_exp_koopman(const PolyExpStructure& st, double tau) {
    const int m = st.dimension();
    linalg::Matrix u = linalg::Matrix::Zero(m, m);
    int at = 0;
    for (std::size_t k = 0; k < st.eigenvalues.size(); ++k) {
        const int p = st.degrees[k] + 1;
        u.block(at, at, p, p) = build_poly_exp_koopman_block(st.eigenvalues[k], st.degrees[k], tau);
        at += p;
    }
    return u;
}

linalg::Matrix poly_exp_transition(const PolyExpStructure& st, double period) {
    const int m = st.dimension();
    linalg::Matrix q(m, m);
    for (int j = 0; j < m; ++j) {
        const double tau = j * period;
        int at = 0;
        for (std::size_t k = 0; k < st.eigenvalues.size(); ++k) {
            const int b = st.degrees[k];
            const Complex e = std::exp(st.eigenvalues[k] * tau);
            for (int p = 0; p <= b; ++p) {
                Complex acc(0.0, 0.0);
                for (int l = b - p; l <= b; ++l) {
                    acc += binomial(l, b - p) * st.coefficients[k][static_cast<std::size_t>(l)] *
                           std::pow(tau, l - b + p);
                }
                q(at + p, j) = acc * e;
            }
            at += b + 1;
        }
    }
    return q;
}

ReconstructionSeries poly_exp_closed_form(const PolyExpStructure& st, const SampleSet& ss,
                                          const std::vector<double>& times) {
    const std::size_t nblocks = st.eigenvalues.size();
    if (nblocks == 0 || st.degrees.size() != nblocks || st.coefficients.size() != nblocks) {
        throw precondition_error("poly_exp_closed_form: inconsistent structure");
    }
    for (std::size_t k = 0; k < nblocks; ++k) {
        const int b = st.degrees[k];
        if (static_cast<int>(st.coefficients[k].size()) != b + 1) {
            throw precondition_error("poly_exp_closed_form: coefficient row length mismatch");
        }
        if (std::abs(st.coefficients[k][static_cast<std::size_t>(b)]) == 0.0) {
            throw precondition_error("poly_exp_closed_form: leading coefficient a_{k,b_k} is zero");
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (st.eigenvalues[j] == st.eigenvalues[k]) {
                throw precondition_error("poly_exp_closed_form: eigenvalues must be distinct");
            }
        }
    }
    const int m = st.dimension();
    if (static_cast<int>(ss.values.size()) < m) {
        throw insufficient_data_error("poly_exp_closed_form: need at least M samples");
    }
    double max_imag = 0.0;
    for (const auto& lam : st.eigenvalues) max_imag = std::max(max_imag, std::abs(lam.imag()));
    if (max_imag > 0.0 && !(ss.period < kPi / max_imag)) {
        throw precondition_error("poly_exp_closed_form: T_s must be below pi / max|Im lambda|");
    }

    // PBH precondition on (U^{T_s}, a), a = coordinates on the descending basis
    linalg::Matrix a(m, 1);
    {
        int at = 0;
        for (std::size_t k = 0; k < nblocks; ++k) {
            const int b = st.degrees[k];
            for (int p = 0; p <= b; ++p) {
                a(at + p, 0) = st.coefficients[k][static_cast<std::size_t>(b - p)];
            }
            at += b + 1;
        }
    }
    const linalg::Matrix u_ts = build_poly_exp_koopman(st, ss.period);
    const PbhDetails pbh = pbh_time_delay_test(u_ts, a);
    if (!pbh.controllability_passes) {
        throw precondition_error(
            "poly_exp_closed_form: time-delay functions are not a basis (PBH test failed)");
    }

    const linalg::Matrix q = poly_exp_transition(st, ss.period);
    {
        const auto dec = linalg::svd(q);
        const double smin = dec.singular_values(dec.singular_values.size() - 1);
        if (!(smin > 0.0) || dec.singular_values(0) / smin > 1e12) {
            throw numerical_error("poly_exp_closed_form: transition matrix is numerically "
                                  "singular (degenerate time-delay basis)");
        }
    }

    Eigen::RowVectorXcd row(m);
    for (int i = 0; i < m; ++i) row(i) = linalg::Complex(ss.values[static_cast<std::size_t>(i)], 0.0);
    // g(tau) = row * Q^{-1} * U^tau * (Q e_1); fold Q^{-1} into the row once
    const Eigen::RowVectorXcd row_qinv =
        q.transpose().partialPivLu().solve(row.transpose()).transpose();
    const linalg::Vector q_e1 = q.col(0);

    ReconstructionSeries out;
    out.method = "poly-exp";
    out.times = times;
    out.values.reserve(times.size());
    double residual = 0.0;
    for (double t : times) {
        const linalg::Matrix u_tau = build_poly_exp_koopman(st, t);
        const linalg::Complex v = row_qinv * (u_tau * q_e1);
        residual = std::max(residual, std::abs(v.imag()));
        out.values.push_back(v.real());
    }
    out.max_imag_residual = residual;
    return out;
}

} // namespace ksr
