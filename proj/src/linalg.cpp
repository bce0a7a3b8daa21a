#include "ksr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

namespace ksr::linalg {

namespace {

double one_norm(const Matrix& a) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        best = std::max(best, a.col(j).cwiseAbs().sum());
    }
    return best;
}

// Diagonal Pade approximant exp(A) ~ p(A)/q(A) with the usual even/odd split.
Matrix pade_exp(const Matrix& a, const std::vector<double>& b) {
    const Eigen::Index n = a.rows();
    const Matrix a2 = a * a;
    const Matrix id = Matrix::Identity(n, n);

    Matrix u, v;
    if (b.size() == 14) { // degree 13, Higham's factored form
        const Matrix a4 = a2 * a2;
        const Matrix a6 = a4 * a2;
        u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                 b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
        v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
            b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    } else {
        Matrix even = b[0] * id;
        Matrix odd = b[1] * id;
        Matrix pw = id;
        for (std::size_t k = 2; k < b.size(); k += 2) {
            pw = pw * a2;
            even += b[k] * pw;
            if (k + 1 < b.size()) odd += b[k + 1] * pw;
        }
        u = a * odd;
        v = even;
    }
    return (v - u).partialPivLu().solve(v + u);
}

const std::vector<double> kPade3{120, 60, 12, 1};
const std::vector<double> kPade5{30240, 15120, 3360, 420, 30, 1};
const std::vector<double> kPade7{17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
const std::vector<double> kPade9{17643225600., 8821612800., 2075673600., 302702400.,
                                 30270240., 2162160., 110880., 3960., 90., 1.};
const std::vector<double> kPade13{64764752532480000., 32382376266240000., 7771770303897600.,
                                  1187353796428800., 129060195264000., 10559470521600.,
                                  670442572800., 33522128640., 1323241920., 40840800.,
                                  960960., 16380., 182., 1.};

// 1-norm thresholds from Higham, "The scaling and squaring method revisited".
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068;
constexpr double kTheta13 = 5.371920351148152;

// Log of a triangular block whose diagonal entries form one eigenvalue
// cluster: split off the scalar log of the cluster mean and expand the
// remainder. The clustering guard keeps the spectral radius of the remainder
// below 1/2 and the whole disk off the branch cut.
Matrix log_atomic_block(const Matrix& t) {
    const Eigen::Index p = t.rows();
    if (p == 1) {
        Matrix f(1, 1);
        f(0, 0) = std::log(t(0, 0));
        return f;
    }
    Complex mu = t.diagonal().mean();
    const Matrix id = Matrix::Identity(p, p);
    const Matrix x = t / mu - id;

    Matrix sum = Matrix::Zero(p, p);
    Matrix pw = id;
    double sign = 1.0;
    const int max_terms = 4 * static_cast<int>(p) + 120;
    for (int k = 1; k <= max_terms; ++k) {
        pw = pw * x;
        const Matrix term = (sign / k) * pw;
        sum += term;
        sign = -sign;
        if (k >= p && term.norm() <= 1e-2 * std::numeric_limits<double>::epsilon() *
                                        std::max(1.0, sum.norm())) {
            break;
        }
    }
    return std::log(mu) * id + sum;
}

// Swaps the diagonal entries at positions i, i+1 of the upper-triangular t by
// a unitary similarity, updating q accordingly.
void swap_schur_adjacent(Matrix& t, Matrix& q, Eigen::Index i) {
    const Complex t11 = t(i, i);
    const Complex t12 = t(i, i + 1);
    const Complex t22 = t(i + 1, i + 1);
    const Complex x0 = t12;
    const Complex x1 = t22 - t11;
    const double nrm = std::sqrt(std::norm(x0) + std::norm(x1));
    if (nrm == 0.0) return; // equal entries, nothing to move
    Eigen::Matrix2cd w;
    w(0, 0) = x0 / nrm;
    w(1, 0) = x1 / nrm;
    w(0, 1) = -std::conj(x1 / nrm);
    w(1, 1) = std::conj(x0 / nrm);

    const Eigen::Index n = t.rows();
    t.block(i, 0, 2, n) = w.adjoint() * t.block(i, 0, 2, n);
    t.block(0, i, n, 2) = t.block(0, i, n, 2) * w;
    q.block(0, i, n, 2) = q.block(0, i, n, 2) * w;
    t(i + 1, i) = Complex(0, 0);
}

struct ClusterLayout {
    std::vector<Eigen::Index> start;
    std::vector<Eigen::Index> size;
};

// Agglomerative eigenvalue blocking. Neighbouring eigenvalues are merged so
// the Parlett recurrence never divides by a small separation, except where a
// merge would put the cluster disk onto the branch cut (the principal log is
// discontinuous there, so those clusters must stay apart).
std::vector<int> cluster_labels(const std::vector<Complex>& eigs, double delta) {
    const std::size_t n = eigs.size();
    std::vector<std::vector<std::size_t>> clusters(n);
    for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};

    auto guard_ok = [&](const std::vector<std::size_t>& a,
                        const std::vector<std::size_t>& b) {
        Complex mean(0, 0);
        double diameter = 0.0;
        std::vector<std::size_t> all(a);
        all.insert(all.end(), b.begin(), b.end());
        for (std::size_t i : all) mean += eigs[i];
        mean /= static_cast<double>(all.size());
        for (std::size_t i : all)
            for (std::size_t j : all) diameter = std::max(diameter, std::abs(eigs[i] - eigs[j]));
        const double cut = mean.real() <= 0.0 ? std::abs(mean.imag()) : std::abs(mean);
        return cut > 2.0 * diameter;
    };
    auto cluster_distance = [&](const std::vector<std::size_t>& a,
                                const std::vector<std::size_t>& b) {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i : a)
            for (std::size_t j : b) d = std::min(d, std::abs(eigs[i] - eigs[j]));
        return d;
    };

    bool merged = true;
    while (merged && clusters.size() > 1) {
        merged = false;
        std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> candidates;
        for (std::size_t a = 0; a < clusters.size(); ++a) {
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                const double d = cluster_distance(clusters[a], clusters[b]);
                if (d <= delta) candidates.push_back({d, {a, b}});
            }
        }
        std::sort(candidates.begin(), candidates.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& cand : candidates) {
            const auto [a, b] = cand.second;
            if (!guard_ok(clusters[a], clusters[b])) continue;
            clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
            clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
            merged = true;
            break;
        }
    }

    std::vector<int> label(n, -1);
    // stable cluster numbering by smallest member index
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) {
                  return *std::min_element(a.begin(), a.end()) <
                         *std::min_element(b.begin(), b.end());
              });
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        for (std::size_t i : clusters[c]) label[i] = static_cast<int>(c);
    }
    return label;
}

// Reorders the Schur form so each cluster occupies a contiguous diagonal block.
ClusterLayout cluster_schur(Matrix& t, Matrix& q, double delta) {
    const Eigen::Index n = t.rows();
    std::vector<Complex> eigs(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) eigs[static_cast<std::size_t>(i)] = t(i, i);
    const std::vector<int> label = cluster_labels(eigs, delta);

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return label[a] < label[b]; });

    std::vector<Eigen::Index> current(n);
    std::iota(current.begin(), current.end(), 0);
    for (Eigen::Index target = 0; target < n; ++target) {
        const Eigen::Index want = order[target];
        Eigen::Index pos = target;
        while (current[pos] != want) ++pos;
        while (pos > target) {
            swap_schur_adjacent(t, q, pos - 1);
            std::swap(current[pos - 1], current[pos]);
            --pos;
        }
    }

    ClusterLayout layout;
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        while (j < n && label[order[j]] == label[order[i]]) ++j;
        layout.start.push_back(i);
        layout.size.push_back(j - i);
        i = j;
    }
    return layout;
}

// Solves T11 * X - X * T22 = C for upper-triangular T11, T22 with disjoint
// spectra, by back-substitution.
Matrix sylvester_triangular(const Matrix& t11, const Matrix& t22, const Matrix& c) {
    const Eigen::Index p = t11.rows();
    const Eigen::Index qn = t22.rows();
    Matrix x = Matrix::Zero(p, qn);
    for (Eigen::Index r = p - 1; r >= 0; --r) {
        for (Eigen::Index s = 0; s < qn; ++s) {
            Complex rhs = c(r, s);
            for (Eigen::Index k = r + 1; k < p; ++k) rhs -= t11(r, k) * x(k, s);
            for (Eigen::Index k = 0; k < s; ++k) rhs += x(r, k) * t22(k, s);
            const Complex den = t11(r, r) - t22(s, s);
            if (std::abs(den) == 0.0) {
                throw numerical_error("matrix logarithm: coincident eigenvalues across clusters");
            }
            x(r, s) = rhs / den;
        }
    }
    return x;
}

} // namespace

void require_finite(const Matrix& a, const char* who) {
    if (!a.allFinite()) {
        throw precondition_error(std::string(who) + ": matrix has non-finite entries");
    }
}

double default_pinv_tol(const Matrix& a) {
    return static_cast<double>(std::max(a.rows(), a.cols())) *
           std::numeric_limits<double>::epsilon();
}

SvdResult svd(const Matrix& a) {
    require_finite(a, "svd");
    Eigen::JacobiSVD<Matrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success) {
        throw numerical_error("svd: iteration failed to converge");
    }
    SvdResult out;
    out.u = solver.matrixU();
    out.singular_values = solver.singularValues();
    out.v = solver.matrixV();
    if (!out.singular_values.allFinite()) {
        throw numerical_error("svd: non-finite singular values");
    }
    return out;
}

Matrix pinv(const Matrix& a, double rel_tol) {
    if (rel_tol < 0.0) rel_tol = default_pinv_tol(a);
    const SvdResult dec = svd(a);
    const double cutoff =
        rel_tol * (dec.singular_values.size() > 0 ? dec.singular_values(0) : 0.0);
    Matrix sigma_inv = Matrix::Zero(dec.v.cols(), dec.u.cols());
    for (Eigen::Index i = 0; i < dec.singular_values.size(); ++i) {
        const double s = dec.singular_values(i);
        if (s > cutoff && s > 0.0) sigma_inv(i, i) = Complex(1.0 / s, 0.0);
    }
    return dec.v * sigma_inv * dec.u.adjoint();
}

EigenDecomposition eig(const Matrix& a) {
    require_finite(a, "eig");
    if (a.rows() != a.cols()) throw precondition_error("eig: matrix must be square");
    Eigen::ComplexEigenSolver<Matrix> solver(a, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
        throw numerical_error("eig: QR iteration failed to converge");
    }
    EigenDecomposition out;
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();

    Eigen::JacobiSVD<Matrix> vs(out.eigenvectors);
    const auto& s = vs.singularValues();
    const double smin = s(s.size() - 1);
    out.condition_estimate =
        smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
    return out;
}

Matrix expm(const Matrix& a) {
    require_finite(a, "expm");
    if (a.rows() != a.cols()) throw precondition_error("expm: matrix must be square");
    const double nrm = one_norm(a);

    Matrix result;
    if (nrm <= kTheta3) {
        result = pade_exp(a, kPade3);
    } else if (nrm <= kTheta5) {
        result = pade_exp(a, kPade5);
    } else if (nrm <= kTheta7) {
        result = pade_exp(a, kPade7);
    } else if (nrm <= kTheta9) {
        result = pade_exp(a, kPade9);
    } else {
        int s = static_cast<int>(std::ceil(std::log2(nrm / kTheta13)));
        s = std::max(s, 0);
        if (s > 60) throw numerical_error("expm: norm too large to scale");
        result = pade_exp(a / std::pow(2.0, s), kPade13);
        for (int k = 0; k < s; ++k) result = result * result;
    }
    if (!result.allFinite()) {
        throw numerical_error("expm: overflow in matrix exponential");
    }
    return result;
}

double branch_cut_distance(const Complex& z) {
    if (z.real() <= 0.0) return std::abs(z.imag());
    return std::abs(z);
}

Matrix logm_principal(const Matrix& a, double branch_tol) {
    require_finite(a, "logm_principal");
    if (a.rows() != a.cols()) {
        throw precondition_error("logm_principal: matrix must be square");
    }
    const Eigen::Index n = a.rows();

    Eigen::ComplexSchur<Matrix> schur(a, /*computeU=*/true);
    if (schur.info() != Eigen::Success) {
        throw numerical_error("logm_principal: Schur decomposition failed");
    }
    Matrix t = schur.matrixT();
    Matrix q = schur.matrixU();

    double scale = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(t(i, i)));
    for (Eigen::Index i = 0; i < n; ++i) {
        if (branch_cut_distance(t(i, i)) <= branch_tol) {
            throw branch_cut_error(
                "logm_principal: eigenvalue on the closed negative real axis");
        }
    }

    const double blocking_delta = 0.1 * std::max(1.0, scale);
    const ClusterLayout layout = cluster_schur(t, q, blocking_delta);
    const std::size_t nb = layout.size.size();

    // Re-check after reordering; the swaps perturb the diagonal at roundoff level.
    for (Eigen::Index i = 0; i < n; ++i) {
        if (branch_cut_distance(t(i, i)) <= branch_tol) {
            throw branch_cut_error(
                "logm_principal: eigenvalue on the closed negative real axis");
        }
    }

    Matrix f = Matrix::Zero(n, n);
    for (std::size_t b = 0; b < nb; ++b) {
        const auto i0 = layout.start[b];
        const auto sz = layout.size[b];
        f.block(i0, i0, sz, sz) = log_atomic_block(t.block(i0, i0, sz, sz));
    }

    // Block Parlett recurrence, sweeping by block superdiagonal.
    for (std::size_t d = 1; d < nb; ++d) {
        for (std::size_t bi = 0; bi + d < nb; ++bi) {
            const std::size_t bj = bi + d;
            const auto i0 = layout.start[bi], isz = layout.size[bi];
            const auto j0 = layout.start[bj], jsz = layout.size[bj];
            Matrix c = f.block(i0, i0, isz, isz) * t.block(i0, j0, isz, jsz) -
                       t.block(i0, j0, isz, jsz) * f.block(j0, j0, jsz, jsz);
            for (std::size_t bk = bi + 1; bk < bj; ++bk) {
                const auto k0 = layout.start[bk], ksz = layout.size[bk];
                c += f.block(i0, k0, isz, ksz) * t.block(k0, j0, ksz, jsz) -
                     t.block(i0, k0, isz, ksz) * f.block(k0, j0, ksz, jsz);
            }
            f.block(i0, j0, isz, jsz) =
                sylvester_triangular(t.block(i0, i0, isz, isz),
                                     t.block(j0, j0, jsz, jsz), c);
        }
    }

    Matrix result = q * f * q.adjoint();

    // Accuracy certificate: the exponential must reproduce the input.
    const double resid = (expm(result) - a).norm();
    if (!(resid <= 1e-8 * std::max(a.norm(), 1e-300))) {
        throw numerical_error("logm_principal: accuracy certificate failed (residual " +
                              std::to_string(resid) + ")");
    }
    return result;
}

double max_imag_residual(const Matrix& a) {
    return a.imag().cwiseAbs().maxCoeff();
}

RealMatrix real_part_checked(const Matrix& a, double tol, double scale, const char* who) {
    const double resid = a.size() ? max_imag_residual(a) : 0.0;
    if (resid > tol * scale) {
        throw inconsistency_error(std::string(who) + ": imaginary residual " +
                                  std::to_string(resid) + " exceeds tolerance");
    }
    return a.real();
}

} // namespace ksr::linalg
