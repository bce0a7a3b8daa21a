#pragma once

#include <complex>
#include <Eigen/Dense>

#include "ksr/errors.hpp"

namespace ksr::linalg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct SvdResult {
    Matrix u;                    // left singular vectors (thin)
    RealVector singular_values;  // descending, nonnegative
    Matrix v;                    // right singular vectors (thin), A = U * diag(s) * V^H
};

struct EigenDecomposition {
    Vector eigenvalues;
    Matrix eigenvectors;        // columns aligned with eigenvalues
    double condition_estimate;  // condition number of the eigenvector matrix
};

// Throws precondition_error if any entry is NaN/Inf.
void require_finite(const Matrix& a, const char* who);

double default_pinv_tol(const Matrix& a);

SvdResult svd(const Matrix& a);

// Moore-Penrose pseudoinverse; singular values below rel_tol * s_max are
// treated as zero. rel_tol < 0 selects the default max(rows,cols)*eps.
Matrix pinv(const Matrix& a, double rel_tol = -1.0);

EigenDecomposition eig(const Matrix& a);

// Matrix exponential by scaling-and-squaring with diagonal Pade approximants.
Matrix expm(const Matrix& a);

// Principal matrix logarithm: the unique log whose spectrum lies in the strip
// |Im| < pi. Throws branch_cut_error when an eigenvalue is within
// branch_tol of the closed negative real axis (-inf, 0].
Matrix logm_principal(const Matrix& a, double branch_tol = 1e-12);

// Distance from z to the closed set (-inf, 0].
double branch_cut_distance(const Complex& z);

// Largest |imaginary part| over the spectrum of a; reuses a precomputed
// decomposition where the caller already has one.
double max_imag_residual(const Matrix& a);

// Extracts the real part after checking max|Im| <= tol * scale.
RealMatrix real_part_checked(const Matrix& a, double tol, double scale, const char* who);

} // namespace ksr::linalg
