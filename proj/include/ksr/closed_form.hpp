#pragma once

#include <vector>

#include "ksr/linalg.hpp"
#include "ksr/sampling.hpp"
#include "ksr/series.hpp"

namespace ksr {

struct ExpSincConfig {
    double alpha = 0.0; // growth, 1/s
    double period = 0.0; // T_s
    double band = 0.0;   // c, rad/s
    int n_left = 0;      // N1
    int n_right = 0;     // N2
};

// Structure of a polynomial-exponential signal sum_k sum_l a_{k,l} t^l e^{lambda_k t}.
// coefficients[k][l] holds a_{k,l} for l = 0..degrees[k].
struct PolyExpStructure {
    std::vector<Complex> eigenvalues;
    std::vector<int> degrees;
    std::vector<std::vector<Complex>> coefficients;

    int dimension() const; // M = m + sum b_k
};

struct PbhDetails {
    int controllability_rank = 0;
    bool controllability_passes = false;
    bool pbh_passes = false; // per-eigenvalue rank test
    bool disagreement = false;
};

// Whittaker interpolation over the available samples.
ReconstructionSeries sinc_reconstruct(const SampleSet& ss, const std::vector<double>& times);

// Exponential-sinc reconstruction for inverse-Laplace / Zakai-type signals
// with growth alpha; alpha = 0 reduces exactly to sinc_reconstruct.
ReconstructionSeries exp_sinc_reconstruct(const SampleSet& ss, double alpha,
                                          const std::vector<double>& times);

// Truncation-error bound for the exponential-sinc formula; E is the energy of
// the band-limited factor.
double truncation_bound(const ExpSincConfig& cfg, double energy, double t);

// Both the controllability-matrix rank test and the per-eigenvalue PBH test;
// passes follows the controllability verdict, disagreement is only flagged.
PbhDetails pbh_time_delay_test(const linalg::Matrix& u, const linalg::Matrix& a,
                               double rel_tol = 1e-10);

// The (b+1)x(b+1) lower-triangular Koopman block on the degree-descending
// basis [t^b e^{lambda t}, ..., e^{lambda t}].
linalg::Matrix build_poly_exp_koopman_block(Complex lambda, int degree, double tau);

// Full block-diagonal Koopman matrix for the structure at offset tau.
linalg::Matrix build_poly_exp_koopman(const PolyExpStructure& st, double tau);

// Transition matrix Q whose j-th column is the coordinate vector of the
// delayed signal g(t + j T_s) on the degree-descending basis.
linalg::Matrix poly_exp_transition(const PolyExpStructure& st, double period);

ReconstructionSeries poly_exp_closed_form(const PolyExpStructure& st, const SampleSet& ss,
                                          const std::vector<double>& times);

} // namespace ksr
