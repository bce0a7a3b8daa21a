#pragma once

#include <string>
#include <vector>

#include "ksr/linalg.hpp"
#include "ksr/sampling.hpp"
#include "ksr/series.hpp"
#include "ksr/signal.hpp"

namespace ksr {

struct ModelDiagnostics {
    double pinv_residual = 0.0; // ||X*U - Y||_F / ||Y||_F
    double branch_margin = 0.0; // min angular distance of arg(eig U) from +-pi
};

// Identified discrete-time Koopman matrix and its generator, together with
// the anchor samples used as coordinates for reconstruction.
struct KoopmanModel {
    linalg::Matrix u_dt;  // M x M, real-valued up to roundoff
    linalg::Matrix l_gen; // generator, log(U)/T_s
    int embedding = 0;    // M
    double period = 0.0;  // T_s
    std::vector<double> anchor; // g(0), ..., g((M-1) T_s)
    ModelDiagnostics diagnostics;
};

// Least-squares identification U = pinv(X) * Y followed by the principal
// logarithm. A branch-cut hit surfaces as aliasing_boundary_error: the
// sampling period is at or past the aliasing limit for these dynamics.
KoopmanModel identify(const HankelPair& hp, double period,
                      const std::vector<double>& anchor_samples);
KoopmanModel identify(const SampleSet& ss, int embedding);

// Noise policy: spurious modes of an over-sized embedding often land on the
// principal-branch cut. Retries with a smaller window until identification
// succeeds; the returned model's embedding records the dimension used.
KoopmanModel identify_with_backoff(const SampleSet& ss, int embedding,
                                   int min_embedding = 1);

// exp(tau * L); negative tau requires allow_backward.
linalg::Matrix propagate(const KoopmanModel& model, double tau,
                         bool allow_backward = false);

ReconstructionSeries reconstruct(const KoopmanModel& model,
                                 const std::vector<double>& times);

// Noise-tolerant variant: each time picks the nearest sample window to the
// left and propagates only the in-window offset tau in [0, T_s).
ReconstructionSeries reconstruct_windowed(const KoopmanModel& model, const SampleSet& ss,
                                          const std::vector<double>& times);

SpectrumReport estimate_spectrum(const KoopmanModel& model);

std::string model_to_json_text(const KoopmanModel& model);
KoopmanModel model_from_json_text(const std::string& text);

} // namespace ksr
