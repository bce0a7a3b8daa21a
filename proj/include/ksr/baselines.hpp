#pragma once

#include <vector>

#include "ksr/sampling.hpp"
#include "ksr/series.hpp"

namespace ksr {

enum class BaselineKind { CubicSpline, Pchip, PolyFit };
enum class SplineBoundary { Natural, NotAKnot };

struct BaselineMethod {
    BaselineKind kind = BaselineKind::CubicSpline;
    int degree = 12; // PolyFit only
    SplineBoundary boundary = SplineBoundary::Natural;
};

// Spline and PCHIP refuse extrapolation; PolyFit solves the least-squares fit
// on a time axis shifted to mean zero and scaled to unit RMS.
ReconstructionSeries baseline_reconstruct(const BaselineMethod& method, const SampleSet& ss,
                                          const std::vector<double>& times);

} // namespace ksr
