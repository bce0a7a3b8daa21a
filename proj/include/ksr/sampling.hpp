#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ksr/signal.hpp"

namespace ksr {

struct NoiseMeta {
    double snr_db = 0.0;
    std::uint64_t seed = 0;
};

struct SampleSet {
    std::vector<double> values;
    double period = 0.0;     // T_s, s
    double start_time = 0.0; // s
    std::optional<NoiseMeta> noise;

    double time_at(std::size_t k) const { return start_time + static_cast<double>(k) * period; }
    std::size_t size() const { return values.size(); }
};

struct HankelPair {
    Eigen::MatrixXd x; // (N-M) x M, x(i,j) = values[i+j]
    Eigen::MatrixXd y; // shifted by one sample
    int embedding = 0; // M
    int sample_count = 0;
};

struct DimensionSelection {
    int dimension = 0;
    bool possibly_under_embedded = false; // count hit K_max
    bool degenerate = false;              // all-zero samples
};

SampleSet sample(const Signal& s, double period, int count, double start = 0.0);

HankelPair build_hankel(const SampleSet& ss, int embedding);

// Counts singular values of the K_max-column Hankel matrix above
// threshold * s_max (or above the absolute threshold when absolute = true,
// the hard-threshold variant).
DimensionSelection select_dimension(const SampleSet& ss, int k_max,
                                    double threshold = 1e-10, bool absolute = false);

// Zero-mean white Gaussian noise at the requested SNR; +inf snr_db is the
// no-noise sentinel. Deterministic for a fixed seed.
SampleSet add_white_noise(const SampleSet& ss, double snr_db, std::uint64_t seed);

void write_samples_csv(std::ostream& os, const SampleSet& ss);
SampleSet read_samples_csv(std::istream& is);
std::string samples_to_json_text(const SampleSet& ss);
SampleSet samples_from_json_text(const std::string& text);

} // namespace ksr
