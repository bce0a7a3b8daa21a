#include "ksr/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ksr/linalg.hpp"
#include "ksr/series.hpp"

namespace ksr {

SampleSet sample(const Signal& s, double period, int count, double start) {
    if (!(period > 0.0)) throw precondition_error("sample: period must be positive");
    if (count < 2) throw precondition_error("sample: need at least 2 samples");
    SampleSet out;
    out.period = period;
    out.start_time = start;
    out.values.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        out.values.push_back(evaluate(s, start + k * period));
    }
    return out;
}

HankelPair build_hankel(const SampleSet& ss, int embedding) {
    const int n = static_cast<int>(ss.values.size());
    if (embedding < 1) throw precondition_error("build_hankel: embedding must be >= 1");
    if (n < 2 * embedding) {
        throw insufficient_data_error("build_hankel: need N >= 2M (N=" + std::to_string(n) +
                                      ", M=" + std::to_string(embedding) + ")");
    }
    HankelPair hp;
    hp.embedding = embedding;
    hp.sample_count = n;
    const int rows = n - embedding;
    hp.x.resize(rows, embedding);
    hp.y.resize(rows, embedding);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < embedding; ++j) {
            const auto base = static_cast<std::size_t>(i) + static_cast<std::size_t>(j);
            hp.x(i, j) = ss.values[base];
            hp.y(i, j) = ss.values[base + 1];
        }
    }
    return hp;
}

DimensionSelection select_dimension(const SampleSet& ss, int k_max, double threshold,
                                    bool absolute) {
    if (!(threshold > 0.0)) throw precondition_error("select_dimension: threshold must be > 0");
    const int n = static_cast<int>(ss.values.size());
    if (n < 2 * k_max) {
        throw insufficient_data_error("select_dimension: need N >= 2*K_max");
    }
    DimensionSelection out;
    bool all_zero = true;
    for (double v : ss.values) {
        if (v != 0.0) {
            all_zero = false;
            break;
        }
    }
    if (all_zero) {
        out.degenerate = true;
        return out;
    }
    const HankelPair hp = build_hankel(ss, k_max);
    const auto dec = linalg::svd(hp.x.cast<linalg::Complex>());
    const double smax = dec.singular_values(0);
    const double cutoff = absolute ? threshold : threshold * smax;
    int count = 0;
    for (Eigen::Index i = 0; i < dec.singular_values.size(); ++i) {
        if (dec.singular_values(i) > cutoff) ++count;
    }
    out.dimension = count;
    out.possibly_under_embedded = (count == k_max);
    return out;
}

SampleSet add_white_noise(const SampleSet& ss, double snr_db, std::uint64_t seed) {
    if (ss.values.empty()) throw precondition_error("add_white_noise: empty sample set");
    if (!std::isfinite(snr_db)) {
        if (snr_db > 0) return ss; // +inf sentinel: no noise
        throw precondition_error("add_white_noise: snr_db must be finite or +inf");
    }
    double power = 0.0;
    for (double v : ss.values) power += v * v;
    power /= static_cast<double>(ss.values.size());
    if (power == 0.0) {
        throw precondition_error("add_white_noise: SNR undefined for an all-zero signal");
    }
    const double variance = power / std::pow(10.0, snr_db / 10.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(variance));
    SampleSet out = ss;
    for (double& v : out.values) v += gauss(rng);
    out.noise = NoiseMeta{snr_db, seed};
    return out;
}

void write_samples_csv(std::ostream& os, const SampleSet& ss) {
    os << "t,value\n";
    for (std::size_t k = 0; k < ss.values.size(); ++k) {
        os << format_double(ss.time_at(k)) << "," << format_double(ss.values[k]) << "\n";
    }
}

SampleSet read_samples_csv(std::istream& is) {
    SampleSet out;
    std::string line;
    if (!std::getline(is, line)) throw precondition_error("samples csv: empty input");
    std::vector<double> times;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw precondition_error("samples csv: malformed row");
        times.push_back(std::stod(line.substr(0, comma)));
        out.values.push_back(std::stod(line.substr(comma + 1)));
    }
    if (times.size() < 2) throw precondition_error("samples csv: need at least 2 rows");
    out.start_time = times.front();
    out.period = times[1] - times[0];
    return out;
}

std::string samples_to_json_text(const SampleSet& ss) {
    nlohmann::json j;
    j["period"] = ss.period;
    j["start_time"] = ss.start_time;
    j["values"] = ss.values;
    if (ss.noise) {
        j["noise"] = {{"snr_db", ss.noise->snr_db}, {"seed", ss.noise->seed}};
    }
    return j.dump(2);
}

SampleSet samples_from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    SampleSet out;
    out.period = j.at("period").get<double>();
    out.start_time = j.value("start_time", 0.0);
    out.values = j.at("values").get<std::vector<double>>();
    if (j.contains("noise")) {
        out.noise = NoiseMeta{j["noise"].at("snr_db").get<double>(),
                              j["noise"].at("seed").get<std::uint64_t>()};
    }
    return out;
}

} // namespace ksr
