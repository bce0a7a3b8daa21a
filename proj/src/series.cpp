#include "ksr/series.hpp"

#include <cmath>
#include <cstdio>

namespace ksr {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_series_csv(std::ostream& os, const ReconstructionSeries& series) {
    os << "t,value\n";
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        os << format_double(series.times[i]) << "," << format_double(series.values[i])
           << "\n";
    }
}

void write_series_csv(std::ostream& os, const ReconstructionSeries& series,
                      const std::vector<double>& truth) {
    os << "t,truth,reconstruction,abs_error\n";
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const double err = std::abs(series.values[i] - truth[i]);
        os << format_double(series.times[i]) << "," << format_double(truth[i]) << ","
           << format_double(series.values[i]) << "," << format_double(err) << "\n";
    }
}

} // namespace ksr
