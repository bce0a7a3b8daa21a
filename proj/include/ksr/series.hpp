#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ksr {

struct ReconstructionSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::string method;
    double max_imag_residual = 0.0;
};

// Two-column form: t,value
void write_series_csv(std::ostream& os, const ReconstructionSeries& series);

// Harness form: t,truth,reconstruction,abs_error
void write_series_csv(std::ostream& os, const ReconstructionSeries& series,
                      const std::vector<double>& truth);

std::string format_double(double v); // 17 significant digits, locale-free

} // namespace ksr
