#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ksr/sampling.hpp"
#include "ksr/series.hpp"
#include "ksr/signal.hpp"

namespace ksr {

enum class FigureSuite { Fig2to5, Fig6to9, Fig10to13 };

inline constexpr const char* kToolkitVersion = "1.0.0";

struct ExperimentSpec {
    std::vector<std::string> signals;   // presets or json paths; empty = all presets
    std::vector<double> periods;        // empty = suite defaults
    int sample_count = 20;
    std::optional<int> dim;             // overrides the per-preset default
    std::vector<std::string> methods;   // empty = suite defaults
    std::vector<double> snr_db;         // empty = suite defaults (noise suite only)
    int trials = 1;
    std::uint64_t seed = 0;
    int grid_points = 1000;
    int polyfit_degree = 12;
    std::string output_dir = ".";
};

struct ReportRow {
    std::string suite;
    std::string signal;
    std::string method;
    double period = 0.0;
    std::optional<double> snr_db;
    int trial = 0;
    std::uint64_t seed = 0;
    int dim_used = 0; // 0 for methods without an embedding
    double max_error = 0.0;
    double rms_error = 0.0;
    double sample_interp_error = 0.0;
    std::string aliasing_verdict = "n/a";
    std::string status = "ok";
};

struct ExperimentReport {
    std::vector<ReportRow> rows;
    std::uint64_t seed = 0;
};

// Published embedding defaults for the shipped demo presets; falls back to
// SVD-selected dimension for other signals.
int default_embedding(const std::string& signal_name, const SampleSet& ss);

const char* suite_name(FigureSuite which);

// Runs the requested figure family, writing report.csv, per-cell series CSVs
// and SVG overlays into spec.output_dir. Cell failures are recorded in their
// report rows; the run continues.
ExperimentReport run_figure_suite(FigureSuite which, const ExperimentSpec& spec);

void write_report_csv(std::ostream& os, const ExperimentReport& report);

std::vector<double> linspace(double lo, double hi, int n);

} // namespace ksr
