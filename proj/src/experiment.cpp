#include "ksr/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ksr/baselines.hpp"
#include "ksr/koopman.hpp"
#include "ksr/svg.hpp"

namespace ksr {

namespace {

std::string sanitize(double v) {
    std::string s = format_double(v);
    std::replace(s.begin(), s.end(), '.', 'p');
    std::replace(s.begin(), s.end(), '-', 'm');
    return s;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

struct CellResult {
    ReportRow row;
    ReconstructionSeries series;
    std::vector<double> truth;
    SampleSet samples;
    bool has_series = false;
};

CellResult run_cell(const std::string& suite, const Signal& sig, const std::string& name,
                    const std::string& method, double ts, int n, int dim,
                    std::optional<double> snr, int trial, std::uint64_t cell_seed,
                    int grid_points, int polyfit_degree) {
    CellResult out;
    out.row.suite = suite;
    out.row.signal = name;
    out.row.method = method;
    out.row.period = ts;
    out.row.snr_db = snr;
    out.row.trial = trial;
    out.row.seed = cell_seed;

    const SampleSet clean = sample(sig, ts, n);
    out.samples = snr ? add_white_noise(clean, *snr, cell_seed) : clean;

    const bool windowed = method == "kr-windowed";
    std::vector<double> grid = linspace(0.0, (n - 1) * ts, grid_points);

    try {
        std::vector<double> interp_times, interp_ref;
        if (method == "kr" || windowed) {
            // the suite reproduces the figures, so over-sized default embeddings
            // back off when spurious modes block the principal branch; dim_used
            // records what was kept
            const KoopmanModel model = identify_with_backoff(out.samples, dim);
            out.row.dim_used = model.embedding;
            if (windowed) {
                grid = linspace(0.0, (n - model.embedding) * ts * (1.0 - 1e-9), grid_points);
            }
            const SpectrumReport rep = estimate_spectrum(model);
            out.row.aliasing_verdict = verdict_name(rep.verdict);
            const int n_interp = windowed ? n - model.embedding : n;
            for (int k = 0; k < n_interp; ++k) {
                interp_times.push_back(k * ts);
                interp_ref.push_back(out.samples.values[static_cast<std::size_t>(k)]);
            }
            if (windowed) {
                out.series = reconstruct_windowed(model, out.samples, grid);
                const auto at_samples = reconstruct_windowed(model, out.samples, interp_times);
                for (std::size_t k = 0; k < interp_times.size(); ++k) {
                    out.row.sample_interp_error =
                        std::max(out.row.sample_interp_error,
                                 std::abs(at_samples.values[k] - interp_ref[k]));
                }
            } else {
                out.series = reconstruct(model, grid);
                const auto at_samples = reconstruct(model, interp_times);
                for (std::size_t k = 0; k < interp_times.size(); ++k) {
                    out.row.sample_interp_error =
                        std::max(out.row.sample_interp_error,
                                 std::abs(at_samples.values[k] - interp_ref[k]));
                }
            }
        } else {
            BaselineMethod bm;
            if (method == "spline") {
                bm.kind = BaselineKind::CubicSpline;
            } else if (method == "pchip") {
                bm.kind = BaselineKind::Pchip;
            } else if (method == "polyfit") {
                bm.kind = BaselineKind::PolyFit;
                bm.degree = polyfit_degree;
            } else {
                throw precondition_error("unknown method: " + method);
            }
            out.series = baseline_reconstruct(bm, out.samples, grid);
            for (int k = 0; k < n; ++k) {
                interp_times.push_back(k * ts);
                interp_ref.push_back(out.samples.values[static_cast<std::size_t>(k)]);
            }
            const auto at_samples = baseline_reconstruct(bm, out.samples, interp_times);
            for (std::size_t k = 0; k < interp_times.size(); ++k) {
                out.row.sample_interp_error =
                    std::max(out.row.sample_interp_error,
                             std::abs(at_samples.values[k] - interp_ref[k]));
            }
        }
        out.has_series = true;
        out.truth.reserve(grid.size());
        for (double t : grid) out.truth.push_back(evaluate(sig, t));
        double sq = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double err = std::abs(out.series.values[i] - out.truth[i]);
            out.row.max_error = std::max(out.row.max_error, err);
            sq += err * err;
        }
        out.row.rms_error = std::sqrt(sq / static_cast<double>(grid.size()));
    } catch (const aliasing_boundary_error& e) {
        out.row.status = std::string("aliasing-boundary: ") + e.what();
        out.row.aliasing_verdict = "Critical";
        out.row.max_error = std::nan("");
        out.row.rms_error = std::nan("");
    } catch (const std::exception& e) {
        out.row.status = std::string("error: ") + e.what();
        out.row.max_error = std::nan("");
        out.row.rms_error = std::nan("");
    }
    return out;
}

} // namespace

int default_embedding(const std::string& signal_name, const SampleSet& ss) {
    if (signal_name == "paper-a") return 6;
    if (signal_name == "paper-b") return 4;
    if (signal_name == "paper-c") return 6;
    if (signal_name == "paper-d") return 8;
    const int k_max = std::min(12, static_cast<int>(ss.values.size()) / 2);
    const auto sel = select_dimension(ss, k_max);
    return std::max(sel.dimension, 1);
}

const char* suite_name(FigureSuite which) {
    switch (which) {
        case FigureSuite::Fig2to5: return "fig2to5";
        case FigureSuite::Fig6to9: return "fig6to9";
        case FigureSuite::Fig10to13: return "fig10to13";
    }
    return "?";
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return out;
}

ExperimentReport run_figure_suite(FigureSuite which, const ExperimentSpec& spec) {
    if (spec.grid_points < 100) {
        throw precondition_error("run_figure_suite: grid_points must be >= 100");
    }
    if (spec.trials < 1) throw precondition_error("run_figure_suite: trials must be >= 1");
    ExperimentReport report;
    report.seed = spec.seed;
    const std::string suite = suite_name(which);

    std::vector<std::string> signals =
        spec.signals.empty() ? preset_names() : spec.signals;
    std::vector<double> periods = spec.periods;
    std::vector<std::string> methods = spec.methods;
    std::vector<std::optional<double>> snrs{std::nullopt};

    switch (which) {
        case FigureSuite::Fig2to5:
            if (periods.empty()) periods = {0.2, 0.4, 0.6};
            if (methods.empty()) methods = {"spline", "pchip", "polyfit", "kr"};
            break;
        case FigureSuite::Fig6to9:
            if (periods.empty()) periods = {0.78, 0.79};
            if (methods.empty()) methods = {"kr"};
            break;
        case FigureSuite::Fig10to13: {
            if (periods.empty()) periods = {0.3};
            if (methods.empty()) methods = {"kr-windowed"};
            std::vector<double> levels = spec.snr_db.empty()
                                             ? std::vector<double>{30.0, 20.0, 10.0}
                                             : spec.snr_db;
            snrs.clear();
            for (double s : levels) snrs.emplace_back(s);
            break;
        }
    }

    std::filesystem::create_directories(spec.output_dir);

    std::uint64_t cell_index = 0;
    for (const auto& name : signals) {
        const Signal sig = load_signal(name);
        for (double ts : periods) {
            for (const auto& snr : snrs) {
                for (int trial = 0; trial < spec.trials; ++trial) {
                    for (const auto& method : methods) {
                        const SampleSet probe = sample(sig, ts, spec.sample_count);
                        const int dim = spec.dim ? *spec.dim : default_embedding(name, probe);
                        // one deterministic stream per (cell, trial)
                        const std::uint64_t cell_seed =
                            spec.seed + 1000003ull * static_cast<std::uint64_t>(trial) +
                            101ull * cell_index;
                        CellResult cell =
                            run_cell(suite, sig, name, method, ts, spec.sample_count, dim,
                                     snr, trial, cell_seed, spec.grid_points,
                                     spec.polyfit_degree);
                        std::ostringstream key;
                        key << suite << "_" << name << "_ts" << sanitize(ts);
                        if (snr) key << "_snr" << sanitize(*snr) << "_trial" << trial;
                        key << "_" << method;

                        if (cell.has_series) {
                            std::ofstream csv(spec.output_dir + "/series_" + key.str() +
                                              ".csv");
                            write_series_csv(csv, cell.series, cell.truth);

                            std::vector<double> stimes(cell.samples.values.size());
                            for (std::size_t k = 0; k < stimes.size(); ++k) {
                                stimes[k] = cell.samples.time_at(k);
                            }
                            write_svg_plot(
                                spec.output_dir + "/" + key.str() + ".svg", key.str(),
                                {PlotSeries{"truth", cell.series.times, cell.truth,
                                            "#1f77b4", false, false},
                                 PlotSeries{cell.series.method, cell.series.times,
                                            cell.series.values, "#ff7f0e", true, false},
                                 PlotSeries{"samples", stimes, cell.samples.values,
                                            "#2ca02c", false, true}});
                        }
                        report.rows.push_back(cell.row);
                    }
                    ++cell_index;
                }
            }
        }
    }

    std::ofstream rep(spec.output_dir + "/report.csv");
    write_report_csv(rep, report);
    return report;
}

void write_report_csv(std::ostream& os, const ExperimentReport& report) {
    os << "suite,signal,method,ts,snr_db,trial,seed,version,dim_used,max_error,rms_error,"
          "sample_interp_error,aliasing_verdict,status\n";
    for (const auto& r : report.rows) {
        os << r.suite << "," << r.signal << "," << r.method << "," << format_double(r.period)
           << "," << (r.snr_db ? format_double(*r.snr_db) : "") << "," << r.trial << ","
           << r.seed << "," << kToolkitVersion << "," << r.dim_used << ","
           << format_double(r.max_error) << "," << format_double(r.rms_error) << ","
           << format_double(r.sample_interp_error) << "," << r.aliasing_verdict << ",\""
           << r.status << "\"\n";
    }
}

} // namespace ksr
