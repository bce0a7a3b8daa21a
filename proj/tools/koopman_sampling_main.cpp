#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ksr/baselines.hpp"
#include "ksr/closed_form.hpp"
#include "ksr/experiment.hpp"
#include "ksr/koopman.hpp"
#include "ksr/sampling.hpp"
#include "ksr/series.hpp"
#include "ksr/signal.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitAliasing = 4;

std::ostream& open_or_stdout(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw ksr::precondition_error("cannot open output file: " + path);
    return file;
}

// module default: the SVD-selected embedding, never the preset table
int auto_embedding(const ksr::SampleSet& ss) {
    const int k_max = std::min(12, static_cast<int>(ss.values.size()) / 2);
    const auto sel = ksr::select_dimension(ss, k_max);
    return std::max(sel.dimension, 1);
}

ksr::SampleSet make_samples(const std::string& signal, const std::string& samples_path,
                            double ts, int n, double start, double snr_db,
                            std::uint64_t seed) {
    ksr::SampleSet ss;
    if (!samples_path.empty()) {
        std::ifstream in(samples_path);
        if (!in) throw ksr::precondition_error("cannot open samples file: " + samples_path);
        if (samples_path.size() > 5 &&
            samples_path.substr(samples_path.size() - 5) == ".json") {
            std::stringstream buf;
            buf << in.rdbuf();
            ss = ksr::samples_from_json_text(buf.str());
        } else {
            ss = ksr::read_samples_csv(in);
        }
    } else {
        ss = ksr::sample(ksr::load_signal(signal), ts, n, start);
    }
    if (std::isfinite(snr_db)) ss = ksr::add_white_noise(ss, snr_db, seed);
    return ss;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Koopman-operator signal sampling and reconstruction toolkit"};
    app.require_subcommand(1);

    std::string signal = "paper-a";
    std::string samples_path;
    std::string out_path;
    std::string format = "csv";
    std::string method = "kr";
    double ts = 0.3;
    int n = 20;
    double start = 0.0;
    std::optional<int> dim;
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
    int trials = 1;
    int grid = 1000;
    double t0 = 0.0;
    std::optional<double> t1;
    double alpha = 0.0;

    auto add_signal_opts = [&](CLI::App* cmd) {
        cmd->add_option("--signal", signal, "preset name (paper-a..paper-d) or JSON path");
        cmd->add_option("--out", out_path, "output file (default stdout)");
    };

    auto* cmd_generate = app.add_subcommand("generate", "evaluate a signal on a time grid");
    add_signal_opts(cmd_generate);
    cmd_generate->add_option("--t0", t0, "grid start, s");
    cmd_generate->add_option("--t1", t1, "grid end, s");
    cmd_generate->add_option("--grid", grid, "grid points");

    auto* cmd_sample = app.add_subcommand("sample", "uniformly sample a signal");
    add_signal_opts(cmd_sample);
    cmd_sample->add_option("--ts", ts, "sampling period, s");
    cmd_sample->add_option("--n", n, "number of samples");
    cmd_sample->add_option("--start", start, "start time, s");
    cmd_sample->add_option("--snr-db", snr_db, "white-noise SNR in dB (default: none)");
    cmd_sample->add_option("--seed", seed, "noise RNG seed");
    cmd_sample->add_option("--format", format, "csv or json");

    auto* cmd_spectrum = app.add_subcommand("spectrum", "Koopman spectrum and aliasing verdict");
    add_signal_opts(cmd_spectrum);
    cmd_spectrum->add_option("--ts", ts, "sampling period to judge, s")->default_val(0.0);

    auto* cmd_identify = app.add_subcommand("identify", "identify the DT Koopman model");
    add_signal_opts(cmd_identify);
    cmd_identify->add_option("--samples", samples_path, "sample CSV/JSON instead of --signal");
    cmd_identify->add_option("--ts", ts, "sampling period, s");
    cmd_identify->add_option("--n", n, "number of samples");
    cmd_identify->add_option("--dim", dim, "embedding dimension (default: SVD-selected)");
    cmd_identify->add_option("--snr-db", snr_db, "white-noise SNR in dB");
    cmd_identify->add_option("--seed", seed, "noise RNG seed");

    auto* cmd_reconstruct = app.add_subcommand("reconstruct", "reconstruct a signal from samples");
    add_signal_opts(cmd_reconstruct);
    cmd_reconstruct->add_option("--samples", samples_path, "sample CSV/JSON instead of --signal");
    cmd_reconstruct->add_option("--method", method,
                                "kr | kr-windowed | sinc | exp-sinc | spline | pchip | polyfit");
    cmd_reconstruct->add_option("--ts", ts, "sampling period, s");
    cmd_reconstruct->add_option("--n", n, "number of samples");
    cmd_reconstruct->add_option("--dim", dim, "embedding dimension for kr");
    cmd_reconstruct->add_option("--alpha", alpha, "growth rate for exp-sinc");
    cmd_reconstruct->add_option("--snr-db", snr_db, "white-noise SNR in dB");
    cmd_reconstruct->add_option("--seed", seed, "noise RNG seed");
    cmd_reconstruct->add_option("--grid", grid, "grid points");
    cmd_reconstruct->add_option("--t1", t1, "grid end (default (n-1)*ts)");

    double bound_alpha = 0.0, bound_c = 0.0, bound_ts = 0.0, bound_energy = 0.0,
           bound_t = 0.0;
    int bound_n1 = 0, bound_n2 = 0;
    auto* cmd_bound = app.add_subcommand("bound", "exp-sinc truncation-error bound");
    cmd_bound->add_option("--alpha", bound_alpha, "growth rate, 1/s")->required();
    cmd_bound->add_option("--c", bound_c, "band, rad/s")->required();
    cmd_bound->add_option("--ts", bound_ts, "sampling period, s")->required();
    cmd_bound->add_option("--energy", bound_energy, "band-limited factor energy E")->required();
    cmd_bound->add_option("--n1", bound_n1, "samples left of the window center")->required();
    cmd_bound->add_option("--n2", bound_n2, "samples right of the window center")->required();
    cmd_bound->add_option("--t", bound_t, "evaluation time, s")->required();

    ksr::ExperimentSpec spec;
    auto add_suite = [&](const char* name, const char* desc) {
        auto* cmd = app.add_subcommand(name, desc);
        cmd->add_option("--signal", spec.signals, "subset of presets / signal files");
        cmd->add_option("--ts", spec.periods, "override sampling periods");
        cmd->add_option("--n", spec.sample_count, "samples per cell");
        cmd->add_option("--dim", spec.dim, "embedding override");
        cmd->add_option("--method", spec.methods, "override methods");
        cmd->add_option("--snr-db", spec.snr_db, "override SNR levels (fig10to13)");
        cmd->add_option("--trials", spec.trials, "noise trials per cell");
        cmd->add_option("--seed", spec.seed, "base RNG seed");
        cmd->add_option("--grid", spec.grid_points, "error-grid points");
        cmd->add_option("--out", spec.output_dir, "output directory")->required();
        return cmd;
    };
    auto* cmd_fig25 = add_suite("fig2to5", "baseline comparison at ts 0.2/0.4/0.6");
    auto* cmd_fig69 = add_suite("fig6to9", "near-critical sampling at ts 0.78/0.79");
    auto* cmd_fig1013 = add_suite("fig10to13", "noisy reconstruction at SNR 30/20/10 dB");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*cmd_generate) {
            const ksr::Signal sig = ksr::load_signal(signal);
            const double hi = t1.value_or(t0 + 10.0);
            ksr::ReconstructionSeries series;
            series.method = "truth";
            series.times = ksr::linspace(t0, hi, grid);
            for (double t : series.times) series.values.push_back(ksr::evaluate(sig, t));
            std::ofstream file;
            ksr::write_series_csv(open_or_stdout(file, out_path), series);
        } else if (*cmd_sample) {
            const auto ss = make_samples(signal, "", ts, n, start, snr_db, seed);
            std::ofstream file;
            auto& os = open_or_stdout(file, out_path);
            if (format == "json") {
                os << ksr::samples_to_json_text(ss) << "\n";
            } else {
                ksr::write_samples_csv(os, ss);
            }
        } else if (*cmd_spectrum) {
            const ksr::Signal sig = ksr::load_signal(signal);
            const auto rep = ksr::koopman_spectrum(
                sig, ts > 0.0 ? std::optional<double>(ts) : std::nullopt);
            std::ofstream file;
            auto& os = open_or_stdout(file, out_path);
            os << "eigenvalues:";
            for (const auto& ev : rep.eigenvalues) {
                os << " (" << ksr::format_double(ev.real()) << ","
                   << ksr::format_double(ev.imag()) << ")";
            }
            os << "\nmax_abs_imag: " << ksr::format_double(rep.max_abs_imag)
               << "\ncritical_period: " << ksr::format_double(rep.critical_period) << "\n";
            if (rep.sampling_period) {
                os << "sampling_period: " << ksr::format_double(*rep.sampling_period)
                   << "\nverdict: " << ksr::verdict_name(rep.verdict) << "\n";
            }
        } else if (*cmd_identify) {
            const auto ss = make_samples(signal, samples_path, ts, n, start, snr_db, seed);
            const int m = dim ? *dim : auto_embedding(ss);
            const auto model = ksr::identify(ss, m);
            std::ofstream file;
            open_or_stdout(file, out_path) << ksr::model_to_json_text(model) << "\n";
        } else if (*cmd_reconstruct) {
            const auto ss = make_samples(signal, samples_path, ts, n, start, snr_db, seed);
            const bool have_truth = samples_path.empty();
            const double hi = t1.value_or((n - 1) * ss.period);
            std::vector<double> times = ksr::linspace(ss.start_time, hi, grid);

            ksr::ReconstructionSeries series;
            if (method == "kr" || method == "kr-windowed") {
                const int m = dim ? *dim : auto_embedding(ss);
                const auto model = ksr::identify(ss, m);
                if (method == "kr-windowed") {
                    const double span = (static_cast<int>(ss.values.size()) - m) * ss.period;
                    times = ksr::linspace(ss.start_time,
                                          ss.start_time + span * (1.0 - 1e-9), grid);
                    series = ksr::reconstruct_windowed(model, ss, times);
                } else {
                    series = ksr::reconstruct(model, times);
                }
            } else if (method == "sinc") {
                series = ksr::sinc_reconstruct(ss, times);
            } else if (method == "exp-sinc") {
                series = ksr::exp_sinc_reconstruct(ss, alpha, times);
            } else if (method == "spline" || method == "pchip" || method == "polyfit") {
                ksr::BaselineMethod bm;
                bm.kind = method == "spline" ? ksr::BaselineKind::CubicSpline
                          : method == "pchip" ? ksr::BaselineKind::Pchip
                                              : ksr::BaselineKind::PolyFit;
                series = ksr::baseline_reconstruct(bm, ss, times);
            } else {
                throw ksr::precondition_error("unknown method: " + method);
            }
            std::ofstream file;
            auto& os = open_or_stdout(file, out_path);
            if (have_truth) {
                const ksr::Signal sig = ksr::load_signal(signal);
                std::vector<double> truth;
                truth.reserve(times.size());
                for (double t : times) truth.push_back(ksr::evaluate(sig, t));
                ksr::write_series_csv(os, series, truth);
            } else {
                ksr::write_series_csv(os, series);
            }
        } else if (*cmd_bound) {
            ksr::ExpSincConfig cfg{bound_alpha, bound_ts, bound_c, bound_n1, bound_n2};
            std::cout << ksr::format_double(ksr::truncation_bound(cfg, bound_energy, bound_t))
                      << "\n";
        } else {
            ksr::FigureSuite which = ksr::FigureSuite::Fig2to5;
            if (*cmd_fig69) which = ksr::FigureSuite::Fig6to9;
            if (*cmd_fig1013) which = ksr::FigureSuite::Fig10to13;
            const auto report = ksr::run_figure_suite(which, spec);
            int failures = 0;
            for (const auto& row : report.rows) {
                if (row.status != "ok") ++failures;
            }
            std::cout << "wrote " << report.rows.size() << " cells to " << spec.output_dir
                      << " (" << failures << " recorded failures)\n";
        }
    } catch (const ksr::aliasing_boundary_error& e) {
        std::cerr << "aliasing-boundary: " << e.what() << "\n";
        return kExitAliasing;
    } catch (const ksr::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return 0;
}
