#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ksr/errors.hpp"

namespace ksr {

using Complex = std::complex<double>;

// One real term a * t^l * e^{sigma t} * cos(omega t + phi).
struct SignalTerm {
    double amplitude = 0.0;
    int degree = 0;      // polynomial power l, 0..8
    double growth = 0.0; // sigma, 1/s
    double omega = 0.0;  // rad/s
    double phase = 0.0;  // rad
};

enum class SignalKind { TermSum, CardinalSine };

// Either a finite sum of polynomial-exponential-cosine terms or the
// cardinal-sine family scale * e^{alpha t} * sin(c t)/(c t).
struct Signal {
    SignalKind kind = SignalKind::TermSum;
    std::vector<SignalTerm> terms; // TermSum
    double alpha = 0.0;            // CardinalSine growth
    double band = 0.0;             // CardinalSine half-band c, rad/s
    double scale = 1.0;            // CardinalSine amplitude
    std::string label;
};

enum class AliasingVerdict { NoAliasing, Aliasing, Critical };

struct SpectrumReport {
    std::vector<Complex> eigenvalues; // band endpoints for CardinalSine
    double max_abs_imag = 0.0;        // rad/s
    double critical_period = 0.0;     // T_gamma = pi / max_abs_imag, +inf if 0
    std::optional<double> sampling_period;
    AliasingVerdict verdict = AliasingVerdict::NoAliasing;
};

const char* verdict_name(AliasingVerdict v);

Signal make_term_sum(std::vector<SignalTerm> terms, std::string label = "");
Signal make_cardinal_sine(double alpha, double c, double scale = 1.0,
                          std::string label = "");
void validate(const Signal& s);

double evaluate(const Signal& s, double t);

// Verdict is computed against sampling_period when provided; without one the
// report carries NoAliasing vacuously.
SpectrumReport koopman_spectrum(const Signal& s,
                                std::optional<double> sampling_period = std::nullopt);

// Dimension of the span of the time-delay family; conjugate pairs count
// separately, each eigenvalue with its polynomial multiplicity.
int min_space_dimension(const Signal& s);

// Named presets "paper-a".."paper-d", the four demo signals.
Signal preset(const std::string& name);
std::vector<std::string> preset_names();

Signal signal_from_json_text(const std::string& text);
std::string signal_to_json_text(const Signal& s);
Signal load_signal(const std::string& preset_or_path);

} // namespace ksr
