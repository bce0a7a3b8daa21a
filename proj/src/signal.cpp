#include "ksr/signal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace ksr {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc_stable(double x) {
    // series branch below 1e-8 keeps the removable singularity smooth
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

bool close(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

} // namespace

const char* verdict_name(AliasingVerdict v) {
    switch (v) {
        case AliasingVerdict::NoAliasing: return "NoAliasing";
        case AliasingVerdict::Aliasing: return "Aliasing";
        case AliasingVerdict::Critical: return "Critical";
    }
    return "?";
}

void validate(const Signal& s) {
    if (s.kind == SignalKind::TermSum) {
        if (s.terms.empty()) throw precondition_error("signal: term sum must be non-empty");
        for (const auto& t : s.terms) {
            if (t.amplitude == 0.0) throw precondition_error("signal: zero-amplitude term");
            if (t.degree < 0 || t.degree > 8)
                throw precondition_error("signal: term degree out of range 0..8");
            if (!std::isfinite(t.amplitude) || !std::isfinite(t.growth) ||
                !std::isfinite(t.omega) || !std::isfinite(t.phase))
                throw precondition_error("signal: non-finite term field");
        }
    } else {
        if (!(s.band > 0.0)) throw precondition_error("signal: cardinal sine needs c > 0");
        if (!std::isfinite(s.alpha) || !std::isfinite(s.scale))
            throw precondition_error("signal: non-finite cardinal-sine field");
    }
}

Signal make_term_sum(std::vector<SignalTerm> terms, std::string label) {
    Signal s;
    s.kind = SignalKind::TermSum;
    s.terms = std::move(terms);
    s.label = std::move(label);
    validate(s);
    return s;
}

Signal make_cardinal_sine(double alpha, double c, double scale, std::string label) {
    Signal s;
    s.kind = SignalKind::CardinalSine;
    s.alpha = alpha;
    s.band = c;
    s.scale = scale;
    s.label = std::move(label);
    validate(s);
    return s;
}

double evaluate(const Signal& s, double t) {
    if (!std::isfinite(t)) throw precondition_error("evaluate: non-finite time");
    if (s.kind == SignalKind::CardinalSine) {
        return s.scale * std::exp(s.alpha * t) * sinc_stable(s.band * t);
    }
    double acc = 0.0;
    for (const auto& term : s.terms) {
        acc += term.amplitude * std::pow(t, term.degree) * std::exp(term.growth * t) *
               std::cos(term.omega * t + term.phase);
    }
    return acc;
}

SpectrumReport koopman_spectrum(const Signal& s, std::optional<double> sampling_period) {
    validate(s);
    SpectrumReport rep;
    if (s.kind == SignalKind::CardinalSine) {
        rep.eigenvalues = {Complex(s.alpha, s.band), Complex(s.alpha, -s.band)};
        rep.max_abs_imag = s.band;
    } else {
        for (const auto& term : s.terms) {
            const double w = std::abs(term.omega);
            auto add = [&](Complex lam) {
                for (const auto& e : rep.eigenvalues)
                    if (close(e.real(), lam.real()) && close(e.imag(), lam.imag())) return;
                rep.eigenvalues.push_back(lam);
            };
            if (w == 0.0) {
                add(Complex(term.growth, 0.0));
            } else {
                add(Complex(term.growth, w));
                add(Complex(term.growth, -w));
            }
            rep.max_abs_imag = std::max(rep.max_abs_imag, w);
        }
    }
    rep.critical_period = rep.max_abs_imag > 0.0
                              ? kPi / rep.max_abs_imag
                              : std::numeric_limits<double>::infinity();
    rep.sampling_period = sampling_period;
    if (sampling_period) {
        const double ts = *sampling_period;
        if (std::isfinite(rep.critical_period) &&
            std::abs(ts - rep.critical_period) <= 1e-12) {
            rep.verdict = AliasingVerdict::Critical;
        } else if (ts < rep.critical_period) {
            rep.verdict = AliasingVerdict::NoAliasing;
        } else {
            rep.verdict = AliasingVerdict::Aliasing;
        }
    }
    return rep;
}

int min_space_dimension(const Signal& s) {
    validate(s);
    if (s.kind != SignalKind::TermSum) {
        throw precondition_error(
            "min_space_dimension: cardinal-sine signals span an infinite-dimensional space");
    }
    struct Group {
        double growth;
        double omega; // |omega|
        int max_degree;
    };
    std::vector<Group> groups;
    for (const auto& term : s.terms) {
        const double w = std::abs(term.omega);
        bool found = false;
        for (auto& g : groups) {
            if (close(g.growth, term.growth) && close(g.omega, w)) {
                g.max_degree = std::max(g.max_degree, term.degree);
                found = true;
                break;
            }
        }
        if (!found) groups.push_back({term.growth, w, term.degree});
    }
    int dim = 0;
    for (const auto& g : groups) {
        const int per_eigenvalue = g.max_degree + 1;
        dim += (g.omega == 0.0) ? per_eigenvalue : 2 * per_eigenvalue;
    }
    return dim;
}

Signal preset(const std::string& name) {
    if (name == "paper-a") {
        return make_term_sum({{-1.0, 0, 0.0, 2.0, 0.0},
                              {1.0, 0, 0.0, 0.5, kPi / 2},
                              {1.5, 0, 0.0, 4.0, kPi / 3}},
                             "paper-a");
    }
    if (name == "paper-b") {
        return make_term_sum({{1.0, 0, -1.0, 4.0, kPi / 6}, {1.0, 0, -0.5, 2.0, 0.0}},
                             "paper-b");
    }
    if (name == "paper-c") {
        return make_term_sum({{1.0, 1, 0.0, 4.0, kPi / 3}}, "paper-c");
    }
    if (name == "paper-d") {
        return make_term_sum({{1.0, 1, -1.0, 4.0, kPi / 3}}, "paper-d");
    }
    throw precondition_error("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
    return {"paper-a", "paper-b", "paper-c", "paper-d"};
}

Signal signal_from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Signal s;
    s.label = j.value("label", "");
    const std::string kind = j.value("kind", "term_sum");
    if (kind == "term_sum") {
        s.kind = SignalKind::TermSum;
        for (const auto& jt : j.at("terms")) {
            SignalTerm t;
            t.amplitude = jt.at("a").get<double>();
            t.degree = jt.value("l", 0);
            t.growth = jt.value("sigma", 0.0);
            t.omega = jt.value("omega", 0.0);
            t.phase = jt.value("phi", 0.0);
            s.terms.push_back(t);
        }
    } else if (kind == "cardinal_sine") {
        s.kind = SignalKind::CardinalSine;
        s.alpha = j.value("alpha", 0.0);
        s.band = j.at("c").get<double>();
        s.scale = j.value("scale", 1.0);
    } else {
        throw precondition_error("signal json: unknown kind '" + kind + "'");
    }
    validate(s);
    return s;
}

std::string signal_to_json_text(const Signal& s) {
    nlohmann::json j;
    j["label"] = s.label;
    if (s.kind == SignalKind::TermSum) {
        j["kind"] = "term_sum";
        j["terms"] = nlohmann::json::array();
        for (const auto& t : s.terms) {
            j["terms"].push_back({{"a", t.amplitude},
                                  {"l", t.degree},
                                  {"sigma", t.growth},
                                  {"omega", t.omega},
                                  {"phi", t.phase}});
        }
    } else {
        j["kind"] = "cardinal_sine";
        j["alpha"] = s.alpha;
        j["c"] = s.band;
        j["scale"] = s.scale;
    }
    return j.dump(2);
}

Signal load_signal(const std::string& preset_or_path) {
    for (const auto& p : preset_names()) {
        if (p == preset_or_path) return preset(p);
    }
    std::ifstream in(preset_or_path);
    if (!in) throw precondition_error("cannot open signal file: " + preset_or_path);
    std::stringstream buf;
    buf << in.rdbuf();
    return signal_from_json_text(buf.str());
}

} // namespace ksr
