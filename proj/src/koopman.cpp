#include "ksr/koopman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

namespace ksr {

namespace {

constexpr double kPi = std::numbers::pi;

nlohmann::json matrix_to_json(const linalg::Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(row);
    }
    return rows;
}

linalg::Matrix matrix_from_json(const nlohmann::json& j) {
    const auto rows = j.size();
    const auto cols = rows ? j.at(0).size() : 0;
    linalg::Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                linalg::Complex(j.at(i).at(c).at(0).get<double>(),
                                j.at(i).at(c).at(1).get<double>());
        }
    }
    return m;
}

} // namespace

KoopmanModel identify(const HankelPair& hp, double period,
                      const std::vector<double>& anchor_samples) {
    if (!(period > 0.0)) throw precondition_error("identify: period must be positive");
    if (static_cast<int>(anchor_samples.size()) != hp.embedding) {
        throw precondition_error("identify: anchor length must equal the embedding");
    }
    const linalg::Matrix x = hp.x.cast<linalg::Complex>();
    const linalg::Matrix y = hp.y.cast<linalg::Complex>();

    KoopmanModel model;
    model.embedding = hp.embedding;
    model.period = period;
    model.anchor = anchor_samples;
    model.u_dt = linalg::pinv(x) * y;

    const double ynorm = y.norm();
    model.diagnostics.pinv_residual =
        ynorm > 0.0 ? (x * model.u_dt - y).norm() / ynorm : 0.0;

    const auto dec = linalg::eig(model.u_dt);
    double margin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i) {
        margin = std::min(margin, kPi - std::abs(std::arg(dec.eigenvalues(i))));
    }
    model.diagnostics.branch_margin = margin;

    try {
        model.l_gen = linalg::logm_principal(model.u_dt) / period;
    } catch (const branch_cut_error& e) {
        throw aliasing_boundary_error(
            std::string("identify: sampling period at or past the aliasing boundary "
                        "for the identified dynamics (") +
            e.what() + ")");
    }
    return model;
}

KoopmanModel identify(const SampleSet& ss, int embedding) {
    const HankelPair hp = build_hankel(ss, embedding);
    std::vector<double> anchor(ss.values.begin(), ss.values.begin() + embedding);
    return identify(hp, ss.period, anchor);
}

KoopmanModel identify_with_backoff(const SampleSet& ss, int embedding, int min_embedding) {
    if (min_embedding < 1) min_embedding = 1;
    for (int m = embedding; m > min_embedding; --m) {
        try {
            return identify(ss, m);
        } catch (const aliasing_boundary_error&) {
            // drop the weakest delay and retry
        }
    }
    return identify(ss, min_embedding);
}

linalg::Matrix propagate(const KoopmanModel& model, double tau, bool allow_backward) {
    if (tau < 0.0 && !allow_backward) {
        throw precondition_error("propagate: negative tau requires allow_backward");
    }
    return linalg::expm(tau * model.l_gen);
}

ReconstructionSeries reconstruct(const KoopmanModel& model,
                                 const std::vector<double>& times) {
    const int m = model.embedding;
    Eigen::RowVectorXcd anchor(m);
    for (int i = 0; i < m; ++i) anchor(i) = linalg::Complex(model.anchor[i], 0.0);

    ReconstructionSeries out;
    out.method = "kr";
    out.times = times;
    out.values.reserve(times.size());
    double residual = 0.0;
    double scale = 0.0;
    for (double t : times) {
        const linalg::Matrix u_tau = propagate(model, t);
        const linalg::Complex v = anchor * u_tau.col(0);
        residual = std::max(residual, std::abs(v.imag()));
        scale = std::max(scale, std::abs(v.real()));
        out.values.push_back(v.real());
    }
    out.max_imag_residual = residual;
    if (residual > 1e-4 * (1.0 + scale)) {
        throw inconsistency_error(
            "reconstruct: imaginary residual " + std::to_string(residual) +
            " suggests a mis-specified embedding or aliasing");
    }
    return out;
}

ReconstructionSeries reconstruct_windowed(const KoopmanModel& model, const SampleSet& ss,
                                          const std::vector<double>& times) {
    const int m = model.embedding;
    const int n = static_cast<int>(ss.values.size());
    const double span = (n - m) * ss.period;

    ReconstructionSeries out;
    out.method = "kr-windowed";
    out.times = times;
    out.values.reserve(times.size());
    double residual = 0.0;
    for (double t : times) {
        const double offset = t - ss.start_time;
        if (offset < 0.0 || offset >= span) {
            throw range_error("reconstruct_windowed: time outside the covered range");
        }
        // snap guards the k*T_s boundaries against roundoff in the division
        int k = static_cast<int>(std::floor(offset / ss.period + 1e-9));
        k = std::clamp(k, 0, n - m - 1);
        double tau = offset - k * ss.period;
        if (tau < 0.0) tau = 0.0;

        const linalg::Matrix u_tau = propagate(model, tau);
        linalg::Complex v(0.0, 0.0);
        for (int i = 0; i < m; ++i) {
            v += ss.values[static_cast<std::size_t>(k) + static_cast<std::size_t>(i)] *
                 u_tau(i, 0);
        }
        residual = std::max(residual, std::abs(v.imag()));
        out.values.push_back(v.real());
    }
    out.max_imag_residual = residual;
    return out;
}

SpectrumReport estimate_spectrum(const KoopmanModel& model) {
    const auto dec = linalg::eig(model.l_gen);
    SpectrumReport rep;
    rep.max_abs_imag = 0.0;
    for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i) {
        rep.eigenvalues.push_back(dec.eigenvalues(i));
        rep.max_abs_imag = std::max(rep.max_abs_imag, std::abs(dec.eigenvalues(i).imag()));
    }
    rep.critical_period = rep.max_abs_imag > 0.0
                              ? kPi / rep.max_abs_imag
                              : std::numeric_limits<double>::infinity();
    rep.sampling_period = model.period;
    if (model.diagnostics.branch_margin < 1e-6) {
        rep.verdict = AliasingVerdict::Critical;
    } else if (model.period < rep.critical_period) {
        rep.verdict = AliasingVerdict::NoAliasing;
    } else {
        rep.verdict = AliasingVerdict::Aliasing;
    }
    return rep;
}

std::string model_to_json_text(const KoopmanModel& model) {
    nlohmann::json j;
    j["u_dt"] = matrix_to_json(model.u_dt);
    j["l_gen"] = matrix_to_json(model.l_gen);
    j["embedding"] = model.embedding;
    j["period"] = model.period;
    j["anchor"] = model.anchor;
    j["diagnostics"] = {{"pinv_residual", model.diagnostics.pinv_residual},
                        {"branch_margin", model.diagnostics.branch_margin}};
    return j.dump(2);
}

KoopmanModel model_from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    KoopmanModel model;
    model.u_dt = matrix_from_json(j.at("u_dt"));
    model.l_gen = matrix_from_json(j.at("l_gen"));
    model.embedding = j.at("embedding").get<int>();
    model.period = j.at("period").get<double>();
    model.anchor = j.at("anchor").get<std::vector<double>>();
    model.diagnostics.pinv_residual = j.at("diagnostics").at("pinv_residual").get<double>();
    model.diagnostics.branch_margin = j.at("diagnostics").at("branch_margin").get<double>();
    return model;
}

} // namespace ksr
