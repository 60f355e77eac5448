#include "cgrape/artifacts.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cgrape {

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

nlohmann::json fits_to_json(const QubitModelFits& fits, const std::string& hash) {
    nlohmann::json j;
    j["config_hash"] = hash;
    j["eta_poly"] = fits.eta_poly;
    j["alpha_poly"] = fits.alpha_poly;
    j["omega_fit"] = {{"a", fits.omega_fit.a}, {"b", fits.omega_fit.b}, {"c", fits.omega_fit.c},
                      {"d", fits.omega_fit.d}, {"e", fits.omega_fit.e}};
    j["fit_lo_over_2pi"] = fits.fit_lo / kTwoPi;
    j["fit_hi_over_2pi"] = fits.fit_hi / kTwoPi;
    j["phi_ref_over_2pi"] = fits.phi_ref / kTwoPi;
    j["omega_ref_rad_per_ns"] = fits.omega_ref;
    j["validity_limit_over_2pi"] = fits.validity_limit / kTwoPi;
    return j;
}

QubitModelFits fits_from_json(const nlohmann::json& doc) {
    QubitModelFits f;
    doc.at("eta_poly").get_to(f.eta_poly);
    doc.at("alpha_poly").get_to(f.alpha_poly);
    const auto& w = doc.at("omega_fit");
    f.omega_fit = {w.at("a").get<double>(), w.at("b").get<double>(), w.at("c").get<double>(),
                   w.at("d").get<double>(), w.at("e").get<double>()};
    f.fit_lo = doc.at("fit_lo_over_2pi").get<double>() * kTwoPi;
    f.fit_hi = doc.at("fit_hi_over_2pi").get<double>() * kTwoPi;
    f.phi_ref = doc.at("phi_ref_over_2pi").get<double>() * kTwoPi;
    f.omega_ref = doc.at("omega_ref_rad_per_ns").get<double>();
    f.validity_limit = doc.at("validity_limit_over_2pi").get<double>() * kTwoPi;
    return f;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

std::string fit_curves_csv(const FitDataset& data, const std::string& hash) {
    std::ostringstream os;
    os << "# config_hash=" << hash << "\n";
    os << "bias_over_2pi,eta_data,eta_fit,alpha_data,alpha_fit,omega_data,omega_fit,"
          "omega_harmonic\n";
    for (Eigen::Index i = 0; i < data.biases.size(); ++i) {
        os << fmt(data.biases(i) / kTwoPi) << ',' << fmt(data.eta_data(i)) << ','
           << fmt(data.eta_fitted(i)) << ',' << fmt(data.alpha_data(i)) << ','
           << fmt(data.alpha_fitted(i)) << ',' << fmt(data.omega_data(i)) << ','
           << fmt(data.omega_fitted(i)) << ',' << fmt(data.omega_harmonic(i)) << '\n';
    }
    return os.str();
}

std::string pulse_csv(const RVec& raw, const RVec& smoothed, double dt_ns,
                      const std::string& hash) {
    if (raw.size() != smoothed.size())
        throw std::invalid_argument("pulse_csv: length mismatch");
    std::ostringstream os;
    os << "# config_hash=" << hash << "\n";
    os << "t_ns,phi_b_raw,phi_b_smoothed\n";
    for (Eigen::Index j = 0; j < raw.size(); ++j)
        os << fmt(j * dt_ns) << ',' << fmt(raw(j) / kTwoPi) << ',' << fmt(smoothed(j) / kTwoPi)
           << '\n';
    return os.str();
}

PulseCsv read_pulse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("read_pulse_csv: cannot open '" + path + "'");
    std::string line;
    std::vector<double> t, raw, smoothed;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("t_ns", 0) == 0) continue;  // header
        double a, b, c;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3)
            throw std::invalid_argument("read_pulse_csv: malformed row '" + line + "'");
        t.push_back(a);
        raw.push_back(b * kTwoPi);
        smoothed.push_back(c * kTwoPi);
    }
    if (t.size() < 2) throw std::invalid_argument("read_pulse_csv: too few rows");
    PulseCsv out;
    out.dt_ns = t[1] - t[0];
    out.raw = Eigen::Map<RVec>(raw.data(), raw.size());
    out.smoothed = Eigen::Map<RVec>(smoothed.data(), smoothed.size());
    return out;
}

std::vector<Mat> pixel_propagators(const QubitModelFits& fits, const QubitParams& params,
                                   const RVec& physical_pulse, double dt_ns) {
    const Mat drift = drift_generator(params);
    std::vector<Mat> out(physical_pulse.size());
    for (Eigen::Index j = 0; j < physical_pulse.size(); ++j)
        out[j] = expm((drift + control_generator(physical_pulse(j), fits).value) * dt_ns);
    return out;
}

std::string population_csv(const std::vector<Mat>& pixel_propagators, double dt_ns,
                           const std::string& hash) {
    std::ostringstream os;
    os << "# config_hash=" << hash << "\n";
    os << "t_ns,init_state,p0,p1,pm\n";
    for (int init : {0, 1}) {
        Mat rho = Mat::Zero(3, 3);
        rho(init, init) = 1.0;
        Vec v = column_stack(rho);
        auto emit = [&](double t, const Vec& state) {
            const Mat r = unstack(state);
            os << fmt(t) << ',' << init << ',' << fmt(r(0, 0).real()) << ','
               << fmt(r(1, 1).real()) << ',' << fmt(r(2, 2).real()) << '\n';
        };
        emit(0.0, v);
        for (std::size_t j = 0; j < pixel_propagators.size(); ++j) {
            v = pixel_propagators[j] * v;
            emit((j + 1) * dt_ns, v);
        }
    }
    return os.str();
}

nlohmann::json report_to_json(const RunSummary& s, const std::string& hash) {
    nlohmann::json j;
    j["config_hash"] = hash;
    j["initial"] = {{"fidelity", s.initial_fidelity},
                    {"contrast", s.initial_contrast.xi},
                    {"p_bright", s.initial_contrast.p_bright},
                    {"p_dark", s.initial_contrast.p_dark}};
    j["final"] = {{"fidelity", s.final_fidelity},
                  {"contrast", s.final_contrast.xi},
                  {"p_bright", s.final_contrast.p_bright},
                  {"p_dark", s.final_contrast.p_dark}};
    j["fidelity_history"] = s.fidelity_history;
    j["iterations"] = s.iterations;
    j["objective_evaluations"] = s.objective_evaluations;
    j["termination_reason"] = s.termination_reason;
    j["max_smoothed_bias_over_2pi"] = s.max_smoothed_bias / kTwoPi;
    j["validity_limit_over_2pi"] = s.validity_limit / kTwoPi;
    return j;
}

}  // namespace cgrape
