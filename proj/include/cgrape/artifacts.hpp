#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cgrape/config.hpp"
#include "cgrape/optimizer.hpp"
#include "cgrape/phase_qubit.hpp"

namespace cgrape {

// Model-fit document: coefficients, ranges, phi_ref, omega_ref, validity
// limit, plus the config hash for provenance.
nlohmann::json fits_to_json(const QubitModelFits& fits, const std::string& hash);
QubitModelFits fits_from_json(const nlohmann::json& doc);

void write_text_file(const std::string& path, const std::string& content);

// bias_over_2pi, eta_data, eta_fit, alpha_data, alpha_fit,
// omega_data, omega_fit, omega_harmonic
std::string fit_curves_csv(const FitDataset& data, const std::string& hash);

// t_ns, phi_b_raw, phi_b_smoothed (bias columns in units of 2*pi)
std::string pulse_csv(const RVec& raw, const RVec& smoothed, double dt_ns,
                      const std::string& hash);

struct PulseCsv {
    RVec raw, smoothed;
    double dt_ns = 0.0;
};
PulseCsv read_pulse_csv(const std::string& path);

// t_ns, init_state, p0, p1, pm for initial states |0><0| and |1><1|,
// sampled before the first pixel and after every pixel.
std::string population_csv(const std::vector<Mat>& pixel_propagators, double dt_ns,
                           const std::string& hash);

// Per-pixel propagators for an already-smoothed physical pulse.
std::vector<Mat> pixel_propagators(const QubitModelFits& fits, const QubitParams& params,
                                   const RVec& physical_pulse, double dt_ns);

struct RunSummary {
    double initial_fidelity = 0.0, final_fidelity = 0.0;
    Contrast initial_contrast, final_contrast;
    std::vector<double> fidelity_history;
    int iterations = 0;
    int objective_evaluations = 0;
    std::string termination_reason;
    double max_smoothed_bias = 0.0;
    double validity_limit = 0.0;
};

nlohmann::json report_to_json(const RunSummary& summary, const std::string& hash);

}  // namespace cgrape
