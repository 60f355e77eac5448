#include "cgrape/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

namespace cgrape {

namespace fs = std::filesystem;

FitArtifacts run_fit(const RunConfig& config) {
    FitArtifacts out;
    out.hash = config_hash(config);
    out.cache_key = fit_hash(config);
    ModelFitResult result = fit_model_curves(config.qubit, config.model);
    out.fits = result.fits;
    out.data = std::move(result.data);
    return out;
}

void write_fit_artifacts(const FitArtifacts& artifacts, const std::string& out_dir) {
    fs::create_directories(out_dir);
    nlohmann::json doc = fits_to_json(artifacts.fits, artifacts.hash);
    doc["fit_hash"] = artifacts.cache_key;
    write_text_file(out_dir + "/model_fit.json", doc.dump(2) + "\n");
    write_text_file(out_dir + "/fit_curves.csv", fit_curves_csv(artifacts.data, artifacts.hash));
}

QubitModelFits ensure_fits(const RunConfig& config, const std::string& out_dir) {
    const std::string path = out_dir + "/model_fit.json";
    const std::string key = fit_hash(config);
    std::ifstream in(path);
    if (in) {
        nlohmann::json doc;
        try {
            in >> doc;
            if (doc.value("fit_hash", "") == key) return fits_from_json(doc);
        } catch (...) {
            // stale or corrupt cache, refit below
        }
    }
    FitArtifacts artifacts = run_fit(config);
    write_fit_artifacts(artifacts, out_dir);
    return artifacts.fits;
}

OptimizationProblem build_problem(const RunConfig& config, const QubitModelFits& fits) {
    OptimizationProblem problem;
    problem.model.drift = drift_generator(config.qubit);
    problem.model.control = [fits](double u) { return control_generator(u, fits); };
    problem.target_choi = target_choi();
    problem.settings = config.optimizer;

    PulseShape& shape = problem.pulse;
    shape.n_pixels = static_cast<int>(std::llround(config.pulse.duration_ns / config.pulse.dt_ns));
    shape.dt_ns = config.pulse.dt_ns;
    shape.n_head = static_cast<int>(std::llround(config.pulse.head_ns / config.pulse.dt_ns));
    shape.n_tail = static_cast<int>(std::llround(config.pulse.tail_ns / config.pulse.dt_ns));
    shape.sigma_ns = config.pulse.sigma_ns;
    shape.reference_bias = fits.phi_ref;
    shape.lo = config.pulse.lo_over_2pi ? *config.pulse.lo_over_2pi * kTwoPi : fits.phi_ref;
    shape.hi = config.pulse.hi_over_2pi ? *config.pulse.hi_over_2pi * kTwoPi
                                        : fits.validity_limit;
    shape.initial_amplitude = config.pulse.initial_amplitude_over_2pi * kTwoPi;
    shape.validate();
    return problem;
}

OptimizeResult run_optimize(const RunConfig& config, const std::string& out_dir) {
    const std::string hash = config_hash(config);
    const QubitModelFits fits = ensure_fits(config, out_dir);
    const OptimizationProblem problem = build_problem(config, fits);

    OptimizeResult out;
    out.report = maximize(problem);

    out.summary.initial_fidelity = out.report.initial_fidelity;
    out.summary.final_fidelity = out.report.final_fidelity;
    out.summary.initial_contrast = contrast(out.report.initial_propagator);
    out.summary.final_contrast = contrast(out.report.final_propagator);
    out.summary.fidelity_history = out.report.fidelity_history;
    out.summary.iterations = out.report.iterations;
    out.summary.objective_evaluations = out.report.objective_evaluations;
    out.summary.termination_reason = out.report.termination_reason;
    out.summary.max_smoothed_bias = out.report.final_physical.maxCoeff();
    out.summary.validity_limit = fits.validity_limit;

    fs::create_directories(out_dir);
    write_text_file(out_dir + "/report.json", report_to_json(out.summary, hash).dump(2) + "\n");
    write_text_file(out_dir + "/pulse.csv",
                    pulse_csv(out.report.final_raw, out.report.final_physical,
                              config.pulse.dt_ns, hash));
    const auto pixels =
        pixel_propagators(fits, config.qubit, out.report.final_physical, config.pulse.dt_ns);
    write_text_file(out_dir + "/populations.csv",
                    population_csv(pixels, config.pulse.dt_ns, hash));
    return out;
}

SimulateResult run_simulate(const RunConfig& config, const std::string& pulse_path,
                            const std::string& out_dir) {
    const std::string hash = config_hash(config);
    const QubitModelFits fits = ensure_fits(config, out_dir);

    const PulseCsv pulse = read_pulse_csv(pulse_path);
    const int n_expected =
        static_cast<int>(std::llround(config.pulse.duration_ns / config.pulse.dt_ns));
    if (pulse.smoothed.size() != n_expected)
        throw std::invalid_argument("simulate: pulse CSV row count does not match the config grid");
    if (std::abs(pulse.dt_ns - config.pulse.dt_ns) > 1e-9)
        throw std::invalid_argument("simulate: pulse CSV time step does not match the config grid");

    const auto pixels = pixel_propagators(fits, config.qubit, pulse.smoothed, config.pulse.dt_ns);
    Mat total = Mat::Identity(9, 9);
    for (const Mat& t : pixels) total = t * total;
    const Propagator prop{total, config.pulse.duration_ns};

    SimulateResult out;
    out.fidelity = frobenius_fidelity(target_choi(), reshuffle(prop));
    out.contrast = contrast(prop);

    fs::create_directories(out_dir);
    write_text_file(out_dir + "/populations.csv",
                    population_csv(pixels, config.pulse.dt_ns, hash));
    nlohmann::json j;
    j["config_hash"] = hash;
    j["fidelity"] = out.fidelity;
    j["contrast"] = out.contrast.xi;
    j["p_bright"] = out.contrast.p_bright;
    j["p_dark"] = out.contrast.p_dark;
    write_text_file(out_dir + "/contrast.json", j.dump(2) + "\n");
    return out;
}

}  // namespace cgrape
