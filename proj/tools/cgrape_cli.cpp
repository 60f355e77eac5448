// Command-line entry point: fit the model curves, optimize a measurement
// pulse, or replay a stored pulse. Exit codes: 0 success, 1 numeric or
// optimizer failure, 2 config error.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "cgrape/runner.hpp"

namespace {

std::string resolve_out_dir(const cgrape::RunConfig& config, const std::string& cli_out) {
    if (!cli_out.empty()) return cli_out;
    if (const char* env = std::getenv("CGRAPE_OUT_DIR"); env && *env) return env;
    return config.output_dir;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Choi-matrix GRAPE pulse optimization for phase-qubit measurement"};
    app.require_subcommand(1);

    std::string config_path, out_dir, pulse_path;

    CLI::App* fit = app.add_subcommand("fit", "fit the three-level model curves");
    fit->add_option("--config", config_path, "config JSON path")->required();
    fit->add_option("--out", out_dir, "output directory (overrides config and env)");

    CLI::App* optimize = app.add_subcommand("optimize", "run the pulse optimization");
    optimize->add_option("--config", config_path, "config JSON path")->required();
    optimize->add_option("--out", out_dir, "output directory (overrides config and env)");

    CLI::App* simulate = app.add_subcommand("simulate", "forward-simulate a stored pulse");
    simulate->add_option("--config", config_path, "config JSON path")->required();
    simulate->add_option("--pulse", pulse_path, "pulse CSV path")->required();
    simulate->add_option("--out", out_dir, "output directory (overrides config and env)");

    CLI11_PARSE(app, argc, argv);

    try {
        const cgrape::RunConfig config = cgrape::load_config(config_path);
        const std::string dir = resolve_out_dir(config, out_dir);

        if (fit->parsed()) {
            const auto artifacts = cgrape::run_fit(config);
            cgrape::write_fit_artifacts(artifacts, dir);
            std::printf("validity limit: %.6f * 2pi\n", artifacts.fits.validity_limit / cgrape::kTwoPi);
            std::printf("phi_ref: %.6f * 2pi, omega_ref: %.4f rad/ns\n",
                        artifacts.fits.phi_ref / cgrape::kTwoPi, artifacts.fits.omega_ref);
            std::printf("wrote %s/model_fit.json and fit_curves.csv\n", dir.c_str());
        } else if (optimize->parsed()) {
            const auto result = cgrape::run_optimize(config, dir);
            std::printf("initial: fidelity %.4f, contrast %.4f\n",
                        result.summary.initial_fidelity, result.summary.initial_contrast.xi);
            std::printf("final:   fidelity %.4f, contrast %.4f (%d iterations, %s)\n",
                        result.summary.final_fidelity, result.summary.final_contrast.xi,
                        result.summary.iterations, result.summary.termination_reason.c_str());
            std::printf("wrote %s/report.json, pulse.csv, populations.csv\n", dir.c_str());
        } else if (simulate->parsed()) {
            const auto result = cgrape::run_simulate(config, pulse_path, dir);
            std::printf("fidelity %.6f, contrast %.6f (p_bright %.6f, p_dark %.6f)\n",
                        result.fidelity, result.contrast.xi, result.contrast.p_bright,
                        result.contrast.p_dark);
            std::printf("wrote %s/populations.csv and contrast.json\n", dir.c_str());
        }
    } catch (const cgrape::config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
