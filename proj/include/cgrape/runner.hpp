#pragma once

#include <string>

#include "cgrape/artifacts.hpp"
#include "cgrape/config.hpp"

namespace cgrape {

struct FitArtifacts {
    QubitModelFits fits;
    FitDataset data;
    std::string hash;       // full config hash (provenance)
    std::string cache_key;  // hash of the fit-relevant config sections
};

// Fit the model curves for this config (no files written).
FitArtifacts run_fit(const RunConfig& config);

// model_fit.json and fit_curves.csv under out_dir.
void write_fit_artifacts(const FitArtifacts& artifacts, const std::string& out_dir);

// Load a cached model_fit.json when its hash matches this config,
// otherwise fit and write the artifacts.
QubitModelFits ensure_fits(const RunConfig& config, const std::string& out_dir);

// Pulse, problem assembly. Bounds default to [phi_ref, validity limit].
OptimizationProblem build_problem(const RunConfig& config, const QubitModelFits& fits);

struct OptimizeResult {
    OptimizationReport report;
    RunSummary summary;
};

// optimize: fit (cached), maximize, write report.json, pulse.csv, populations.csv.
OptimizeResult run_optimize(const RunConfig& config, const std::string& out_dir);

struct SimulateResult {
    double fidelity = 0.0;
    Contrast contrast;
};

// simulate: forward-evolve a stored pulse CSV, write populations.csv and contrast.json.
SimulateResult run_simulate(const RunConfig& config, const std::string& pulse_path,
                            const std::string& out_dir);

}  // namespace cgrape
