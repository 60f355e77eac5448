#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cgrape/choi.hpp"
#include "cgrape/linalg.hpp"
#include "cgrape/liouville.hpp"
#include "cgrape/pulse.hpp"

namespace cgrape {

// Control generator and its derivative with respect to the scalar control.
struct GeneratorPair {
    Mat value;
    Mat derivative;
};

// Drift/control split S(u) = S_d + S_c(u) with a scalar control per pixel.
struct ControlModel {
    Mat drift;
    std::function<GeneratorPair(double)> control;
};

struct OptimizerSettings {
    int max_iterations = 500;
    double gradient_tolerance = 1e-7;
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;
};

struct OptimizationProblem {
    ControlModel model;
    Mat target_choi;
    PulseShape pulse;
    OptimizerSettings settings;
};

struct Objective {
    double fidelity = 0.0;
    RVec gradient;        // w.r.t. the free (unconstrained) variables
    Propagator propagator;
    RVec raw_pulse;       // full raw pixel vector
    RVec physical_pulse;  // smoothed pixel vector
};

// Phi' and its full analytic gradient. Forward and backward pixel products
// are cached once; each pixel derivative uses the augmented-exponential
// identity and is contracted against the target Choi matrix, then pulled
// back through the smoothing Jacobian and the squash transform.
Objective objective_and_gradient(const OptimizationProblem& problem, const RVec& free_vars);

struct OptimizationReport {
    std::vector<double> fidelity_history;  // initial value, then each accepted step
    double initial_fidelity = 0.0;
    double final_fidelity = 0.0;
    RVec final_free_vars;
    RVec initial_raw, final_raw;
    RVec initial_physical, final_physical;
    Propagator initial_propagator, final_propagator;
    int iterations = 0;
    int objective_evaluations = 0;
    std::string termination_reason;
};

// Quasi-Newton ascent on Phi': dense inverse-Hessian BFGS with a strong
// Wolfe line search on the transformed unconstrained variables.
OptimizationReport maximize(const OptimizationProblem& problem);

}  // namespace cgrape
