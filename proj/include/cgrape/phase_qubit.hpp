#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "cgrape/dvr.hpp"
#include "cgrape/linalg.hpp"
#include "cgrape/liouville.hpp"
#include "cgrape/optimizer.hpp"

namespace cgrape {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Flux-biased phase qubit, Table-style parameters. Energies are stored as
// angular frequencies (rad/ns); hbar is absorbed throughout.
struct QubitParams {
    double critical_current_uA = 2.0;
    double junction_capacitance_pF = 1.0;
    double beta = 4.375;
    double t1_ns = 500.0;

    double charging_energy() const;   // E_c = 2e^2/C, rad/ns
    double josephson_energy() const;  // E_J = I_0 hbar/2e, rad/ns
    void validate() const;
};

// V(phi) = E_J((phi - phi_b)^2 / 2 beta - cos phi) and derivatives.
double potential(double phi, double phi_b, const QubitParams& params);
double potential_derivative(double phi, double phi_b, const QubitParams& params);
double potential_second_derivative(double phi, double phi_b, const QubitParams& params);

// Raised when the shallow well no longer exists at the requested bias.
struct well_disappeared_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Shallow-well minimum, adjacent barrier maximum, and the cubic-potential
// parameters m, omega, phi_tilde derived from them.
struct PotentialAnalysis {
    double phi_b = 0.0;
    double phi_min = 0.0, phi_max = 0.0;
    double v_min = 0.0, v_max = 0.0;
    double m_eff = 0.0;           // hbar^2/2E_c, units of 1/energy here
    double omega_harmonic = 0.0;  // sqrt(2 E_c E_J (1/beta + cos phi_min))
    double phi_tilde = 0.0;       // m omega^2 phi_tilde^2 = 6(V_max - V_min)
    double alpha = 0.0;           // 6(V_max - V_min) / (hbar omega)
};

PotentialAnalysis find_well_extrema(double phi_b, const QubitParams& params);

// alpha(phi_b) from the potential analysis.
double alpha_of_bias(double phi_b, const QubitParams& params);

struct DvrConfig {
    int n_points = 500;
    double margin = 0.02;            // right wall at phi_max + margin*(phi_max - phi_min)
    double wall_factor = 2.0;        // left wall where V = V_max + wall_factor*(V_max - V_min)
    double refinement_tol = 0.0;     // >0: re-solve at 2n and require |dE| below this
};

struct DVRSolution {
    RVec grid;
    double dx = 0.0;
    RVec energies;
    RMat wavefunctions;              // unit norm w.r.t. grid measure
    std::vector<int> well_indices;   // states below V_max with >=0.5 mass in the well
    int n_well_states = 0;
    double v_max = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
};

struct resolution_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shallow-well spectrum at one bias on a per-bias hard-wall window.
DVRSolution dvr_solve(double phi_b, const QubitParams& params, const DvrConfig& cfg);

// Overlap of the ground well state at phi_b with the one at phi_ref,
// both solved on the union of the two per-bias windows. Sign fixed so the
// self-overlap is +1 (wavefunctions positive at the well minimum).
double eta_overlap(double phi_b, double phi_ref, const QubitParams& params,
                   const DvrConfig& cfg);

struct FiveParamFit {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0, e = 0.0;
    double value(double x) const;
    double derivative(double x) const;
};

struct FitThresholds {
    double eta = 1e-3;    // max abs residual
    double alpha = 1e-3;  // max relative residual
    double omega = 1e-2;  // max relative residual
};

struct fit_quality_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fitted analytic model curves with derivatives.
struct QubitModelFits {
    std::array<double, 4> eta_poly{};    // ascending powers
    std::array<double, 3> alpha_poly{};  // ascending powers
    FiveParamFit omega_fit;
    double fit_lo = 0.0, fit_hi = 0.0;   // bias range of the data (rad)
    double phi_ref = 0.0;
    double omega_ref = 0.0;
    double validity_limit = 0.0;         // bias where fitted alpha = 9

    double eta(double phi_b) const;
    double eta_derivative(double phi_b) const;
    double alpha(double phi_b) const;
    double alpha_derivative(double phi_b) const;
    double omega(double phi_b) const;
    double omega_derivative(double phi_b) const;
};

// Raw curve data behind the fits (the Fig. 2-4 content).
struct FitDataset {
    RVec biases;
    RVec eta_data, eta_fitted;
    RVec alpha_data, alpha_fitted;
    RVec omega_data, omega_fitted, omega_harmonic;
};

struct FitSettings {
    double bias_lo = 0.925 * kTwoPi;
    double bias_hi = 0.945 * kTwoPi;
    int n_bias = 40;
    DvrConfig dvr;
    double gamma1_ref_threshold = 1e-6;  // 1/ns, picks phi_ref
    FitThresholds thresholds;
};

struct ModelFitResult {
    QubitModelFits fits;
    FitDataset data;
};

ModelFitResult fit_model_curves(const QubitParams& params, const FitSettings& settings);

// Weighted polynomial least squares; coefficients in ascending powers.
RVec weighted_polyfit(const RVec& x, const RVec& y, int degree, const RVec& weights);

// WKB escape rates of the two well states and their bias derivatives, on the
// fitted curves: gamma0 = 6 omega sqrt(alpha/pi) e^{-6 alpha/5}, gamma1 = 72 alpha gamma0.
struct WkbRates {
    double gamma0 = 0.0, gamma1 = 0.0;
    double dgamma0 = 0.0, dgamma1 = 0.0;  // d/dphi_b
};
WkbRates wkb_rates(double phi_b, const QubitModelFits& fits);

// Drift generator: the T1 relaxation channel alone.
Mat drift_generator(const QubitParams& params);

// Control generator at bias phi_b and its bias derivative. Coherent part
// i((P H_ref P)^T (x) 1 - 1 (x) P H_ref P); tunneling drains the
// instantaneous well states chi_j = P|j> at the WKB rates.
GeneratorPair control_generator(double phi_b, const QubitModelFits& fits);

// Measurement target C_t = |1><1| (x) |m><m| + sum_{i,j in {0,m}} |i><j| (x) |i><j|
// in the basis order (|0>, |1>, |m>).
Mat target_choi();

struct Contrast {
    double xi = 0.0;
    double p_bright = 0.0;
    double p_dark = 0.0;
};
Contrast contrast(const Propagator& t);

// Bias where the fitted quadratic alpha(phi_b) crosses 9; searched on the
// fit range (with a small guard extension above it).
double validity_limit(const std::array<double, 3>& alpha_poly, double fit_lo, double fit_hi);

}  // namespace cgrape
