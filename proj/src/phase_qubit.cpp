#include "cgrape/phase_qubit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cgrape {

namespace {

constexpr double kElementaryCharge = 1.602176634e-19;  // C
constexpr double kHbar = 1.0545718176461565e-34;       // J s

// generic bisection on a bracketing interval, |b - a| driven to xtol
template <typename F>
double bisect(F&& f, double a, double b, double xtol = 1e-14) {
    double fa = f(a);
    for (int i = 0; i < 200 && (b - a) > xtol; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fa <= 0.0) == (fm <= 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double QubitParams::charging_energy() const {
    const double c_farad = junction_capacitance_pF * 1e-12;
    return 2.0 * kElementaryCharge * kElementaryCharge / (c_farad * kHbar) * 1e-9;
}

double QubitParams::josephson_energy() const {
    const double i_amp = critical_current_uA * 1e-6;
    return i_amp / (2.0 * kElementaryCharge) * 1e-9;
}

void QubitParams::validate() const {
    if (critical_current_uA <= 0 || junction_capacitance_pF <= 0 || beta <= 0 || t1_ns <= 0)
        throw std::domain_error("QubitParams: all parameters must be positive");
    if (josephson_energy() / charging_energy() < 100.0)
        throw std::domain_error("QubitParams: not in the phase regime (E_J/E_c too small)");
}

double potential(double phi, double phi_b, const QubitParams& p) {
    const double d = phi - phi_b;
    return p.josephson_energy() * (d * d / (2.0 * p.beta) - std::cos(phi));
}

double potential_derivative(double phi, double phi_b, const QubitParams& p) {
    return p.josephson_energy() * ((phi - phi_b) / p.beta + std::sin(phi));
}

double potential_second_derivative(double phi, double /*phi_b*/, const QubitParams& p) {
    return p.josephson_energy() * (1.0 / p.beta + std::cos(phi));
}

PotentialAnalysis find_well_extrema(double phi_b, const QubitParams& params) {
    // All stationary points live where |(phi - phi_b)/beta| <= 1.
    const double lo = phi_b - params.beta - 0.5;
    const double hi = phi_b + params.beta + 0.5;
    const int n_scan = 20000;
    const double step = (hi - lo) / n_scan;

    std::vector<double> minima, maxima;
    double prev_phi = lo;
    double prev_g = potential_derivative(lo, phi_b, params);
    for (int i = 1; i <= n_scan; ++i) {
        const double phi = lo + i * step;
        const double g = potential_derivative(phi, phi_b, params);
        if (prev_g == 0.0 || (prev_g < 0.0) != (g < 0.0)) {
            const double root = bisect(
                [&](double x) { return potential_derivative(x, phi_b, params); }, prev_phi, phi);
            if (potential_second_derivative(root, phi_b, params) > 0.0)
                minima.push_back(root);
            else
                maxima.push_back(root);
        }
        prev_phi = phi;
        prev_g = g;
    }
    if (minima.size() < 2)
        throw well_disappeared_error("find_well_extrema: shallow well has vanished");

    // shallow well = the minimum with the highest potential value
    double phi_min = minima.front();
    double v_best = -std::numeric_limits<double>::infinity();
    for (double m : minima) {
        const double v = potential(m, phi_b, params);
        if (v > v_best) {
            v_best = v;
            phi_min = m;
        }
    }
    // barrier = nearest maximum to its right
    double phi_max = std::numeric_limits<double>::infinity();
    for (double m : maxima)
        if (m > phi_min) phi_max = std::min(phi_max, m);
    if (!std::isfinite(phi_max))
        throw well_disappeared_error("find_well_extrema: no barrier right of the shallow well");

    PotentialAnalysis out;
    out.phi_b = phi_b;
    out.phi_min = phi_min;
    out.phi_max = phi_max;
    out.v_min = potential(phi_min, phi_b, params);
    out.v_max = potential(phi_max, phi_b, params);
    const double ec = params.charging_energy();
    const double ej = params.josephson_energy();
    const double curvature = 1.0 / params.beta + std::cos(phi_min);
    out.m_eff = 1.0 / (2.0 * ec);
    out.omega_harmonic = std::sqrt(2.0 * ec * ej * curvature);
    const double m_omega2 = ej * curvature;  // V''(phi_min)
    out.phi_tilde = std::sqrt(6.0 * (out.v_max - out.v_min) / m_omega2);
    out.alpha = 6.0 * (out.v_max - out.v_min) / out.omega_harmonic;
    return out;
}

double alpha_of_bias(double phi_b, const QubitParams& params) {
    return find_well_extrema(phi_b, params).alpha;
}

namespace {

// hard-wall window around the shallow well
struct Window {
    double lo, hi;
    PotentialAnalysis analysis;
};

Window well_window(double phi_b, const QubitParams& params, const DvrConfig& cfg) {
    const PotentialAnalysis pa = find_well_extrema(phi_b, params);
    const double wall_v = pa.v_max + cfg.wall_factor * (pa.v_max - pa.v_min);
    double probe = pa.phi_min;
    while (potential(probe, phi_b, params) < wall_v) probe -= 0.05;
    const double left = bisect(
        [&](double x) { return potential(x, phi_b, params) - wall_v; }, probe, pa.phi_min);
    const double right = pa.phi_max + cfg.margin * (pa.phi_max - pa.phi_min);
    return {left, right, pa};
}

std::vector<int> classify_well_states(const BoxDvrSolution& sol, double phi_max, double v_max) {
    std::vector<int> well;
    for (Eigen::Index k = 0; k < sol.energies.size(); ++k) {
        if (sol.energies(k) >= v_max) break;
        double mass = 0.0;
        for (Eigen::Index i = 0; i < sol.grid.size(); ++i)
            if (sol.grid(i) <= phi_max)
                mass += sol.wavefunctions(i, k) * sol.wavefunctions(i, k) * sol.dx;
        if (mass >= 0.5) well.push_back(static_cast<int>(k));
    }
    return well;
}

DVRSolution solve_on_window(double phi_b, const QubitParams& params, const Window& win,
                            int n_points) {
    BoxDvrSolution sol = box_dvr_solve(
        [&](double phi) { return potential(phi, phi_b, params); }, win.lo, win.hi, n_points,
        params.charging_energy());
    DVRSolution out;
    out.grid = std::move(sol.grid);
    out.dx = sol.dx;
    out.energies = std::move(sol.energies);
    out.wavefunctions = std::move(sol.wavefunctions);
    out.well_indices = classify_well_states(
        {out.grid, out.dx, out.energies, out.wavefunctions}, win.analysis.phi_max,
        win.analysis.v_max);
    out.n_well_states = static_cast<int>(out.well_indices.size());
    out.v_max = win.analysis.v_max;
    out.window_lo = win.lo;
    out.window_hi = win.hi;
    return out;
}

}  // namespace

DVRSolution dvr_solve(double phi_b, const QubitParams& params, const DvrConfig& cfg) {
    const Window win = well_window(phi_b, params, cfg);
    DVRSolution sol = solve_on_window(phi_b, params, win, cfg.n_points);
    if (cfg.refinement_tol > 0.0) {
        const DVRSolution fine = solve_on_window(phi_b, params, win, 2 * cfg.n_points);
        const int ncheck = std::min(sol.n_well_states, fine.n_well_states);
        for (int k = 0; k < ncheck; ++k) {
            const double de = std::abs(sol.energies(sol.well_indices[k]) -
                                       fine.energies(fine.well_indices[k]));
            if (de > cfg.refinement_tol)
                throw resolution_error("dvr_solve: grid too coarse, well energy not converged");
        }
    }
    return sol;
}

namespace {

// ground well state on an explicit window, sign-fixed positive at phi_min
RVec ground_well_state(double phi_b, const QubitParams& params, double lo, double hi,
                       int n_points, const PotentialAnalysis& pa) {
    const BoxDvrSolution sol = box_dvr_solve(
        [&](double phi) { return potential(phi, phi_b, params); }, lo, hi, n_points,
        params.charging_energy());
    for (Eigen::Index k = 0; k < sol.energies.size(); ++k) {
        if (sol.energies(k) >= pa.v_max) break;
        double mass = 0.0;
        for (Eigen::Index i = 0; i < sol.grid.size(); ++i)
            if (sol.grid(i) <= pa.phi_max)
                mass += sol.wavefunctions(i, k) * sol.wavefunctions(i, k) * sol.dx;
        if (mass >= 0.5) {
            RVec psi = sol.wavefunctions.col(k);
            Eigen::Index i_min = 0;
            (sol.grid.array() - pa.phi_min).abs().minCoeff(&i_min);
            if (psi(i_min) < 0.0) psi = -psi;
            return psi * std::sqrt(sol.dx);  // plain l2 dot then gives the L2 overlap
        }
    }
    throw well_disappeared_error("eta_overlap: no ground well state");
}

}  // namespace

double eta_overlap(double phi_b, double phi_ref, const QubitParams& params,
                   const DvrConfig& cfg) {
    const Window wa = well_window(phi_b, params, cfg);
    const Window wb = well_window(phi_ref, params, cfg);
    const double lo = std::min(wa.lo, wb.lo);
    const double hi = std::max(wa.hi, wb.hi);
    const RVec psi_a = ground_well_state(phi_b, params, lo, hi, cfg.n_points, wa.analysis);
    const RVec psi_b = ground_well_state(phi_ref, params, lo, hi, cfg.n_points, wb.analysis);
    return psi_a.dot(psi_b);
}

double FiveParamFit::value(double x) const { return a * std::pow(b + c * x, d) + e; }

double FiveParamFit::derivative(double x) const {
    return a * c * d * std::pow(b + c * x, d - 1.0);
}

double QubitModelFits::eta(double phi_b) const {
    return ((eta_poly[3] * phi_b + eta_poly[2]) * phi_b + eta_poly[1]) * phi_b + eta_poly[0];
}

double QubitModelFits::eta_derivative(double phi_b) const {
    return (3.0 * eta_poly[3] * phi_b + 2.0 * eta_poly[2]) * phi_b + eta_poly[1];
}

double QubitModelFits::alpha(double phi_b) const {
    return (alpha_poly[2] * phi_b + alpha_poly[1]) * phi_b + alpha_poly[0];
}

double QubitModelFits::alpha_derivative(double phi_b) const {
    return 2.0 * alpha_poly[2] * phi_b + alpha_poly[1];
}

double QubitModelFits::omega(double phi_b) const { return omega_fit.value(phi_b); }

double QubitModelFits::omega_derivative(double phi_b) const {
    return omega_fit.derivative(phi_b);
}

RVec weighted_polyfit(const RVec& x, const RVec& y, int degree, const RVec& weights) {
    // fit on centered and scaled abscissae, then expand back; keeps the
    // Vandermonde well conditioned on narrow grids
    const double center = x.mean();
    const double scale = std::max((x.array() - center).abs().maxCoeff(), 1e-300);

    RMat a(x.size(), degree + 1);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double t = (x(i) - center) / scale;
        double p = 1.0;
        for (int j = 0; j <= degree; ++j) {
            a(i, j) = p * weights(i);
            p *= t;
        }
    }
    const RVec ct = a.colPivHouseholderQr().solve((y.array() * weights.array()).matrix());

    // p(x) = sum_j ct_j ((x - center)/scale)^j -> ascending powers of x
    RVec coeffs = RVec::Zero(degree + 1);
    for (int j = 0; j <= degree; ++j) {
        double binom = 1.0;
        for (int k = 0; k <= j; ++k) {
            coeffs(k) += ct(j) / std::pow(scale, j) * binom * std::pow(-center, j - k);
            binom = binom * (j - k) / (k + 1.0);
        }
    }
    return coeffs;
}

namespace {

double polyval(const RVec& c, double x) {
    double v = 0.0;
    for (Eigen::Index j = c.size() - 1; j >= 0; --j) v = v * x + c(j);
    return v;
}

// omega = A (phi0 - x)^d + e: coarse (phi0, d) scan with linear (A, e)
// solves, then a damped Gauss-Newton polish of all four parameters.
FiveParamFit fit_five_param(const RVec& x, const RVec& y) {
    const double x_hi = x.maxCoeff();
    const Eigen::Index n = x.size();

    double best_resid = std::numeric_limits<double>::infinity();
    double best[4] = {0, 0, 0, 0};  // A, phi0, d, e
    for (int ip = 0; ip < 120; ++ip) {
        const double phi0 = x_hi + 0.003 + (1.0 - 0.003) * ip / 119.0;
        for (int id = 0; id < 160; ++id) {
            const double d = 0.05 + (3.0 - 0.05) * id / 159.0;
            double suu = 0, su = 0, suy = 0, sy = 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double u = std::pow(phi0 - x(i), d);
                suu += u * u;
                su += u;
                suy += u * y(i);
                sy += y(i);
            }
            const double det = suu * n - su * su;
            if (std::abs(det) < 1e-300) continue;
            const double aa = (suy * n - su * sy) / det;
            const double ee = (suu * sy - su * suy) / det;
            double resid = 0.0;
            for (Eigen::Index i = 0; i < n; ++i)
                resid = std::max(resid, std::abs(aa * std::pow(phi0 - x(i), d) + ee - y(i)));
            if (resid < best_resid) {
                best_resid = resid;
                best[0] = aa;
                best[1] = phi0;
                best[2] = d;
                best[3] = ee;
            }
        }
    }

    auto sse = [&](const double p[4]) {
        if (p[1] <= x_hi + 1e-9 || p[2] <= 0.0) return std::numeric_limits<double>::infinity();
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r = p[0] * std::pow(p[1] - x(i), p[2]) + p[3] - y(i);
            s += r * r;
        }
        return s;
    };

    double p[4] = {best[0], best[1], best[2], best[3]};
    double cur = sse(p);
    for (int it = 0; it < 200; ++it) {
        RMat jac(n, 4);
        RVec r(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double u = p[1] - x(i);
            const double ud = std::pow(u, p[2]);
            jac(i, 0) = ud;
            jac(i, 1) = p[0] * p[2] * std::pow(u, p[2] - 1.0);
            jac(i, 2) = p[0] * ud * std::log(u);
            jac(i, 3) = 1.0;
            r(i) = p[0] * ud + p[3] - y(i);
        }
        const RVec dp = jac.colPivHouseholderQr().solve(-r);
        double lambda = 1.0;
        bool took = false;
        while (lambda > 1e-10) {
            double trial[4] = {p[0] + lambda * dp(0), p[1] + lambda * dp(1),
                               p[2] + lambda * dp(2), p[3] + lambda * dp(3)};
            const double v = sse(trial);
            if (v < cur) {
                std::copy(trial, trial + 4, p);
                cur = v;
                took = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!took || lambda * dp.norm() < 1e-13 * (1.0 + std::abs(p[1])))
            break;
    }

    // reported in the a(b + c x)^d + e form with c = -1
    return {p[0], p[1], -1.0, p[2], p[3]};
}

double gamma1_on_fits(double phi_b, const std::array<double, 3>& alpha_poly,
                      const FiveParamFit& omega_fit) {
    const double al = (alpha_poly[2] * phi_b + alpha_poly[1]) * phi_b + alpha_poly[0];
    const double om = omega_fit.value(phi_b);
    return 432.0 * om * std::sqrt(al * al * al / M_PI) * std::exp(-1.2 * al);
}

}  // namespace

double validity_limit(const std::array<double, 3>& alpha_poly, double fit_lo, double fit_hi) {
    const double c2 = alpha_poly[2], c1 = alpha_poly[1], c0 = alpha_poly[0] - 9.0;
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0)
        throw std::runtime_error("validity_limit: fitted alpha never reaches 9");
    const double sq = std::sqrt(disc);
    const double hi_guard = fit_hi + 0.002 * kTwoPi;
    for (double root : {(-c1 - sq) / (2.0 * c2), (-c1 + sq) / (2.0 * c2)})
        if (root > fit_lo && root < hi_guard) return root;
    throw std::runtime_error("validity_limit: no alpha = 9 root in the fit range");
}

ModelFitResult fit_model_curves(const QubitParams& params, const FitSettings& settings) {
    params.validate();
    if (settings.n_bias < 4 || !(settings.bias_lo < settings.bias_hi))
        throw std::invalid_argument("fit_model_curves: bad bias grid");

    const Eigen::Index n = settings.n_bias;
    ModelFitResult out;
    FitDataset& data = out.data;
    data.biases.resize(n);
    data.alpha_data.resize(n);
    data.omega_data.resize(n);
    data.omega_harmonic.resize(n);

    for (Eigen::Index i = 0; i < n; ++i) {
        const double pb = settings.bias_lo +
                          (settings.bias_hi - settings.bias_lo) * i / double(n - 1);
        data.biases(i) = pb;
        const PotentialAnalysis pa = find_well_extrema(pb, params);
        data.alpha_data(i) = pa.alpha;
        data.omega_harmonic(i) = pa.omega_harmonic;
        const DVRSolution sol = dvr_solve(pb, params, settings.dvr);
        if (sol.n_well_states < 2)
            throw std::runtime_error("fit_model_curves: fewer than two well states on the grid");
        data.omega_data(i) = sol.energies(sol.well_indices[1]) - sol.energies(sol.well_indices[0]);
    }

    QubitModelFits& fits = out.fits;
    fits.fit_lo = settings.bias_lo;
    fits.fit_hi = settings.bias_hi;

    // alpha: quadratic weighted by 1/y, keeps the relative residual small
    const RVec walpha = data.alpha_data.cwiseInverse();
    const RVec ca = weighted_polyfit(data.biases, data.alpha_data, 2, walpha);
    for (int j = 0; j < 3; ++j) fits.alpha_poly[j] = ca(j);
    data.alpha_fitted.resize(n);
    double alpha_rel = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        data.alpha_fitted(i) = polyval(ca, data.biases(i));
        alpha_rel = std::max(alpha_rel, std::abs(data.alpha_fitted(i) - data.alpha_data(i)) /
                                            std::abs(data.alpha_data(i)));
    }
    if (alpha_rel > settings.thresholds.alpha)
        throw fit_quality_error("fit_model_curves: alpha fit residual above threshold");

    // omega: five-parameter form
    fits.omega_fit = fit_five_param(data.biases, data.omega_data);
    data.omega_fitted.resize(n);
    double omega_rel = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        data.omega_fitted(i) = fits.omega_fit.value(data.biases(i));
        omega_rel = std::max(omega_rel, std::abs(data.omega_fitted(i) - data.omega_data(i)) /
                                            std::abs(data.omega_data(i)));
    }
    if (omega_rel > settings.thresholds.omega)
        throw fit_quality_error("fit_model_curves: omega fit residual above threshold");

    // reference bias: largest bias with gamma1 below threshold, on the fitted
    // curves (may sit slightly below the fit grid; mild extrapolation)
    const double search_lo = settings.bias_lo - 0.01 * kTwoPi;
    auto g1 = [&](double pb) {
        return gamma1_on_fits(pb, fits.alpha_poly, fits.omega_fit) -
               settings.gamma1_ref_threshold;
    };
    if (g1(search_lo) >= 0.0)
        throw std::runtime_error("fit_model_curves: gamma1 threshold unreachable below grid");
    if (g1(settings.bias_hi) <= 0.0)
        throw std::runtime_error("fit_model_curves: gamma1 threshold not crossed on grid");
    fits.phi_ref = bisect(g1, search_lo, settings.bias_hi);
    fits.omega_ref = fits.omega_fit.value(fits.phi_ref);

    fits.validity_limit = validity_limit(fits.alpha_poly, settings.bias_lo, settings.bias_hi);

    // eta against the chosen reference
    data.eta_data.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
        data.eta_data(i) = eta_overlap(data.biases(i), fits.phi_ref, params, settings.dvr);
    const RVec ce = weighted_polyfit(data.biases, data.eta_data, 3, RVec::Ones(n));
    for (int j = 0; j < 4; ++j) fits.eta_poly[j] = ce(j);
    data.eta_fitted.resize(n);
    double eta_abs = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        data.eta_fitted(i) = polyval(ce, data.biases(i));
        eta_abs = std::max(eta_abs, std::abs(data.eta_fitted(i) - data.eta_data(i)));
    }
    if (eta_abs > settings.thresholds.eta)
        throw fit_quality_error("fit_model_curves: eta fit residual above threshold");

    return out;
}

WkbRates wkb_rates(double phi_b, const QubitModelFits& fits) {
    const double al = fits.alpha(phi_b);
    if (al <= 0.0)
        throw std::domain_error("wkb_rates: alpha must be positive");
    const double dal = fits.alpha_derivative(phi_b);
    const double om = fits.omega(phi_b);
    const double dom = fits.omega_derivative(phi_b);

    WkbRates r;
    r.gamma0 = 6.0 * om * std::sqrt(al / M_PI) * std::exp(-1.2 * al);
    r.dgamma0 = r.gamma0 * (dom / om + (0.5 / al - 1.2) * dal);
    r.gamma1 = 72.0 * al * r.gamma0;
    r.dgamma1 = 72.0 * (dal * r.gamma0 + al * r.dgamma0);
    return r;
}

Mat drift_generator(const QubitParams& params) {
    if (params.t1_ns <= 0.0)
        throw std::domain_error("drift_generator: T1 must be positive");
    Mat relax = Mat::Zero(3, 3);
    relax(0, 1) = 1.0;  // |0><1|
    return build_generator(Mat::Zero(3, 3), {{relax, 1.0 / params.t1_ns}});
}

GeneratorPair control_generator(double phi_b, const QubitModelFits& fits) {
    if (phi_b > fits.validity_limit + 1e-9)
        throw std::domain_error("control_generator: bias above the three-level validity limit");

    const double eta_raw = fits.eta(phi_b);
    const double eta = std::clamp(eta_raw, -1.0, 1.0);
    const bool clamped = eta != eta_raw;
    const double s = std::sqrt(std::max(1.0 - eta * eta, 0.0));

    // instantaneous well states chi0 = P|0>, chi1 = P|1>
    Eigen::Vector3d chi0(eta, s, 0.0), chi1(s, -eta, 0.0);

    Mat h = Mat::Zero(3, 3);
    h.topLeftCorner(2, 2) =
        (fits.omega_ref * chi1.head<2>() * chi1.head<2>().transpose()).cast<complexd>();

    Mat l0 = Mat::Zero(3, 3), l1 = Mat::Zero(3, 3);
    l0.row(2) = chi0.transpose().cast<complexd>();
    l1.row(2) = chi1.transpose().cast<complexd>();

    const WkbRates rates = wkb_rates(phi_b, fits);
    const Mat d0 = dissipator_superop(l0);
    const Mat d1 = dissipator_superop(l1);

    GeneratorPair out;
    out.value = hamiltonian_superop(h) + rates.gamma0 * d0 + rates.gamma1 * d1;

    // chain rule: d/dphi_b through eta and the rates
    Eigen::Vector3d dchi0 = Eigen::Vector3d::Zero(), dchi1 = Eigen::Vector3d::Zero();
    if (!clamped && s > 1e-12) {
        const double deta = fits.eta_derivative(phi_b);
        const double ds = -eta / s;
        dchi0 << deta, ds * deta, 0.0;
        dchi1 << ds * deta, -deta, 0.0;
    }
    Mat dh = Mat::Zero(3, 3);
    dh.topLeftCorner(2, 2) = (fits.omega_ref * (dchi1.head<2>() * chi1.head<2>().transpose() +
                                                chi1.head<2>() * dchi1.head<2>().transpose()))
                                 .cast<complexd>();
    Mat dl0 = Mat::Zero(3, 3), dl1 = Mat::Zero(3, 3);
    dl0.row(2) = dchi0.transpose().cast<complexd>();
    dl1.row(2) = dchi1.transpose().cast<complexd>();

    const Mat ident = Mat::Identity(3, 3);
    auto dissipator_diff = [&](const Mat& l, const Mat& dl) -> Mat {
        return kron(dl.conjugate(), l) + kron(l.conjugate(), dl)
             - 0.5 * kron(dl.transpose() * l.conjugate() + l.transpose() * dl.conjugate(), ident)
             - 0.5 * kron(ident, dl.adjoint() * l + l.adjoint() * dl);
    };
    out.derivative = hamiltonian_superop(dh)
                   + rates.dgamma0 * d0 + rates.gamma0 * dissipator_diff(l0, dl0)
                   + rates.dgamma1 * d1 + rates.gamma1 * dissipator_diff(l1, dl1);
    return out;
}

Mat target_choi() {
    Mat c = Mat::Zero(9, 9);
    c(5, 5) = 1.0;  // |1><1| (x) |m><m|
    for (int i : {0, 8})
        for (int j : {0, 8}) c(i, j) = 1.0;  // |i><j| (x) |i><j|, i,j in {0, m}
    return c;
}

Contrast contrast(const Propagator& t) {
    if (t.matrix.rows() != 9 || t.matrix.cols() != 9)
        throw std::invalid_argument("contrast: expected a 3-level propagator");
    Mat rho1 = Mat::Zero(3, 3);
    rho1(1, 1) = 1.0;
    Mat rho0 = Mat::Zero(3, 3);
    rho0(0, 0) = 1.0;
    Contrast out;
    out.p_bright = unstack(evolve(t, column_stack(rho1)))(2, 2).real();
    out.p_dark = unstack(evolve(t, column_stack(rho0)))(2, 2).real();
    out.xi = out.p_bright * (1.0 - out.p_dark);
    return out;
}

}  // namespace cgrape
