#include "cgrape/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cgrape {

Objective objective_and_gradient(const OptimizationProblem& problem, const RVec& free_vars) {
    const PulseShape& shape = problem.pulse;
    shape.validate();
    const int n = shape.n_pixels;

    Objective out;
    out.raw_pulse = assemble_raw(shape, free_vars);
    const RMat jac = smoothing_jacobian(n, shape.sigma_ns, shape.dt_ns);
    out.physical_pulse = jac * out.raw_pulse;

    // per-pixel propagators and their control derivatives
    std::vector<Mat> pixel(n), dpixel(n);
    for (int j = 0; j < n; ++j) {
        const GeneratorPair gen = problem.model.control(out.physical_pulse(j));
        const Mat a = (problem.model.drift + gen.value) * shape.dt_ns;
        const Mat b = gen.derivative * shape.dt_ns;
        auto [value, derivative] = expm_directional_derivative(a, b);
        pixel[j] = std::move(value);
        dpixel[j] = std::move(derivative);
    }

    const Eigen::Index d2 = pixel[0].rows();
    std::vector<Mat> forward(n);  // forward[j] = T_{j-1} ... T_0
    forward[0] = Mat::Identity(d2, d2);
    for (int j = 1; j < n; ++j) forward[j] = pixel[j - 1] * forward[j - 1];

    std::vector<Mat> backward(n);  // backward[j] = T_{N-1} ... T_{j+1}
    backward[n - 1] = Mat::Identity(d2, d2);
    Mat acc = pixel[n - 1];
    for (int j = n - 2; j >= 0; --j) {
        backward[j] = acc;
        acc = acc * pixel[j];
    }

    out.propagator = {acc, shape.duration_ns()};
    out.fidelity = frobenius_fidelity(problem.target_choi, reshuffle(acc));

    RVec grad_phys(n);
    for (int j = 0; j < n; ++j) {
        const Mat dprop = backward[j] * dpixel[j] * forward[j];
        grad_phys(j) = fidelity_gradient_term(problem.target_choi, reshuffle(dprop));
    }

    const RVec grad_raw = jac.transpose() * grad_phys;
    out.gradient.resize(shape.n_free());
    for (int i = 0; i < shape.n_free(); ++i)
        out.gradient(i) = grad_raw(shape.n_head + i) * squash_slope(free_vars(i), shape.lo, shape.hi);

    if (!std::isfinite(out.fidelity) || !out.gradient.allFinite())
        throw std::runtime_error("objective_and_gradient: non-finite objective");
    return out;
}

namespace {

struct LinePoint {
    double alpha = 0.0;
    double value = 0.0;  // -Phi'
    double slope = 0.0;  // directional derivative of -Phi'
    Objective obj;
};

class LineSearch {
  public:
    LineSearch(const OptimizationProblem& problem, const RVec& x, const RVec& dir,
               double f0, const RVec& g0, int* eval_counter)
        : problem_(problem), x_(x), dir_(dir), evals_(eval_counter) {
        phi0_ = f0;
        dphi0_ = g0.dot(dir_);
    }

    LinePoint at(double alpha) {
        LinePoint p;
        p.alpha = alpha;
        p.obj = objective_and_gradient(problem_, x_ + alpha * dir_);
        ++*evals_;
        p.value = -p.obj.fidelity;
        p.slope = -p.obj.gradient.dot(dir_);
        return p;
    }

    // Strong Wolfe search (Nocedal & Wright alg. 3.5/3.6). Returns false when
    // no acceptable step exists within the evaluation budget.
    bool run(double c1, double c2, LinePoint& result) {
        double alpha_prev = 0.0, value_prev = phi0_, slope_prev = dphi0_;
        double alpha = 1.0;
        const double alpha_max = 1e4;
        for (int i = 0; i < 30; ++i) {
            LinePoint p = at(alpha);
            if (p.value > phi0_ + c1 * alpha * dphi0_ || (i > 0 && p.value >= value_prev))
                return zoom(alpha_prev, value_prev, slope_prev, p.alpha, p.value, c1, c2, result);
            if (std::abs(p.slope) <= -c2 * dphi0_) {
                result = std::move(p);
                return true;
            }
            if (p.slope >= 0.0)
                return zoom(p.alpha, p.value, p.slope, alpha_prev, value_prev, c1, c2, result);
            alpha_prev = p.alpha;
            value_prev = p.value;
            slope_prev = p.slope;
            alpha = std::min(2.0 * alpha, alpha_max);
            if (alpha_prev >= alpha_max) break;
        }
        return false;
    }

  private:
    bool zoom(double lo, double value_lo, double slope_lo, double hi, double value_hi,
              double c1, double c2, LinePoint& result) {
        for (int i = 0; i < 40; ++i) {
            // quadratic interpolation from (lo, value, slope) and (hi, value),
            // safeguarded to the interior of the bracket
            double alpha;
            const double denom = value_hi - value_lo - slope_lo * (hi - lo);
            if (std::abs(denom) > 1e-300) {
                alpha = lo - 0.5 * slope_lo * (hi - lo) * (hi - lo) / denom;
            } else {
                alpha = 0.5 * (lo + hi);
            }
            const double a = std::min(lo, hi), b = std::max(lo, hi);
            const double width = b - a;
            if (!(alpha > a + 0.05 * width && alpha < b - 0.05 * width))
                alpha = 0.5 * (lo + hi);
            LinePoint p = at(alpha);
            if (p.value > phi0_ + c1 * alpha * dphi0_ || p.value >= value_lo) {
                hi = p.alpha;
                value_hi = p.value;
            } else {
                if (std::abs(p.slope) <= -c2 * dphi0_) {
                    result = std::move(p);
                    return true;
                }
                if (p.slope * (hi - lo) >= 0.0) {
                    hi = lo;
                    value_hi = value_lo;
                }
                lo = p.alpha;
                value_lo = p.value;
                slope_lo = p.slope;
            }
            if (std::abs(hi - lo) < 1e-14 * std::max(1.0, std::abs(lo))) break;
        }
        return false;
    }

    const OptimizationProblem& problem_;
    const RVec& x_;
    const RVec& dir_;
    int* evals_;
    double phi0_ = 0.0, dphi0_ = 0.0;
};

}  // namespace

OptimizationReport maximize(const OptimizationProblem& problem) {
    const OptimizerSettings& set = problem.settings;
    OptimizationReport report;

    RVec x = initial_free_vars(problem.pulse);
    Objective cur = objective_and_gradient(problem, x);
    report.objective_evaluations = 1;
    report.initial_fidelity = cur.fidelity;
    report.initial_raw = cur.raw_pulse;
    report.initial_physical = cur.physical_pulse;
    report.initial_propagator = cur.propagator;
    report.fidelity_history.push_back(cur.fidelity);

    const int n = problem.pulse.n_free();
    RMat hinv = RMat::Identity(n, n);

    // minimize f = -Phi'
    double f = -cur.fidelity;
    RVec g = -cur.gradient;

    report.termination_reason = "max_iterations";
    if (g.norm() < set.gradient_tolerance) {
        report.termination_reason = "gradient_tolerance";
        report.iterations = 0;
    } else {
        for (int iter = 1; iter <= set.max_iterations; ++iter) {
            RVec dir = -(hinv * g);
            if (g.dot(dir) >= 0.0) {  // stale curvature, reset to steepest ascent
                hinv.setIdentity();
                dir = -g;
            }
            LineSearch search(problem, x, dir, f, g, &report.objective_evaluations);
            LinePoint accepted;
            if (!search.run(set.wolfe_c1, set.wolfe_c2, accepted)) {
                report.termination_reason = "line_search_failure";
                report.iterations = iter - 1;
                break;
            }

            const RVec step = accepted.alpha * dir;
            const RVec g_new = -accepted.obj.gradient;
            const RVec y = g_new - g;
            const double sy = step.dot(y);
            if (sy > 1e-12 * step.norm() * y.norm()) {
                const double rho = 1.0 / sy;
                const RMat lhs = RMat::Identity(n, n) - rho * step * y.transpose();
                hinv = lhs * hinv * lhs.transpose() + rho * step * step.transpose();
            }

            x += step;
            f = accepted.value;
            g = g_new;
            cur = std::move(accepted.obj);
            report.fidelity_history.push_back(cur.fidelity);
            report.iterations = iter;

            if (g.norm() < set.gradient_tolerance) {
                report.termination_reason = "gradient_tolerance";
                break;
            }
        }
    }

    report.final_fidelity = cur.fidelity;
    report.final_free_vars = x;
    report.final_raw = cur.raw_pulse;
    report.final_physical = cur.physical_pulse;
    report.final_propagator = cur.propagator;
    return report;
}

}  // namespace cgrape
