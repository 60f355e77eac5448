#pragma once

#include <random>

#include "cgrape/linalg.hpp"
#include "cgrape/liouville.hpp"
#include "cgrape/optimizer.hpp"

namespace cgrape::testing {

inline Mat random_complex(int n, std::mt19937& rng, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, scale);
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = complexd(dist(rng), dist(rng));
    return m;
}

inline Mat random_hermitian(int n, std::mt19937& rng, double scale = 1.0) {
    const Mat m = random_complex(n, rng, scale);
    return 0.5 * (m + m.adjoint());
}

inline Mat random_unitary(int n, std::mt19937& rng) {
    return expm(complexd(0, -1) * random_hermitian(n, rng));
}

// 200-term Taylor series with Kahan-compensated entrywise summation;
// independent oracle for expm.
inline Mat taylor_expm(const Mat& a, int terms = 200) {
    const Eigen::Index n = a.rows();
    Mat sum = Mat::Zero(n, n), comp = Mat::Zero(n, n);
    Mat term = Mat::Identity(n, n);
    auto add = [&](const Mat& t) {
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const complexd y = t(i, j) - comp(i, j);
                const complexd s = sum(i, j) + y;
                comp(i, j) = (s - sum(i, j)) - y;
                sum(i, j) = s;
            }
    };
    add(term);
    for (int k = 1; k <= terms; ++k) {
        term = term * a / double(k);
        add(term);
    }
    return sum;
}

// Synthetic 3-level optimization problem: random Hermitian drift with a T1-style
// drift channel, one control Hamiltonian with a nonlinear envelope and one
// controllable rate curve. Everything smooth and analytic in the control u.
inline OptimizationProblem synthetic_problem(unsigned seed, int n_pixels = 8) {
    std::mt19937 rng(seed);

    const Mat h_drift = random_hermitian(3, rng, 0.4);
    Mat relax = Mat::Zero(3, 3);
    relax(0, 1) = 1.0;
    const Mat drift = build_generator(h_drift, {{relax, 0.05}});

    const Mat h_ctrl = random_hermitian(3, rng, 0.6);
    Mat hop = Mat::Zero(3, 3);
    hop(2, 1) = 1.0;  // |m><1| style jump
    const Mat d_ctrl = dissipator_superop(hop);
    const Mat s_ctrl = hamiltonian_superop(h_ctrl);

    std::uniform_real_distribution<double> c(0.2, 1.0);
    const double a0 = c(rng), a1 = c(rng), a2 = c(rng);

    OptimizationProblem problem;
    problem.model.drift = drift;
    problem.model.control = [=](double u) -> GeneratorPair {
        const double f = std::sin(a0 * u) + 0.3 * u;         // coherent envelope
        const double df = a0 * std::cos(a0 * u) + 0.3;
        const double g = a1 * u * u + 0.01;                  // rate curve, positive on (0, 2)
        const double dg = 2.0 * a1 * u;
        return {f * s_ctrl + g * d_ctrl, df * s_ctrl + dg * d_ctrl};
    };

    std::mt19937 rng2(seed + 17);
    const Mat u_t = random_unitary(3, rng2);
    problem.target_choi = reshuffle(kron(u_t.conjugate(), u_t));

    problem.pulse.n_pixels = n_pixels;
    problem.pulse.dt_ns = 0.7;
    problem.pulse.n_head = 1;
    problem.pulse.n_tail = 1;
    problem.pulse.sigma_ns = 0.9;
    problem.pulse.lo = 0.05;
    problem.pulse.hi = 1.8;
    problem.pulse.reference_bias = 0.1;
    problem.pulse.initial_amplitude = 0.8 + 0.1 * a2;
    return problem;
}

}  // namespace cgrape::testing
