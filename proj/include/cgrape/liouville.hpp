#pragma once

#include <vector>

#include "cgrape/linalg.hpp"

namespace cgrape {

// One Lindblad channel: dimensionless operator and a non-negative rate (1/ns).
struct DecayChannel {
    Mat op;
    double rate = 0.0;
};

// Generator of the column-stacked master equation,
//   S = i(H^T (x) 1 - 1 (x) H)
//     + sum_l gamma_l (L* (x) L - 1/2 L^T L* (x) 1 - 1/2 1 (x) L^dag L).
// H must be Hermitian (within hermitian_tol) and all rates non-negative.
Mat build_generator(const Mat& hamiltonian, const std::vector<DecayChannel>& channels,
                    double hermitian_tol = 1e-12);

// Hamiltonian commutator part i(H^T (x) 1 - 1 (x) H) alone (no validation).
Mat hamiltonian_superop(const Mat& hamiltonian);

// Dissipator superoperator for a single channel with unit rate.
Mat dissipator_superop(const Mat& lindblad_op);

// ||col(1)^T S||_2, zero for trace-preserving generators.
double trace_preservation_residual(const Mat& generator);

struct Propagator {
    Mat matrix;           // d^2 x d^2
    double duration_ns = 0.0;
};

// Product of pixel exponentials, pixel 0 applied first (rightmost factor):
//   T = e^{S_{N-1} dt} ... e^{S_1 dt} e^{S_0 dt}
Propagator piecewise_propagator(const std::vector<Mat>& generators, double dt_ns);

// rho(T) = T rho(0) on column-stacked density matrices.
Vec evolve(const Propagator& t, const Vec& rho_vec);

}  // namespace cgrape
