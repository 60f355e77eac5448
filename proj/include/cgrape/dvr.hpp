#pragma once

#include <functional>

#include "cgrape/linalg.hpp"

namespace cgrape {

// Solution of a 1-D Schrodinger problem H = kinetic_scale * N^2 + V(phi)
// (N = -i d/dphi) on a hard-wall box, discretized with the uniform-grid
// sinc-DVR second-derivative formula (particle-in-a-box variant).
struct BoxDvrSolution {
    RVec grid;           // interior points, walls excluded
    double dx = 0.0;
    RVec energies;       // ascending
    RMat wavefunctions;  // columns, unit norm w.r.t. the grid measure dx
};

// kinetic_scale plays hbar^2/(2m); for the phase qubit it is E_c.
BoxDvrSolution box_dvr_solve(const std::function<double(double)>& potential,
                             double wall_lo, double wall_hi, int n_points,
                             double kinetic_scale);

}  // namespace cgrape
