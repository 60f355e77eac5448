#include "cgrape/dvr.hpp"

#include <cmath>
#include <stdexcept>

namespace cgrape {

BoxDvrSolution box_dvr_solve(const std::function<double(double)>& potential,
                             double wall_lo, double wall_hi, int n_points,
                             double kinetic_scale) {
    if (!(wall_hi > wall_lo))
        throw std::invalid_argument("box_dvr_solve: empty window");
    if (n_points < 2)
        throw std::invalid_argument("box_dvr_solve: need at least two grid points");

    const int n = n_points;
    const int nbox = n + 1;  // grid index runs 1..n, walls at 0 and nbox
    const double length = wall_hi - wall_lo;
    const double dx = length / nbox;
    const double pref = kinetic_scale * M_PI * M_PI / (2.0 * length * length);

    RMat h(n, n);
    for (int i = 1; i <= n; ++i) {
        const double si = std::sin(M_PI * i / nbox);
        h(i - 1, i - 1) = pref * ((2.0 * nbox * nbox + 1.0) / 3.0 - 1.0 / (si * si))
                        + potential(wall_lo + i * dx);
        for (int j = 1; j < i; ++j) {
            const double sm = std::sin(M_PI * (i - j) / (2.0 * nbox));
            const double sp = std::sin(M_PI * (i + j) / (2.0 * nbox));
            const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
            const double t = pref * sign * (1.0 / (sm * sm) - 1.0 / (sp * sp));
            h(i - 1, j - 1) = t;
            h(j - 1, i - 1) = t;
        }
    }

    Eigen::SelfAdjointEigenSolver<RMat> es(h);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("box_dvr_solve: eigensolver failed");

    BoxDvrSolution sol;
    sol.dx = dx;
    sol.grid.resize(n);
    for (int i = 1; i <= n; ++i) sol.grid(i - 1) = wall_lo + i * dx;
    sol.energies = es.eigenvalues();
    sol.wavefunctions = es.eigenvectors() / std::sqrt(dx);
    return sol;
}

}  // namespace cgrape
