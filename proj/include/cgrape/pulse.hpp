#pragma once

#include "cgrape/linalg.hpp"

namespace cgrape {

// Normalized Gaussian kernel sampled on the pixel grid, truncated at
// 4 sigma and renormalized. sigma_ns == 0 gives the identity kernel.
RVec gaussian_kernel(double sigma_ns, double dt_ns);

// Discrete convolution with the Gaussian kernel; boundaries handled by
// edge-value extension. sigma == 0 is the identity.
RVec smooth(const RVec& raw, double sigma_ns, double dt_ns);

// Constant matrix J with smooth(x) = J x. Rows sum to one.
RMat smoothing_jacobian(int n, double sigma_ns, double dt_ns);

// Pixelization of one control pulse. The first n_head and last n_tail raw
// pixels are held at reference_bias and are not optimization variables;
// they still participate in the convolution.
struct PulseShape {
    int n_pixels = 0;
    double dt_ns = 0.0;
    int n_head = 0;
    int n_tail = 0;
    double sigma_ns = 0.0;
    double reference_bias = 0.0;     // raw value of the held pixels
    double lo = 0.0, hi = 0.0;       // physical bias bounds (rad)
    double initial_amplitude = 0.0;  // raw value of the initial square pulse

    int n_free() const { return n_pixels - n_head - n_tail; }
    double duration_ns() const { return n_pixels * dt_ns; }
    void validate() const;
};

// Sigmoidal change of variables keeping raw pixels strictly inside (lo, hi):
//   u = lo + (hi - lo) * logistic(x)
double squash(double x, double lo, double hi);
double squash_slope(double x, double lo, double hi);  // du/dx
double unsquash(double u, double lo, double hi);      // inverse

// Full raw pixel vector from the free variables: head/tail at the
// reference bias, interior through the squash transform.
RVec assemble_raw(const PulseShape& shape, const RVec& free_vars);

// Free-variable vector that reproduces a constant raw amplitude.
RVec initial_free_vars(const PulseShape& shape);

}  // namespace cgrape
