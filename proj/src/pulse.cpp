#include "cgrape/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cgrape {

RVec gaussian_kernel(double sigma_ns, double dt_ns) {
    if (sigma_ns < 0.0)
        throw std::invalid_argument("gaussian_kernel: sigma must be >= 0");
    if (dt_ns <= 0.0)
        throw std::invalid_argument("gaussian_kernel: dt must be positive");
    if (sigma_ns == 0.0) {
        RVec k(1);
        k(0) = 1.0;
        return k;
    }
    const double sp = sigma_ns / dt_ns;
    const int w = static_cast<int>(std::ceil(4.0 * sp));
    RVec k(2 * w + 1);
    for (int i = -w; i <= w; ++i)
        k(i + w) = std::exp(-0.5 * (i / sp) * (i / sp));
    k /= k.sum();
    return k;
}

RVec smooth(const RVec& raw, double sigma_ns, double dt_ns) {
    const RVec k = gaussian_kernel(sigma_ns, dt_ns);
    const int w = (static_cast<int>(k.size()) - 1) / 2;
    const int n = static_cast<int>(raw.size());
    RVec out = RVec::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = -w; j <= w; ++j)
            out(i) += k(j + w) * raw(std::clamp(i + j, 0, n - 1));
    return out;
}

RMat smoothing_jacobian(int n, double sigma_ns, double dt_ns) {
    const RVec k = gaussian_kernel(sigma_ns, dt_ns);
    const int w = (static_cast<int>(k.size()) - 1) / 2;
    RMat jac = RMat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = -w; j <= w; ++j)
            jac(i, std::clamp(i + j, 0, n - 1)) += k(j + w);
    return jac;
}

void PulseShape::validate() const {
    if (n_pixels < 1) throw std::invalid_argument("PulseShape: need at least one pixel");
    if (dt_ns <= 0.0) throw std::invalid_argument("PulseShape: dt must be positive");
    if (n_head < 0 || n_tail < 0 || n_free() < 1)
        throw std::invalid_argument("PulseShape: head/tail leave no free pixels");
    if (sigma_ns < 0.0) throw std::invalid_argument("PulseShape: sigma must be >= 0");
    if (!(lo < hi)) throw std::invalid_argument("PulseShape: lo must be below hi");
    if (reference_bias < lo || reference_bias > hi)
        throw std::invalid_argument("PulseShape: reference bias outside bounds");
    if (initial_amplitude <= lo || initial_amplitude >= hi)
        throw std::invalid_argument("PulseShape: initial amplitude outside open bounds");
}

double squash(double x, double lo, double hi) {
    return lo + (hi - lo) / (1.0 + std::exp(-x));
}

double squash_slope(double x, double lo, double hi) {
    const double s = 1.0 / (1.0 + std::exp(-x));
    return (hi - lo) * s * (1.0 - s);
}

double unsquash(double u, double lo, double hi) {
    if (u <= lo || u >= hi)
        throw std::invalid_argument("unsquash: value outside open interval");
    return std::log((u - lo) / (hi - u));
}

RVec assemble_raw(const PulseShape& shape, const RVec& free_vars) {
    if (free_vars.size() != shape.n_free())
        throw std::invalid_argument("assemble_raw: wrong number of free variables");
    RVec raw(shape.n_pixels);
    raw.head(shape.n_head).setConstant(shape.reference_bias);
    raw.tail(shape.n_tail).setConstant(shape.reference_bias);
    for (int i = 0; i < shape.n_free(); ++i)
        raw(shape.n_head + i) = squash(free_vars(i), shape.lo, shape.hi);
    return raw;
}

RVec initial_free_vars(const PulseShape& shape) {
    return RVec::Constant(shape.n_free(), unsquash(shape.initial_amplitude, shape.lo, shape.hi));
}

}  // namespace cgrape
