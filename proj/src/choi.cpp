#include "cgrape/choi.hpp"

#include <cmath>
#include <stdexcept>

namespace cgrape {

Mat reshuffle(const Mat& m) {
    const auto d2 = m.rows();
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(d2))));
    if (d * d != d2 || m.cols() != d2)
        throw std::invalid_argument("reshuffle: dimension is not a perfect square");
    Mat c(d2, d2);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b)
            for (Eigen::Index ap = 0; ap < d; ++ap)
                for (Eigen::Index bp = 0; bp < d; ++bp)
                    c(d * a + b, d * ap + bp) = m(d * bp + b, d * ap + a);
    return c;
}

double frobenius_fidelity(const Mat& target, const Mat& realized) {
    if (target.rows() != realized.rows() || target.cols() != realized.cols())
        throw std::invalid_argument("frobenius_fidelity: dimension mismatch");
    const double denom = (target.adjoint() * target).trace().real();
    if (denom <= 0.0)
        throw std::domain_error("frobenius_fidelity: zero target");
    return (target.adjoint() * realized).trace().real() / denom;
}

double fidelity_gradient_term(const Mat& target, const Mat& dchoi) {
    return frobenius_fidelity(target, dchoi);
}

namespace {

// Hermitize and eigendecompose, clipping small negative eigenvalues.
std::pair<RVec, Mat> psd_eigs(const Mat& m, double clip, const char* what) {
    const Mat h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    RVec vals = es.eigenvalues();
    if (vals.minCoeff() < -1e-6)
        throw std::domain_error(std::string(what) + ": significantly negative eigenvalue");
    for (Eigen::Index i = 0; i < vals.size(); ++i)
        if (vals(i) < clip) vals(i) = 0.0;
    return {vals, es.eigenvectors()};
}

}  // namespace

double sqrt_channel_fidelity(const Mat& target, const Mat& realized, double clip) {
    if (target.rows() != realized.rows() || target.cols() != realized.cols())
        throw std::invalid_argument("sqrt_channel_fidelity: dimension mismatch");
    const auto [tvals, tvecs] = psd_eigs(target, clip, "sqrt_channel_fidelity target");
    const Mat sqrt_t = tvecs * tvals.cwiseSqrt().asDiagonal() * tvecs.adjoint();
    const Mat inner = sqrt_t * realized * sqrt_t;
    const auto [ivals, ivecs] = psd_eigs(inner, clip, "sqrt_channel_fidelity inner");
    const double tr = ivals.cwiseSqrt().sum();
    const double d2 = static_cast<double>(target.rows());
    return tr * tr / d2;
}

CptpReport cptp_report(const Mat& choi) {
    const auto d2 = choi.rows();
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(d2))));
    if (d * d != d2 || choi.cols() != d2)
        throw std::invalid_argument("cptp_report: dimension is not a perfect square");
    const Mat h = 0.5 * (choi + choi.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    // partial trace over the second (output) factor
    Mat tr_out = Mat::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            for (Eigen::Index b = 0; b < d; ++b)
                tr_out(i, j) += choi(d * i + b, d * j + b);
    return {es.eigenvalues().minCoeff(), (tr_out - Mat::Identity(d, d)).norm()};
}

}  // namespace cgrape
