#include "cgrape/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace cgrape {

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vec column_stack(const Mat& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("column_stack: matrix must be square");
    // Eigen stores column-major, so the stacked vector is the raw layout.
    return Eigen::Map<const Vec>(m.data(), m.size());
}

Mat unstack(const Vec& v) {
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
    if (d * d != v.size())
        throw std::invalid_argument("unstack: length is not a perfect square");
    return Eigen::Map<const Mat>(v.data(), d, d);
}

double hermiticity_defect(const Mat& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

// Pade coefficients for the degree-13 approximant.
constexpr double kPade13[] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

// ||A||_1 threshold below which the unscaled degree-13 approximant holds.
constexpr double kTheta13 = 5.371920351148152;

}  // namespace

Mat expm(const Mat& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("expm: matrix must be square");
    if (!a.allFinite())
        throw std::invalid_argument("expm: non-finite entries");

    const Eigen::Index n = a.rows();
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();

    int squarings = 0;
    if (norm1 > kTheta13)
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));

    const Mat as = a / std::pow(2.0, squarings);
    const Mat a2 = as * as;
    const Mat a4 = a2 * a2;
    const Mat a6 = a4 * a2;
    const Mat ident = Mat::Identity(n, n);

    const auto& b = kPade13;
    const Mat u = as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                        b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
    const Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
                  b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;

    Mat r = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < squarings; ++k) r = r * r;
    return r;
}

ExpmWithDerivative expm_directional_derivative(const Mat& a, const Mat& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument("expm_directional_derivative: dimension mismatch");
    const Eigen::Index n = a.rows();
    Mat aug = Mat::Zero(2 * n, 2 * n);
    aug.topLeftCorner(n, n) = a;
    aug.bottomRightCorner(n, n) = a;
    aug.topRightCorner(n, n) = b;
    const Mat e = expm(aug);
    return {e.topLeftCorner(n, n), e.topRightCorner(n, n)};
}

}  // namespace cgrape
