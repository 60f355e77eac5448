#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

namespace cgrape {

using complexd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Kronecker product A (x) B.
Mat kron(const Mat& a, const Mat& b);

// Column stacking: col(M)(d*j + i) = M(i, j). Throws on non-square input.
Vec column_stack(const Mat& m);

// Inverse of column_stack. Throws if the length is not a perfect square.
Mat unstack(const Vec& v);

// Matrix exponential, degree-13 Pade approximant with scaling and squaring.
// The scaling power is chosen from the 1-norm. Valid for defective inputs.
// Throws on non-finite entries.
Mat expm(const Mat& a);

// Exponential of the augmented block matrix [[A, B], [0, A]]. The top-left
// block is e^A, the top-right block is the directional derivative
// d/dx e^{A + xB} at x = 0.
struct ExpmWithDerivative {
    Mat value;       // e^A
    Mat derivative;  // d/dx e^{A+xB}|_0
};
ExpmWithDerivative expm_directional_derivative(const Mat& a, const Mat& b);

// max |M - M^dagger| entrywise
double hermiticity_defect(const Mat& m);

}  // namespace cgrape
