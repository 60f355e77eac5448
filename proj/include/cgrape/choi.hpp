#pragma once

#include "cgrape/linalg.hpp"
#include "cgrape/liouville.hpp"

namespace cgrape {

// Choi matrix from a column-stacking propagator by index reshuffle:
//   C(d*a + b, d*a' + b') = T(d*b' + b, d*a' + a)
// with 0-based a, b, a', b'. Pure permutation, and an involution:
// reshuffle(reshuffle(T)) == T.
Mat reshuffle(const Mat& propagator);

inline Mat reshuffle(const Propagator& t) { return reshuffle(t.matrix); }

// Phi' = Re Tr{Ct^dag C} / Re Tr{Ct^dag Ct}. Throws when the target is zero.
double frobenius_fidelity(const Mat& target, const Mat& realized);

// One gradient entry Re Tr{Ct^dag dC} / Re Tr{Ct^dag Ct}; linear in dC.
double fidelity_gradient_term(const Mat& target, const Mat& dchoi);

// Diagnostic square-root channel fidelity
//   Phi = (Tr sqrt(sqrt(Ct) C sqrt(Ct)))^2 / d^2
// via Hermitian eigendecompositions. Both inputs must be Hermitian PSD up to
// roundoff; eigenvalues below the clip threshold are set to zero and
// eigenvalues below -1e-6 raise a domain error. Not usable in gradient search.
double sqrt_channel_fidelity(const Mat& target, const Mat& realized,
                             double clip = 1e-12);

struct CptpReport {
    double min_eigenvalue = 0.0;  // of the Hermitized Choi matrix
    double tp_residual = 0.0;     // ||Tr_out C - 1||_F
};

// Complete-positivity / trace-preservation report for a Choi matrix.
CptpReport cptp_report(const Mat& choi);

}  // namespace cgrape
