#include "cgrape/liouville.hpp"

#include <stdexcept>

namespace cgrape {

Mat hamiltonian_superop(const Mat& hamiltonian) {
    const Eigen::Index d = hamiltonian.rows();
    const Mat ident = Mat::Identity(d, d);
    return complexd(0, 1) * (kron(hamiltonian.transpose(), ident) - kron(ident, hamiltonian));
}

Mat dissipator_superop(const Mat& lindblad_op) {
    const Eigen::Index d = lindblad_op.rows();
    const Mat ident = Mat::Identity(d, d);
    const Mat& l = lindblad_op;
    return kron(l.conjugate(), l)
         - 0.5 * kron(l.transpose() * l.conjugate(), ident)
         - 0.5 * kron(ident, l.adjoint() * l);
}

Mat build_generator(const Mat& hamiltonian, const std::vector<DecayChannel>& channels,
                    double hermitian_tol) {
    if (hamiltonian.rows() != hamiltonian.cols())
        throw std::invalid_argument("build_generator: Hamiltonian must be square");
    if (hermiticity_defect(hamiltonian) > hermitian_tol)
        throw std::domain_error("build_generator: Hamiltonian is not Hermitian");
    Mat s = hamiltonian_superop(hamiltonian);
    for (const auto& ch : channels) {
        if (ch.rate < 0.0)
            throw std::domain_error("build_generator: negative decay rate");
        if (ch.op.rows() != hamiltonian.rows() || ch.op.cols() != hamiltonian.cols())
            throw std::invalid_argument("build_generator: channel dimension mismatch");
        s += ch.rate * dissipator_superop(ch.op);
    }
    return s;
}

double trace_preservation_residual(const Mat& generator) {
    const auto d2 = generator.rows();
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(d2))));
    if (d * d != d2 || generator.cols() != d2)
        throw std::invalid_argument("trace_preservation_residual: not a d^2 x d^2 matrix");
    const Vec id_vec = column_stack(Mat::Identity(d, d));
    return (id_vec.transpose() * generator).norm();
}

Propagator piecewise_propagator(const std::vector<Mat>& generators, double dt_ns) {
    if (generators.empty())
        throw std::invalid_argument("piecewise_propagator: empty generator list");
    if (dt_ns <= 0.0)
        throw std::invalid_argument("piecewise_propagator: dt must be positive");
    Mat t = expm(generators.front() * dt_ns);
    for (std::size_t j = 1; j < generators.size(); ++j)
        t = expm(generators[j] * dt_ns) * t;  // early times on the right
    return {std::move(t), dt_ns * static_cast<double>(generators.size())};
}

Vec evolve(const Propagator& t, const Vec& rho_vec) {
    if (t.matrix.cols() != rho_vec.size())
        throw std::invalid_argument("evolve: dimension mismatch");
    return t.matrix * rho_vec;
}

}  // namespace cgrape
