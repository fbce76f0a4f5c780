#include "qsync/liouvillian.hpp"

#include <cmath>
#include <iostream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace qsync {

namespace {
const Complex kImag(0.0, 1.0);
}

void LindbladModel::validate(double herm_tol) const {
    if (h0.rows() != h0.cols() || h0.rows() == 0)
        throw std::invalid_argument("LindbladModel: h0 not square");
    if (v.rows() != h0.rows() || v.cols() != h0.cols())
        throw std::invalid_argument("LindbladModel: v dimension mismatch");
    if (!is_hermitian(h0, herm_tol)) throw std::invalid_argument("LindbladModel: h0 not Hermitian");
    if (!is_hermitian(v, herm_tol)) throw std::invalid_argument("LindbladModel: v not Hermitian");
    if (!all_finite(h0) || !all_finite(v))
        throw std::invalid_argument("LindbladModel: non-finite operator entries");
    for (const auto& ch : channels) {
        if (ch.rate < 0.0) throw std::invalid_argument("LindbladModel: negative channel rate");
        if (ch.collapse_op.rows() != h0.rows() || ch.collapse_op.cols() != h0.cols())
            throw std::invalid_argument("LindbladModel: channel dimension mismatch");
        if (!all_finite(ch.collapse_op))
            throw std::invalid_argument("LindbladModel: non-finite collapse operator");
    }
}

Matrix hamiltonian_superop(const Matrix& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("hamiltonian_superop: H not square");
    const double hdev = hermiticity_deviation(h);
    if (hdev > 1e-10)
        std::cerr << "qsync: warning: hamiltonian_superop called with non-Hermitian H (deviation "
                  << hdev << ")\n";
    const Matrix id = Matrix::Identity(h.rows(), h.cols());
    return -kImag * (kron(id, h) - kron(h.transpose(), id));
}

Matrix dissipator_superop(double rate, const Matrix& collapse_op) {
    if (collapse_op.rows() != collapse_op.cols())
        throw std::invalid_argument("dissipator_superop: collapse operator not square");
    if (rate < 0.0) throw std::invalid_argument("dissipator_superop: negative rate");
    const Matrix id = Matrix::Identity(collapse_op.rows(), collapse_op.cols());
    const Matrix oo = collapse_op.adjoint() * collapse_op;
    return rate * (kron(collapse_op.conjugate(), collapse_op) - 0.5 * kron(id, oo) -
                   0.5 * kron(oo.transpose(), id));
}

Matrix dissipator_superop(const DissipationChannel& ch) {
    return dissipator_superop(ch.rate, ch.collapse_op);
}

Matrix assemble(const LindbladModel& model, bool include_v) {
    model.validate();
    Matrix l = hamiltonian_superop(model.h0);
    for (const auto& ch : model.channels) l += dissipator_superop(ch);
    if (include_v) l += model.epsilon * hamiltonian_superop(model.v);
    return l;
}

namespace {

// exp(L t) v through the eigendecomposition when the eigenvector matrix is
// well conditioned, otherwise scaling-and-squaring on the full matrix.
Vector apply_exponential(const Matrix& l, double t, const Vector& v0) {
    Eigen::ComplexEigenSolver<Matrix> es(l);
    if (es.info() == Eigen::Success) {
        const Matrix& vecs = es.eigenvectors();
        Eigen::BDCSVD<Matrix> svd(vecs, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        if (smin > 0.0 && smax / smin < 1e8) {
            Vector coeffs = svd.solve(v0);
            for (Eigen::Index i = 0; i < coeffs.size(); ++i)
                coeffs(i) *= std::exp(es.eigenvalues()(i) * t);
            return vecs * coeffs;
        }
    }
    return (l * t).exp() * v0;
}

}  // namespace

DensityMatrix propagate(const Matrix& liouvillian, const DensityMatrix& rho0, double t) {
    if (t < 0.0) throw std::invalid_argument("propagate: negative time");
    const Eigen::Index d = rho0.dim();
    if (liouvillian.rows() != d * d || liouvillian.cols() != d * d)
        throw std::invalid_argument("propagate: superoperator dimension mismatch");
    if (t == 0.0) return rho0;

    Matrix raw = unvectorize(apply_exponential(liouvillian, t, vectorize(rho0.mat())));
    const double herm_dev = hermiticity_deviation(raw);
    const double trace_dev = std::abs(raw.trace() - Complex(1.0, 0.0));
    if (std::max(herm_dev, trace_dev) > 1e-8)
        throw NumericalError("propagate: renormalization correction " +
                             std::to_string(std::max(herm_dev, trace_dev)) +
                             " exceeds 1e-8; Liouvillian is not trace preserving");
    Matrix h = hermitize(raw);
    h /= h.trace().real();
    return DensityMatrix(std::move(h));
}

}  // namespace qsync
