#include "qsync/operator_core.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

namespace qsync {

bool all_finite(const Matrix& m) {
    return m.allFinite();
}

double hermiticity_deviation(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("hermiticity_deviation: matrix not square");
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

DensityMatrix::DensityMatrix(Matrix rho, double herm_tol, double trace_tol, double eig_floor)
    : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() == 0)
        throw std::invalid_argument("DensityMatrix: matrix not square");
    if (!all_finite(rho_)) throw std::invalid_argument("DensityMatrix: non-finite entries");
    const double hdev = hermiticity_deviation(rho_);
    if (hdev > herm_tol)
        throw NumericalError("DensityMatrix: hermiticity deviation " + std::to_string(hdev));
    const double tdev = std::abs(rho_.trace() - Complex(1.0, 0.0));
    if (tdev > trace_tol)
        throw NumericalError("DensityMatrix: trace deviation " + std::to_string(tdev));
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(rho_), Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < eig_floor)
        throw NumericalError("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
}

Matrix kron(const Matrix& a, const Matrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

Vector vectorize(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("vectorize: matrix not square");
    // Eigen stores column-major, so the raw layout is already the column stack.
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvectorize(const Vector& v) {
    const auto n = v.size();
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
    if (d * d != n) throw std::invalid_argument("unvectorize: length is not a perfect square");
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

Matrix commutator(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("commutator: dimension mismatch");
    return a * b - b * a;
}

Matrix anticommutator(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("anticommutator: dimension mismatch");
    return a * b + b * a;
}

namespace {

void check_orthonormal(const Matrix& basis, Eigen::Index dim) {
    if (basis.rows() != dim || basis.cols() != dim)
        throw std::invalid_argument("dephase: basis dimension mismatch");
    const double gram_dev =
        (basis.adjoint() * basis - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (gram_dev > 1e-10)
        throw std::invalid_argument("dephase: basis not orthonormal (Gram deviation " +
                                    std::to_string(gram_dev) + ")");
}

}  // namespace

Matrix dephase_in_basis(const Matrix& rho, const Matrix& basis) {
    check_orthonormal(basis, rho.rows());
    const Vector diag = (basis.adjoint() * rho * basis).diagonal();
    return basis * diag.asDiagonal() * basis.adjoint();
}

DensityMatrix dephase(const DensityMatrix& rho, const Matrix& basis) {
    return DensityMatrix(dephase_in_basis(rho.mat(), basis));
}

DensityMatrix dephase(const DensityMatrix& rho) {
    return dephase(rho, Matrix::Identity(rho.dim(), rho.dim()));
}

double entropy_of_hermitian(const Matrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(rho), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()(i);
        if (p > 1e-14) s -= p * std::log(p);
    }
    return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    return entropy_of_hermitian(rho.mat());
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<Eigen::Index>& dims, std::size_t keep) {
    if (keep >= dims.size()) throw std::invalid_argument("partial_trace: keep index out of range");
    Eigen::Index total = 1;
    for (auto d : dims) {
        if (d <= 0) throw std::invalid_argument("partial_trace: non-positive subsystem dim");
        total *= d;
    }
    if (total != rho.dim()) throw std::invalid_argument("partial_trace: dims do not factor the state");

    Eigen::Index pre = 1, post = 1;
    for (std::size_t k = 0; k < keep; ++k) pre *= dims[k];
    for (std::size_t k = keep + 1; k < dims.size(); ++k) post *= dims[k];
    const Eigen::Index dk = dims[keep];

    const Matrix& m = rho.mat();
    Matrix out = Matrix::Zero(dk, dk);
    for (Eigen::Index a = 0; a < dk; ++a)
        for (Eigen::Index b = 0; b < dk; ++b)
            for (Eigen::Index p = 0; p < pre; ++p)
                for (Eigen::Index q = 0; q < post; ++q)
                    out(a, b) += m((p * dk + a) * post + q, (p * dk + b) * post + q);
    return DensityMatrix(std::move(out));
}

double trace_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    Eigen::BDCSVD<Matrix> svd(a - b);
    return 0.5 * svd.singularValues().sum();
}

}  // namespace qsync
