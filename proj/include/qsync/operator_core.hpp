// operator_core.hpp — Complex Hilbert-space primitives shared by every module:
// Kronecker products, column-stacking vectorization, commutators, dephasing,
// von Neumann entropy, partial trace.

#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace qsync {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Value-dependent failure (solver breakdown, vanishing denominator,
// unphysical candidate state). Structural misuse throws std::invalid_argument.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool all_finite(const Matrix& m);

// max_ij |M_ij - conj(M_ji)|
double hermiticity_deviation(const Matrix& m);

inline bool is_hermitian(const Matrix& m, double tol = 1e-10) {
    return hermiticity_deviation(m) <= tol;
}

inline Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

// Density matrix with validated invariants: Hermitian within herm_tol,
// unit trace within trace_tol, smallest eigenvalue >= eig_floor.
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix rho, double herm_tol = 1e-10,
                           double trace_tol = 1e-10, double eig_floor = -1e-9);

    const Matrix& mat() const { return rho_; }
    Eigen::Index dim() const { return rho_.rows(); }

private:
    Matrix rho_;
};

Matrix kron(const Matrix& a, const Matrix& b);

// Column stacking: entry (i,j) of a d x d matrix maps to index j*d + i.
Vector vectorize(const Matrix& m);
Matrix unvectorize(const Vector& v);  // rejects non-square lengths

Matrix commutator(const Matrix& a, const Matrix& b);
Matrix anticommutator(const Matrix& a, const Matrix& b);

// Projects out off-diagonal elements in the given orthonormal basis
// (columns of `basis`; Gram deviation above 1e-10 is rejected).
Matrix dephase_in_basis(const Matrix& rho, const Matrix& basis);
DensityMatrix dephase(const DensityMatrix& rho, const Matrix& basis);
DensityMatrix dephase(const DensityMatrix& rho);  // computational basis

// -sum_i p_i ln p_i in nats; eigenvalues below 1e-14 are clamped to zero.
double entropy_of_hermitian(const Matrix& rho);
double von_neumann_entropy(const DensityMatrix& rho);

// Reduced state on subsystem `keep`; dims are the tensor factors in
// Kronecker order (first factor most significant).
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<Eigen::Index>& dims,
                            std::size_t keep);

// (1/2) * sum of singular values of a - b
double trace_distance(const Matrix& a, const Matrix& b);

}  // namespace qsync
