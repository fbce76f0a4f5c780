// Shared generators for the test suites. Every generator takes an explicit
// engine so each TEST_CASE seeds its own deterministic stream.

#pragma once

#include <random>

#include <Eigen/QR>

#include "qsync/liouvillian.hpp"
#include "qsync/models.hpp"
#include "qsync/operator_core.hpp"

namespace qsync::testing {

using Rng = std::mt19937_64;

inline Matrix random_complex(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> g;
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

inline Matrix random_hermitian(Rng& rng, Eigen::Index dim) {
    return hermitize(random_complex(rng, dim, dim));
}

inline Matrix random_unitary(Rng& rng, Eigen::Index dim) {
    Eigen::HouseholderQR<Matrix> qr(random_complex(rng, dim, dim));
    Matrix q = qr.householderQ();
    // fix the QR phase ambiguity so the distribution is Haar
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < dim; ++i) {
        const Complex d = r(i, i);
        if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

inline DensityMatrix random_density(Rng& rng, Eigen::Index dim) {
    const Matrix a = random_complex(rng, dim, dim);
    Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(hermitize(rho));
}

// Density matrix with a prescribed minimum eigenvalue gap, random basis.
inline DensityMatrix random_density_gapped(Rng& rng, Eigen::Index dim, double min_gap) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RealVector p(dim);
    while (true) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < dim; ++i) {
            p(i) = u(rng) + 0.02;
            sum += p(i);
        }
        p /= sum;
        std::sort(p.data(), p.data() + dim);
        bool ok = true;
        for (Eigen::Index i = 1; i < dim; ++i)
            if (p(i) - p(i - 1) < min_gap) ok = false;
        if (ok) break;
    }
    const Matrix q = random_unitary(rng, dim);
    return DensityMatrix(hermitize(q * p.asDiagonal() * q.adjoint()));
}

// Randomized theorem-suite instances. Both use nearest-neighbour thermal
// chains (a tree), so the uncoupled steady state is diagonal.

// Non-degenerate diagonal H0 (gaps >= 0.1) with a diagonal, hence
// energy-conserving, perturbation.
inline LindbladModel random_conserving_nondegenerate(Rng& rng, Eigen::Index dim) {
    std::uniform_real_distribution<double> gap(0.1, 1.1);
    std::uniform_real_distribution<double> rate(0.05, 0.5);
    std::uniform_real_distribution<double> vd(-1.0, 1.0);
    LindbladModel model;
    RealVector energies(dim);
    energies(0) = 0.0;
    for (Eigen::Index i = 1; i < dim; ++i) energies(i) = energies(i - 1) + gap(rng);
    model.h0 = Matrix(energies.cast<Complex>().asDiagonal());
    RealVector vdiag(dim);
    for (Eigen::Index i = 0; i < dim; ++i) vdiag(i) = vd(rng);
    model.v = Matrix(vdiag.cast<Complex>().asDiagonal());
    model.epsilon = 0.2;
    for (Eigen::Index i = 0; i + 1 < dim; ++i) {
        model.channels.push_back({rate(rng), basis_op(dim, i, i + 1), "down"});
        model.channels.push_back({rate(rng), basis_op(dim, i + 1, i), "up"});
    }
    return model;
}

// H0 with an exactly degenerate pair (levels 1 and 2) and V supported only
// inside that block; still energy conserving, but able to build coherence.
inline LindbladModel random_conserving_degenerate(Rng& rng, Eigen::Index dim) {
    std::uniform_real_distribution<double> gap(0.2, 1.0);
    std::uniform_real_distribution<double> rate(0.05, 0.5);
    std::uniform_real_distribution<double> amp(0.3, 1.0);
    LindbladModel model;
    RealVector energies(dim);
    energies(0) = 0.0;
    energies(1) = gap(rng);
    energies(2) = energies(1);  // the degenerate block
    for (Eigen::Index i = 3; i < dim; ++i) energies(i) = energies(i - 1) + gap(rng);
    model.h0 = Matrix(energies.cast<Complex>().asDiagonal());
    Matrix v = Matrix::Zero(dim, dim);
    const Complex c(amp(rng), amp(rng));
    v(1, 2) = c;
    v(2, 1) = std::conj(c);
    v(1, 1) = amp(rng);
    v(2, 2) = -amp(rng);
    model.v = v;
    model.epsilon = 0.2;
    for (Eigen::Index i = 0; i + 1 < dim; ++i) {
        model.channels.push_back({rate(rng), basis_op(dim, i, i + 1), "down"});
        model.channels.push_back({rate(rng), basis_op(dim, i + 1, i), "up"});
    }
    return model;
}

inline Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix pauli_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

inline Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

}  // namespace qsync::testing
