#include <doctest.h>

#include <cmath>

#include "qsync/models.hpp"
#include "qsync/operator_core.hpp"
#include "test_helpers.hpp"

using namespace qsync;
using namespace qsync::testing;

namespace {

// elementwise tensor-product definition, the oracle for kron()
Matrix kron_oracle(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

// explicit index-sum partial trace over a bipartite split, the oracle
Matrix ptrace_oracle(const Matrix& rho, Eigen::Index da, Eigen::Index db, bool keep_first) {
    const Eigen::Index dk = keep_first ? da : db;
    Matrix out = Matrix::Zero(dk, dk);
    for (Eigen::Index a = 0; a < da; ++a)
        for (Eigen::Index ap = 0; ap < da; ++ap)
            for (Eigen::Index b = 0; b < db; ++b)
                for (Eigen::Index bp = 0; bp < db; ++bp) {
                    if (keep_first && b == bp) out(a, ap) += rho(a * db + b, ap * db + bp);
                    if (!keep_first && a == ap) out(b, bp) += rho(a * db + b, ap * db + bp);
                }
    return out;
}

}  // namespace

TEST_CASE("kron identities and oracle") {
    const Matrix i2 = Matrix::Identity(2, 2);
    CHECK((kron(i2, i2) - Matrix::Identity(4, 4)).norm() == 0.0);

    Matrix expected = Matrix::Zero(4, 4);
    expected.diagonal() << 1, 1, -1, -1;
    CHECK((kron(pauli_z(), i2) - expected).norm() == 0.0);

    Rng rng(7101);
    const Matrix a = random_complex(rng, 2, 2), b = random_complex(rng, 2, 2);
    CHECK((kron(a, b) - kron_oracle(a, b)).norm() == 0.0);
}

TEST_CASE("vectorize follows column stacking and round trips") {
    Matrix m(2, 2);
    m << Complex(1, 0), Complex(3, 1), Complex(2, 0), Complex(4, -1);  // [[a,b],[c,d]]
    const Vector v = vectorize(m);
    CHECK(v(0) == m(0, 0));
    CHECK(v(1) == m(1, 0));
    CHECK(v(2) == m(0, 1));
    CHECK(v(3) == m(1, 1));

    Rng rng(7102);
    const Matrix r = random_complex(rng, 5, 5);
    CHECK((unvectorize(vectorize(r)) - r).cwiseAbs().maxCoeff() == 0.0);  // bit exact

    CHECK_THROWS_AS(unvectorize(Vector::Zero(5)), std::invalid_argument);
}

TEST_CASE("vec(AXB) = (B^T kron A) vec(X)") {
    Rng rng(7103);
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix a = random_complex(rng, 3, 3);
        const Matrix x = random_complex(rng, 3, 3);
        const Matrix b = random_complex(rng, 3, 3);
        const Vector lhs = vectorize(a * x * b);
        const Vector rhs = kron(b.transpose(), a) * vectorize(x);
        CHECK((lhs - rhs).norm() <= 1e-12 * lhs.norm());
    }
}

TEST_CASE("commutator basics") {
    CHECK((commutator(pauli_x(), pauli_y()) - Complex(0, 2) * pauli_z()).norm() < 1e-15);
    Rng rng(7104);
    const Matrix h = random_hermitian(rng, 4);
    CHECK(commutator(h, h).norm() < 1e-14);
    CHECK_THROWS_AS(commutator(h, Matrix::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("coupled machine interaction commutes with H0 at zero detuning") {
    ThermalMachineParams p;
    p.delta = 0.0;
    const ModelPreset preset = build_coupled_machines(p);
    CHECK(commutator(preset.model.h0, preset.model.v).norm() == 0.0);
    p.delta = 0.02;
    const ModelPreset detuned = build_coupled_machines(p);
    CHECK(commutator(detuned.model.h0, detuned.model.v).norm() > 1e-3);
}

TEST_CASE("dephase in computational basis") {
    Matrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;  // |+><+|
    const DensityMatrix rho{plus};
    const DensityMatrix dephased = dephase(rho);
    CHECK((dephased.mat() - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-15);

    Rng rng(7105);
    const DensityMatrix diag{Matrix(Vector(random_density(rng, 3).mat().diagonal()).asDiagonal())};
    CHECK((dephase(diag).mat() - diag.mat()).norm() < 1e-15);

    // projection idempotence and exact trace preservation
    for (int rep = 0; rep < 5; ++rep) {
        const DensityMatrix r = random_density(rng, 4);
        const DensityMatrix once = dephase(r);
        CHECK((dephase(once).mat() - once.mat()).norm() < 1e-15);
        CHECK(once.mat().trace().real() == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("dephase rejects non-orthonormal bases") {
    Rng rng(7106);
    const DensityMatrix rho = random_density(rng, 3);
    Matrix bad = Matrix::Identity(3, 3);
    bad(0, 1) = 0.5;
    CHECK_THROWS_AS(dephase(rho, bad), std::invalid_argument);
}

TEST_CASE("dephase never decreases entropy") {
    Rng rng(7107);
    for (int rep = 0; rep < 20; ++rep) {
        const DensityMatrix rho = random_density(rng, 4);
        const Matrix u = random_unitary(rng, 4);
        CHECK(von_neumann_entropy(rho) <= von_neumann_entropy(dephase(rho, u)) + 1e-10);
    }
}

TEST_CASE("von Neumann entropy closed forms") {
    Matrix pure = Matrix::Zero(3, 3);
    pure(0, 0) = 1.0;
    CHECK(von_neumann_entropy(DensityMatrix{pure}) == doctest::Approx(0.0).epsilon(1e-13));

    CHECK(von_neumann_entropy(DensityMatrix{Matrix(0.5 * Matrix::Identity(2, 2))}) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-13));

    Matrix mixed = Matrix::Zero(2, 2);
    mixed(0, 0) = 0.7;
    mixed(1, 1) = 0.3;
    const double expected = -0.7 * std::log(0.7) - 0.3 * std::log(0.3);
    CHECK(von_neumann_entropy(DensityMatrix{mixed}) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("partial trace of product and Bell states") {
    Rng rng(7108);
    const DensityMatrix ra = random_density(rng, 2), rb = random_density(rng, 3);
    const DensityMatrix joint{kron(ra.mat(), rb.mat())};
    CHECK((partial_trace(joint, {2, 3}, 0).mat() - ra.mat()).norm() < 1e-12);
    CHECK((partial_trace(joint, {2, 3}, 1).mat() - rb.mat()).norm() < 1e-12);

    Vector bell = Vector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const DensityMatrix bell_rho{Matrix(bell * bell.adjoint())};
    for (std::size_t keep : {0u, 1u})
        CHECK((partial_trace(bell_rho, {2, 2}, keep).mat() - 0.5 * Matrix::Identity(2, 2)).norm() <
              1e-14);
}

TEST_CASE("partial trace matches the index-sum oracle on two qutrits") {
    Rng rng(7109);
    const DensityMatrix rho = random_density(rng, 9);
    CHECK((partial_trace(rho, {3, 3}, 0).mat() - ptrace_oracle(rho.mat(), 3, 3, true)).norm() <
          1e-13);
    CHECK((partial_trace(rho, {3, 3}, 1).mat() - ptrace_oracle(rho.mat(), 3, 3, false)).norm() <
          1e-13);
    CHECK_THROWS_AS(partial_trace(rho, {2, 3}, 0), std::invalid_argument);
}

TEST_CASE("density matrix invariants are enforced") {
    Matrix not_herm(2, 2);
    not_herm << 0.5, Complex(0.1, 0.2), Complex(0.1, -0.1), 0.5;
    CHECK_THROWS_AS(DensityMatrix{not_herm}, NumericalError);

    Matrix bad_trace = 0.6 * Matrix::Identity(2, 2);
    CHECK_THROWS_AS(DensityMatrix{bad_trace}, NumericalError);

    Matrix negative(2, 2);
    negative << 1.1, 0, 0, -0.1;
    CHECK_THROWS_AS(DensityMatrix{negative}, NumericalError);
}

TEST_CASE("trace distance") {
    Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    b(1, 1) = 1.0;
    CHECK(trace_distance(a, b) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(trace_distance(a, a) == 0.0);
}
