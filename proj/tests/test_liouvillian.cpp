#include <doctest.h>

#include <cmath>

#include "qsync/liouvillian.hpp"
#include "qsync/models.hpp"
#include "qsync/spectral.hpp"
#include "test_helpers.hpp"

using namespace qsync;
using namespace qsync::testing;

namespace {

// direct dissipator formula, the oracle: O rho O^dag - 1/2 {O^dag O, rho}
Matrix dissipator_oracle(double rate, const Matrix& o, const Matrix& rho) {
    return rate * (o * rho * o.adjoint() - 0.5 * anticommutator(o.adjoint() * o, rho));
}

LindbladModel decaying_qubit(double gamma, double omega = 0.0) {
    LindbladModel model;
    model.h0 = 0.5 * omega * pauli_z();
    model.v = Matrix::Zero(2, 2);
    model.channels.push_back({gamma, basis_op(2, 0, 1), "decay"});
    return model;
}

}  // namespace

TEST_CASE("hamiltonian superoperator acts as -i[H, rho]") {
    CHECK(hamiltonian_superop(Matrix::Zero(3, 3)).norm() == 0.0);

    Rng rng(7201);
    for (int rep = 0; rep < 8; ++rep) {
        const Matrix h = random_hermitian(rng, 4);
        const Matrix rho = random_complex(rng, 4, 4);
        const Matrix lhs = unvectorize(Vector(hamiltonian_superop(h) * vectorize(rho)));
        const Matrix rhs = Complex(0, -1) * commutator(h, rho);
        CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
    }
}

TEST_CASE("hamiltonian superoperator of a diagonal H has eigenvalues -i(E_i - E_j)") {
    Matrix h = Matrix::Zero(3, 3);
    h.diagonal() << 0.3, 1.1, 2.9;
    const SpectralData spec = eig_left_right(hamiltonian_superop(h));
    std::vector<double> expected;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) expected.push_back(-(h(i, i).real() - h(j, j).real()));
    std::sort(expected.begin(), expected.end());
    RealVector got = spec.eigenvalues.imag();
    std::sort(got.data(), got.data() + got.size());
    for (int k = 0; k < 9; ++k) {
        CHECK(got(k) == doctest::Approx(expected[static_cast<std::size_t>(k)]).epsilon(1e-12));
        CHECK(std::abs(spec.eigenvalues(k).real()) < 1e-12);
    }
}

TEST_CASE("dissipator superoperator: qubit decay closed form") {
    const Matrix sm = basis_op(2, 0, 1);  // |0><1|
    const Matrix d = dissipator_superop(1.0, sm);
    Matrix excited = Matrix::Zero(2, 2);
    excited(1, 1) = 1.0;
    const Matrix out = unvectorize(Vector(d * vectorize(excited)));
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = 1.0;
    expected(1, 1) = -1.0;
    CHECK((out - expected).norm() < 1e-14);
}

TEST_CASE("dissipator superoperator matches the direct formula and preserves trace") {
    Rng rng(7202);
    for (int rep = 0; rep < 8; ++rep) {
        const Matrix o = random_complex(rng, 3, 3);
        const Matrix rho = random_complex(rng, 3, 3);
        const double rate = 0.7;
        const Matrix lhs = unvectorize(Vector(dissipator_superop(rate, o) * vectorize(rho)));
        const Matrix rhs = dissipator_oracle(rate, o, rho);
        CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
        CHECK(std::abs(unvectorize(Vector(dissipator_superop(rate, o) *
                                          vectorize(random_density(rng, 3).mat())))
                           .trace()) < 1e-13);
    }
}

TEST_CASE("assemble composes the generator linearly") {
    ThermalMachineParams p;
    p.epsilon = 0.03;
    p.delta = 0.02;
    const LindbladModel model = build_coupled_machines(p).model;

    const Matrix l0 = assemble(model, false);
    const Matrix l = assemble(model, true);
    CHECK((l - l0 - model.epsilon * hamiltonian_superop(model.v)).norm() == 0.0);

    LindbladModel eps0 = model;
    eps0.epsilon = 0.0;
    CHECK((assemble(eps0, true) - assemble(eps0, false)).norm() == 0.0);

    LindbladModel bare;
    bare.h0 = 0.5 * pauli_z();
    bare.v = Matrix::Zero(2, 2);
    CHECK((assemble(bare, true) - hamiltonian_superop(bare.h0)).norm() == 0.0);
}

TEST_CASE("assembled Liouvillians preserve trace and Hermiticity") {
    ThermalMachineParams p;
    p.epsilon = 0.03;
    p.delta = 0.02;
    const Matrix l = assemble(build_coupled_machines(p).model, true);

    // vec(I) is a left null vector
    const Vector vec_id = vectorize(Matrix(Matrix::Identity(9, 9)));
    CHECK((l.adjoint() * vec_id).norm() <= 1e-10 * l.norm());

    // exactly one singular value at numerical zero
    CHECK(null_space_dimension(l) == 1);

    Rng rng(7203);
    for (int rep = 0; rep < 5; ++rep) {
        const Matrix rho = random_hermitian(rng, 9);
        const Matrix out = unvectorize(Vector(l * vectorize(rho)));
        CHECK(hermiticity_deviation(out) <= 1e-12 * std::max(1.0, out.norm()));
    }
}

TEST_CASE("propagate: identity at t=0 and exponential qubit decay") {
    const double gamma = 0.35;
    const LindbladModel model = decaying_qubit(gamma);
    const Matrix l = assemble(model, true);

    Matrix rho0 = Matrix::Zero(2, 2);
    rho0(0, 0) = 0.25;
    rho0(1, 1) = 0.75;
    const DensityMatrix start{rho0};

    CHECK((propagate(l, start, 0.0).mat() - rho0).norm() == 0.0);

    for (double t : {0.3, 1.0, 4.0}) {
        const DensityMatrix rt = propagate(l, start, t);
        CHECK(rt.mat()(1, 1).real() ==
              doctest::Approx(0.75 * std::exp(-gamma * t)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(propagate(l, start, -1.0), std::invalid_argument);
}

TEST_CASE("propagate reaches the null-space steady state of the coupled machines") {
    ThermalMachineParams p;
    p.epsilon = 0.005;
    p.delta = 0.01;
    const LindbladModel model = build_coupled_machines(p).model;
    const Matrix l = assemble(model, true);
    const DensityMatrix rho_ss = steady_states(l).front();

    const DensityMatrix start{Matrix(Matrix::Identity(9, 9) / 9.0)};
    const double t = 50.0 / p.gamma_h_a;
    const DensityMatrix evolved = propagate(l, start, t);
    CHECK(trace_distance(evolved.mat(), rho_ss.mat()) < 1e-6);
}

TEST_CASE("propagate rejects a non-trace-preserving generator") {
    // plain Hamiltonian superop is fine; a broken generator is not
    Matrix bad = Matrix::Identity(4, 4);  // exp(t) blows up the trace
    const DensityMatrix start{Matrix(0.5 * Matrix::Identity(2, 2))};
    CHECK_THROWS_AS(propagate(bad, start, 1.0), NumericalError);
}

TEST_CASE("model validation rejects inconsistent input") {
    LindbladModel model;
    model.h0 = pauli_z();
    model.v = Matrix::Zero(3, 3);
    CHECK_THROWS_AS(model.validate(), std::invalid_argument);

    model.v = Matrix::Zero(2, 2);
    model.channels.push_back({-0.1, basis_op(2, 0, 1), "bad"});
    CHECK_THROWS_AS(model.validate(), std::invalid_argument);
}
