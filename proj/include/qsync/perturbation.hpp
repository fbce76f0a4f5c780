// perturbation.hpp — Perturbative machinery in Liouville space (first-order
// steady-state correction and its pseudoinverse-shift split, first-order
// eigenvalue shifts) and in Hilbert space (Brillouin-Wigner corrections,
// passive states / ergotropy).

#pragma once

#include "qsync/liouvillian.hpp"
#include "qsync/operator_core.hpp"
#include "qsync/spectral.hpp"

namespace qsync {

// rho1 is the O(epsilon) coefficient of the steady state: the full state is
// rho0 + epsilon*rho1 + O(epsilon^2). split_h and split_x decompose rho1
// through the pseudoinverse shift of the Hamiltonian part against the
// dissipative part; their sum reproduces rho1 only up to the reported
// shift_agreement (the two shift formulas need not coincide).
struct PerturbationReport {
    DensityMatrix rho0;
    Matrix rho1;      // traceless Hermitian
    Matrix split_h;   // -pinv(L_H0) L_V part   (empty unless split computed)
    Matrix split_x;   // -X_(H0,D) L_V part     (empty unless split computed)
    double epsilon = 0.0;
    double split_discrepancy = 0.0;  // ||split_h + split_x - rho1||_F
    double shift_agreement = 0.0;    // from pseudoinverse_shift
};

// rho1 = -unvectorize(pinv(L0) * Lv * vec(rho0)). Requires rho0 to be a
// genuine steady state of L0 (residual <= 1e-9 * ||L0||_F).
PerturbationReport first_order_steady_correction(const Matrix& l0, const Matrix& lv,
                                                 const DensityMatrix& rho0);

// Same correction, split into the diagonal-Hamiltonian part and the shift
// part evaluated from the pseudoinverse-of-a-sum formula.
PerturbationReport split_correction(const LindbladModel& model, const DensityMatrix& rho0);

enum class EigvalVariant {
    paper,     // summed-left-vector form: sum_nu <l_nu|Lv|r_mu> / sum_nu <l_nu|r_mu>
    standard,  // biorthogonal form: <l_mu|Lv|r_mu> / <l_mu|r_mu>
};

Complex first_order_eigenvalue(const SpectralData& spec, const Matrix& lv, Eigen::Index mu,
                               EigvalVariant variant);

// Brillouin-Wigner corrections for the spectral decomposition of
// rho0 + epsilon*V. Implicit eigenvalues in the denominators are resolved by
// fixed-point iteration seeded at the unperturbed values (max 100 iterations,
// tolerance 1e-12). Eigenvalues closer than 1e-10 form a degenerate cluster;
// V is diagonalized inside each cluster and intra-cluster terms are skipped.
struct BwptReport {
    RealVector p0;             // unperturbed eigenvalues (ascending)
    RealVector p1, p2;         // per-order eigenvalue corrections (p2 empty at order 1)
    Matrix basis;              // unperturbed eigenvectors (after any degenerate rotation)
    Matrix vec1, vec2;         // corrections |lambda_n^(i)> as columns, computational basis
    Matrix rho_order0;         // the input state, exactly
    Matrix rho_order1;         // first-order operator correction
    double epsilon = 0.0;
    int order = 0;

    // Truncated eigenvalues with normalized truncated eigenvectors,
    // reassembled as sum_n p_n |n><n|.
    Matrix reconstruct(int up_to_order) const;
};

BwptReport bwpt_corrections(const DensityMatrix& rho0, const Matrix& v, double epsilon,
                            int order);

// Passive rearrangement: rho's eigenvalues in decreasing order against H's
// eigenvalues in increasing order. ergotropy = Tr(rho H) - Tr(rho_passive H).
struct PassiveResult {
    DensityMatrix rho_passive;
    double ergotropy = 0.0;
};

PassiveResult passive_state(const DensityMatrix& rho, const Matrix& h);

}  // namespace qsync
