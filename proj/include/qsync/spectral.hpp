// spectral.hpp — Non-Hermitian eigenanalysis of superoperators: paired
// left/right eigenvectors, mode classification, null-space steady states,
// Moore-Penrose pseudoinverse and the pseudoinverse-of-a-sum shift.

#pragma once

#include <vector>

#include "qsync/operator_core.hpp"

namespace qsync {

enum class ModeTag { steady, oscillating_coherence, decaying };

// Eigenvalues sorted by descending real part, then ascending |imag|, then
// descending imag. Right/left eigenvectors are unit columns; left vectors
// are phased so that <l_mu|r_mu> is real positive.
struct SpectralData {
    Vector eigenvalues;
    Matrix right_vecs;
    Matrix left_vecs;
    Vector overlaps;             // <l_mu | r_mu>
    std::vector<ModeTag> tags;   // empty until classify()
    double superop_norm = 0.0;   // Frobenius norm of the decomposed operator
};

SpectralData eig_left_right(const Matrix& superop);

// steady: |Re| <= tol_real and |Im| <= tol_imag; oscillating_coherence:
// |Re| <= tol_real and |Im| > tol_imag; otherwise decaying. A mode with
// Re > tol_real flags an unphysical spectrum (throws).
SpectralData classify(SpectralData spec, double tol_real, double tol_imag);
SpectralData classify(SpectralData spec);  // tols = 1e-8 * superop_norm

// True when every |Im| > tol eigenvalue has a conjugate partner within tol.
bool spectrum_conjugate_symmetric(const SpectralData& spec, double tol);

// Number of singular values <= 1e-10 * sigma_max.
Eigen::Index null_space_dimension(const Matrix& superop);

// Phase-fix (largest diagonal entry real positive), hermitize, trace
// normalize. Throws NumericalError for traceless or non-positive candidates.
DensityMatrix density_from_liouville_vector(const Vector& v, double eig_floor = -1e-8);

// Null space of a Liouvillian as density matrices, from singular vectors
// with sigma <= 1e-10 * sigma_max.
std::vector<DensityMatrix> steady_states(const Matrix& liouvillian);

// SVD-based Moore-Penrose pseudoinverse; sigma <= 1e-12 * sigma_max is rank
// deficient and inverted to zero.
Matrix pseudoinverse(const Matrix& m);

// X_(A,B) defined by (A+B)^+ = A^+ + X. x_paper evaluates
// (deltaI - A^+ B)(A+B)^+ with deltaI = I - A^+ A; x_def is the defining
// difference (A+B)^+ - A^+. The two need not agree; `agreement` reports
// ||x_paper - x_def|| / max(1, ||x_def||).
struct PinvShiftResult {
    Matrix x_paper;
    Matrix x_def;
    double agreement = 0.0;
};

PinvShiftResult pseudoinverse_shift(const Matrix& a, const Matrix& b);

}  // namespace qsync
