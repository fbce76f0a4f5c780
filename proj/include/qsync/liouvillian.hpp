// liouvillian.hpp — Assembly of the Lindblad generator in Liouville form
// (column-stacking convention) and dense time propagation.

#pragma once

#include <string>
#include <vector>

#include "qsync/operator_core.hpp"

namespace qsync {

struct DissipationChannel {
    double rate = 0.0;   // units of inverse time
    Matrix collapse_op;
    std::string label;
};

// Bare Hamiltonian h0, perturbation v with strength epsilon, and the
// attached dissipation channels. v enters the generator as epsilon * v.
struct LindbladModel {
    Matrix h0;
    Matrix v;
    double epsilon = 0.0;
    std::vector<DissipationChannel> channels;
    std::vector<std::string> basis_labels;

    Eigen::Index dim() const { return h0.rows(); }
    void validate(double herm_tol = 1e-10) const;  // throws on violation
};

// -i (I (x) H - H^T (x) I). Warns (stderr) on non-Hermitian H but still
// computes, for diagnostic use.
Matrix hamiltonian_superop(const Matrix& h);

// rate * (conj(O) (x) O - 1/2 I (x) O^dag O - 1/2 (O^dag O)^T (x) I)
Matrix dissipator_superop(double rate, const Matrix& collapse_op);
Matrix dissipator_superop(const DissipationChannel& ch);

// include_v=false: L0 = L_H0 + sum_k L_Dk.  include_v=true adds epsilon*L_V.
Matrix assemble(const LindbladModel& model, bool include_v);

// unvectorize(exp(L t) vec(rho0)), hermitized and trace-renormalized.
// A renormalization correction above 1e-8 signals an invalid generator.
DensityMatrix propagate(const Matrix& liouvillian, const DensityMatrix& rho0, double t);

}  // namespace qsync
