#include "qsync/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace qsync {

PerturbationReport first_order_steady_correction(const Matrix& l0, const Matrix& lv,
                                                 const DensityMatrix& rho0) {
    const Eigen::Index n = l0.rows();
    if (l0.cols() != n || lv.rows() != n || lv.cols() != n)
        throw std::invalid_argument("first_order_steady_correction: dimension mismatch");
    if (rho0.dim() * rho0.dim() != n)
        throw std::invalid_argument("first_order_steady_correction: state dimension mismatch");

    const Vector v0 = vectorize(rho0.mat());
    const double residual = (l0 * v0).norm();
    if (residual > 1e-9 * l0.norm())
        throw NumericalError("first_order_steady_correction: rho0 is not a steady state of L0 "
                             "(residual " + std::to_string(residual) + ")");

    Matrix rho1 = -unvectorize(Vector(pseudoinverse(l0) * (lv * v0)));
    const double tr = std::abs(rho1.trace());
    if (tr > 1e-10)
        throw NumericalError("first_order_steady_correction: correction has trace " +
                             std::to_string(tr));
    const double hdev = hermiticity_deviation(rho1);
    if (hdev > 1e-10)
        throw NumericalError("first_order_steady_correction: correction not Hermitian (deviation " +
                             std::to_string(hdev) + ")");
    return PerturbationReport{rho0, std::move(rho1), Matrix(), Matrix(), 0.0, 0.0, 0.0};
}

PerturbationReport split_correction(const LindbladModel& model, const DensityMatrix& rho0) {
    model.validate();
    const Matrix l_h0 = hamiltonian_superop(model.h0);
    Matrix l_d = Matrix::Zero(l_h0.rows(), l_h0.cols());
    for (const auto& ch : model.channels) l_d += dissipator_superop(ch);
    const Matrix lv = hamiltonian_superop(model.v);

    PerturbationReport report = first_order_steady_correction(l_h0 + l_d, lv, rho0);
    report.epsilon = model.epsilon;

    const PinvShiftResult shift = pseudoinverse_shift(l_h0, l_d);
    const Vector y = lv * vectorize(rho0.mat());
    report.split_h = -unvectorize(Vector(pseudoinverse(l_h0) * y));
    report.split_x = -unvectorize(Vector(shift.x_paper * y));
    report.shift_agreement = shift.agreement;
    report.split_discrepancy = (report.split_h + report.split_x - report.rho1).norm();
    return report;
}

Complex first_order_eigenvalue(const SpectralData& spec, const Matrix& lv, Eigen::Index mu,
                               EigvalVariant variant) {
    const Eigen::Index n = spec.eigenvalues.size();
    if (mu < 0 || mu >= n) throw std::invalid_argument("first_order_eigenvalue: mode out of range");
    if (lv.rows() != n || lv.cols() != n)
        throw std::invalid_argument("first_order_eigenvalue: superoperator dimension mismatch");

    if (variant == EigvalVariant::standard) {
        const Complex den = spec.overlaps(mu);
        if (std::abs(den) < 1e-12)
            throw NumericalError("first_order_eigenvalue: vanishing overlap <l|r>");
        return spec.left_vecs.col(mu).dot(lv * spec.right_vecs.col(mu)) / den;
    }
    const Vector l_sum = spec.left_vecs.rowwise().sum();
    const Complex den = l_sum.dot(spec.right_vecs.col(mu));
    if (std::abs(den) < 1e-12)
        throw NumericalError("first_order_eigenvalue: vanishing summed denominator");
    return l_sum.dot(lv * spec.right_vecs.col(mu)) / den;
}

namespace {

constexpr double kDegenerateGap = 1e-10;
constexpr int kFixedPointMaxIter = 100;
constexpr double kFixedPointTol = 1e-12;

std::vector<std::vector<Eigen::Index>> cluster_sorted(const RealVector& p) {
    std::vector<std::vector<Eigen::Index>> clusters;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (!clusters.empty() && p(i) - p(clusters.back().back()) < kDegenerateGap)
            clusters.back().push_back(i);
        else
            clusters.push_back({i});
    }
    return clusters;
}

}  // namespace

Matrix BwptReport::reconstruct(int up_to_order) const {
    if (up_to_order < 0 || up_to_order > order)
        throw std::invalid_argument("BwptReport::reconstruct: order out of range");
    if (up_to_order == 0) return rho_order0;
    const Eigen::Index d = p0.size();
    Matrix out = Matrix::Zero(d, d);
    for (Eigen::Index n = 0; n < d; ++n) {
        double p = p0(n) + epsilon * p1(n);
        Vector v = basis.col(n) + epsilon * vec1.col(n);
        if (up_to_order >= 2) {
            p += epsilon * epsilon * p2(n);
            v += epsilon * epsilon * vec2.col(n);
        }
        v.normalize();
        out += p * v * v.adjoint();
    }
    return out;
}

BwptReport bwpt_corrections(const DensityMatrix& rho0, const Matrix& v, double epsilon,
                            int order) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("bwpt_corrections: order must be 1 or 2");
    const Eigen::Index d = rho0.dim();
    if (v.rows() != d || v.cols() != d)
        throw std::invalid_argument("bwpt_corrections: perturbation dimension mismatch");
    if (!is_hermitian(v, 1e-10))
        throw std::invalid_argument("bwpt_corrections: perturbation not Hermitian");

    Eigen::SelfAdjointEigenSolver<Matrix> es(rho0.mat());
    if (es.info() != Eigen::Success)
        throw NumericalError("bwpt_corrections: eigensolver did not converge");
    RealVector p = es.eigenvalues();  // ascending
    Matrix basis = es.eigenvectors();

    // Degenerate clusters: rotate each cluster into the eigenbasis of the
    // restricted perturbation so intra-cluster couplings vanish.
    const auto clusters = cluster_sorted(p);
    std::vector<Eigen::Index> cluster_of(static_cast<std::size_t>(d));
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        for (auto i : clusters[c]) cluster_of[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(c);
        const auto sz = static_cast<Eigen::Index>(clusters[c].size());
        if (sz < 2) continue;
        const Eigen::Index lo = clusters[c].front();
        Matrix block = basis.middleCols(lo, sz).adjoint() * v * basis.middleCols(lo, sz);
        Eigen::SelfAdjointEigenSolver<Matrix> bes(hermitize(block));
        basis.middleCols(lo, sz) = basis.middleCols(lo, sz) * bes.eigenvectors();
    }

    const Matrix vb = basis.adjoint() * v * basis;  // perturbation in unperturbed basis

    RealVector p1(d), p2 = RealVector::Zero(d);
    RealVector p_solved(d);
    for (Eigen::Index n = 0; n < d; ++n) {
        p1(n) = vb(n, n).real();
        double x = p(n);
        if (order >= 2) {
            bool converged = false;
            for (int it = 0; it < kFixedPointMaxIter; ++it) {
                double s2 = 0.0;
                for (Eigen::Index m = 0; m < d; ++m) {
                    if (cluster_of[static_cast<std::size_t>(m)] ==
                        cluster_of[static_cast<std::size_t>(n)])
                        continue;
                    const double den = x - p(m);
                    if (std::abs(den) < kDegenerateGap)
                        throw NumericalError("bwpt_corrections: near-degenerate denominator "
                                             "outside declared cluster");
                    s2 += std::norm(vb(m, n)) / den;
                }
                const double next = p(n) + epsilon * p1(n) + epsilon * epsilon * s2;
                if (std::abs(next - x) < kFixedPointTol) {
                    x = next;
                    p2(n) = s2;
                    converged = true;
                    break;
                }
                x = next;
            }
            if (!converged)
                throw NumericalError("bwpt_corrections: fixed point did not converge");
        } else {
            x = p(n) + epsilon * p1(n);
        }
        p_solved(n) = x;
    }

    Matrix vec1 = Matrix::Zero(d, d), vec2 = Matrix::Zero(d, d);
    for (Eigen::Index n = 0; n < d; ++n) {
        Vector c1 = Vector::Zero(d);
        for (Eigen::Index m = 0; m < d; ++m) {
            if (cluster_of[static_cast<std::size_t>(m)] == cluster_of[static_cast<std::size_t>(n)])
                continue;
            const double den = p_solved(n) - p(m);
            if (std::abs(den) < kDegenerateGap)
                throw NumericalError("bwpt_corrections: near-degenerate denominator outside "
                                     "declared cluster");
            c1(m) = vb(m, n) / den;
        }
        vec1.col(n) = basis * c1;
        if (order >= 2) {
            Vector c2 = Vector::Zero(d);
            for (Eigen::Index j = 0; j < d; ++j) {
                if (cluster_of[static_cast<std::size_t>(j)] ==
                    cluster_of[static_cast<std::size_t>(n)])
                    continue;
                Complex acc(0, 0);
                for (Eigen::Index m = 0; m < d; ++m) {
                    if (cluster_of[static_cast<std::size_t>(m)] ==
                        cluster_of[static_cast<std::size_t>(n)])
                        continue;
                    acc += vb(j, m) / (p_solved(n) - p(j)) * vb(m, n) / (p_solved(n) - p(m));
                }
                c2(j) = acc;
            }
            vec2.col(n) = basis * c2;
        }
    }

    BwptReport report;
    report.p0 = p;
    report.p1 = p1;
    if (order >= 2) report.p2 = p2;
    report.basis = basis;
    report.vec1 = vec1;
    if (order >= 2) report.vec2 = vec2;
    report.rho_order0 = rho0.mat();
    report.epsilon = epsilon;
    report.order = order;

    Matrix rho1 = Matrix::Zero(d, d);
    for (Eigen::Index n = 0; n < d; ++n) {
        const Vector b = basis.col(n);
        rho1 += p1(n) * b * b.adjoint() + p(n) * (vec1.col(n) * b.adjoint() + b * vec1.col(n).adjoint());
    }
    report.rho_order1 = rho1;
    return report;
}

PassiveResult passive_state(const DensityMatrix& rho, const Matrix& h) {
    if (h.rows() != rho.dim() || h.cols() != rho.dim())
        throw std::invalid_argument("passive_state: Hamiltonian dimension mismatch");
    if (!is_hermitian(h, 1e-10))
        throw std::invalid_argument("passive_state: Hamiltonian not Hermitian");

    Eigen::SelfAdjointEigenSolver<Matrix> er(rho.mat());
    Eigen::SelfAdjointEigenSolver<Matrix> eh(h);
    RealVector populations = er.eigenvalues();  // ascending
    std::sort(populations.data(), populations.data() + populations.size(),
              std::greater<double>());

    const Eigen::Index d = rho.dim();
    Matrix passive = Matrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        const Vector b = eh.eigenvectors().col(k);  // ascending energies
        passive += populations(k) * b * b.adjoint();
    }
    double ergotropy = ((rho.mat() - passive) * h).trace().real();
    if (ergotropy < 0.0) {
        if (ergotropy < -1e-12)
            throw NumericalError("passive_state: negative ergotropy " + std::to_string(ergotropy));
        ergotropy = 0.0;
    }
    return PassiveResult{DensityMatrix(std::move(passive)), ergotropy};
}

}  // namespace qsync
