#include "qsync/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qsync {

namespace {

bool eig_order(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    if (std::abs(a.imag()) != std::abs(b.imag())) return std::abs(a.imag()) < std::abs(b.imag());
    return a.imag() > b.imag();
}

// Largest-magnitude entry made real positive; keeps solver output deterministic
// up to the eigensolver itself.
void fix_phase(Eigen::Ref<Vector> v) {
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const Complex z = v(imax);
    if (std::abs(z) > 0.0) v *= std::conj(z) / std::abs(z);
}

// Single-linkage clusters of complex values within `radius`.
std::vector<std::vector<Eigen::Index>> cluster_values(const Vector& vals, double radius) {
    const Eigen::Index n = vals.size();
    std::vector<Eigen::Index> parent(n);
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
    std::function<Eigen::Index(Eigen::Index)> find = [&](Eigen::Index i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (std::abs(vals(i) - vals(j)) <= radius) parent[find(i)] = find(j);
    std::vector<std::vector<Eigen::Index>> clusters;
    std::vector<Eigen::Index> root_to_cluster(n, -1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index r = find(i);
        if (root_to_cluster[r] < 0) {
            root_to_cluster[r] = static_cast<Eigen::Index>(clusters.size());
            clusters.emplace_back();
        }
        clusters[root_to_cluster[r]].push_back(i);
    }
    return clusters;
}

}  // namespace

SpectralData eig_left_right(const Matrix& superop) {
    if (superop.rows() != superop.cols())
        throw std::invalid_argument("eig_left_right: matrix not square");
    if (!all_finite(superop)) throw std::invalid_argument("eig_left_right: non-finite entries");
    const Eigen::Index n = superop.rows();
    const double norm = superop.norm();

    Eigen::ComplexEigenSolver<Matrix> right(superop);
    Eigen::ComplexEigenSolver<Matrix> left(superop.adjoint());
    if (right.info() != Eigen::Success || left.info() != Eigen::Success)
        throw NumericalError("eig_left_right: eigensolver did not converge");

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const Complex ea = right.eigenvalues()(a), eb = right.eigenvalues()(b);
        if (ea != eb) return eig_order(ea, eb);
        return a < b;
    });

    SpectralData out;
    out.superop_norm = norm;
    out.eigenvalues.resize(n);
    out.right_vecs.resize(n, n);
    out.left_vecs.resize(n, n);
    out.overlaps.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.eigenvalues(k) = right.eigenvalues()(order[k]);
        out.right_vecs.col(k) = right.eigenvectors().col(order[k]);
        fix_phase(out.right_vecs.col(k));
    }

    // Pair left eigenvectors (eigenvalue lambda* of L^dag) to right modes.
    // Within an eigenvalue cluster the assignment maximizes |<l|r>|.
    double re_range = 0.0, im_range = 0.0;
    if (n > 0) {
        re_range = out.eigenvalues.real().maxCoeff() - out.eigenvalues.real().minCoeff();
        im_range = out.eigenvalues.imag().maxCoeff() - out.eigenvalues.imag().minCoeff();
    }
    const double radius = 1e-9 * std::hypot(re_range, im_range);
    const auto clusters = cluster_values(out.eigenvalues, radius);

    Vector left_as_right(n);  // conj of L^dag eigenvalues, comparable to lambda
    for (Eigen::Index j = 0; j < n; ++j) left_as_right(j) = std::conj(left.eigenvalues()(j));

    std::vector<Complex> centers(clusters.size());
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        Complex acc(0, 0);
        for (auto i : clusters[c]) acc += out.eigenvalues(i);
        centers[c] = acc / static_cast<double>(clusters[c].size());
    }
    std::vector<std::vector<Eigen::Index>> left_members(clusters.size());
    for (Eigen::Index j = 0; j < n; ++j) {
        std::size_t best = 0;
        double best_d = std::abs(left_as_right(j) - centers[0]);
        for (std::size_t c = 1; c < clusters.size(); ++c) {
            const double d = std::abs(left_as_right(j) - centers[c]);
            if (d < best_d) { best_d = d; best = c; }
        }
        left_members[best].push_back(j);
    }

    for (std::size_t c = 0; c < clusters.size(); ++c) {
        if (left_members[c].size() != clusters[c].size())
            throw NumericalError("eig_left_right: left/right eigenvalue pairing failed");
        auto rights = clusters[c];
        auto lefts = left_members[c];
        while (!rights.empty()) {
            double best = -1.0;
            std::size_t bi = 0, bj = 0;
            for (std::size_t i = 0; i < rights.size(); ++i)
                for (std::size_t j = 0; j < lefts.size(); ++j) {
                    const double ov = std::abs(
                        left.eigenvectors().col(lefts[j]).dot(out.right_vecs.col(rights[i])));
                    if (ov > best) { best = ov; bi = i; bj = j; }
                }
            Vector l = left.eigenvectors().col(lefts[bj]);
            const Complex ov = l.dot(out.right_vecs.col(rights[bi]));  // <l|r>
            if (std::abs(ov) > 0.0) l *= ov / std::abs(ov);            // make <l|r> real positive
            out.left_vecs.col(rights[bi]) = l;
            out.overlaps(rights[bi]) = l.dot(out.right_vecs.col(rights[bi]));
            rights.erase(rights.begin() + static_cast<std::ptrdiff_t>(bi));
            lefts.erase(lefts.begin() + static_cast<std::ptrdiff_t>(bj));
        }
    }

    // Residual invariants.
    const double tol = 1e-9 * std::max(norm, 1e-300);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double res_r =
            (superop * out.right_vecs.col(k) - out.eigenvalues(k) * out.right_vecs.col(k)).norm();
        const double res_l = (superop.adjoint() * out.left_vecs.col(k) -
                              std::conj(out.eigenvalues(k)) * out.left_vecs.col(k))
                                 .norm();
        if (res_r > tol || res_l > tol)
            throw NumericalError("eig_left_right: eigenpair residual exceeds tolerance");
    }
    return out;
}

SpectralData classify(SpectralData spec, double tol_real, double tol_imag) {
    spec.tags.resize(static_cast<std::size_t>(spec.eigenvalues.size()));
    for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
        const double re = spec.eigenvalues(k).real();
        const double im = spec.eigenvalues(k).imag();
        if (re > tol_real)
            throw NumericalError("classify: eigenvalue with positive real part " +
                                 std::to_string(re) + " (unphysical spectrum)");
        if (std::abs(re) <= tol_real)
            spec.tags[static_cast<std::size_t>(k)] =
                std::abs(im) <= tol_imag ? ModeTag::steady : ModeTag::oscillating_coherence;
        else
            spec.tags[static_cast<std::size_t>(k)] = ModeTag::decaying;
    }
    return spec;
}

SpectralData classify(SpectralData spec) {
    const double tol = 1e-8 * spec.superop_norm;
    return classify(std::move(spec), tol, tol);
}

bool spectrum_conjugate_symmetric(const SpectralData& spec, double tol) {
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
        if (std::abs(spec.eigenvalues(i).imag()) <= tol) continue;
        const Complex target = std::conj(spec.eigenvalues(i));
        double best = std::numeric_limits<double>::max();
        for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j)
            best = std::min(best, std::abs(spec.eigenvalues(j) - target));
        if (best > tol) return false;
    }
    return true;
}

Eigen::Index null_space_dimension(const Matrix& superop) {
    Eigen::BDCSVD<Matrix> svd(superop);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return 0;
    const double cutoff = 1e-10 * s(0);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) <= cutoff) ++k;
    return k;
}

DensityMatrix density_from_liouville_vector(const Vector& v, double eig_floor) {
    Matrix m = unvectorize(v);
    Eigen::Index imax = 0;
    m.diagonal().cwiseAbs().maxCoeff(&imax);
    const Complex z = m(imax, imax);
    if (std::abs(z) > 0.0) m *= std::conj(z) / std::abs(z);
    m = hermitize(m);
    const double tr = m.trace().real();
    if (std::abs(tr) <= 1e-10 * m.norm())
        throw NumericalError("density_from_liouville_vector: traceless null vector");
    m /= tr;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < eig_floor)
        throw NumericalError("density_from_liouville_vector: candidate not positive (min eig " +
                             std::to_string(min_eig) + ")");
    return DensityMatrix(std::move(m), 1e-10, 1e-10, eig_floor);
}

std::vector<DensityMatrix> steady_states(const Matrix& liouvillian) {
    if (liouvillian.rows() != liouvillian.cols())
        throw std::invalid_argument("steady_states: matrix not square");
    Eigen::BDCSVD<Matrix> svd(liouvillian, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cutoff = 1e-10 * s(0);
    std::vector<DensityMatrix> out;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > cutoff) continue;
        out.push_back(density_from_liouville_vector(svd.matrixV().col(i)));
    }
    if (out.empty()) throw NumericalError("steady_states: empty null space (unphysical input)");
    return out;
}

Matrix pseudoinverse(const Matrix& m) {
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cutoff = s.size() > 0 ? 1e-12 * s(0) : 0.0;
    RealVector inv = RealVector::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cutoff && s(i) > 0.0) inv(i) = 1.0 / s(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

PinvShiftResult pseudoinverse_shift(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("pseudoinverse_shift: dimension mismatch");
    const Matrix a_pinv = pseudoinverse(a);
    const Matrix sum_pinv = pseudoinverse(a + b);
    const Matrix delta_i = Matrix::Identity(a.rows(), a.cols()) - a_pinv * a;
    PinvShiftResult r;
    r.x_paper = (delta_i - a_pinv * b) * sum_pinv;
    r.x_def = sum_pinv - a_pinv;
    r.agreement = (r.x_paper - r.x_def).norm() / std::max(1.0, r.x_def.norm());
    return r;
}

}  // namespace qsync
