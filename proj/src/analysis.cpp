#include "qsync/analysis.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qsync/spectral.hpp"

namespace qsync {

namespace {

double spectral_norm(const Matrix& m) {
    if (m.size() == 0 || m.norm() == 0.0) return 0.0;
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

}  // namespace

double relative_entropy_coherence(const DensityMatrix& rho, const Matrix& basis) {
    const double s = entropy_of_hermitian(dephase_in_basis(rho.mat(), basis)) -
                     entropy_of_hermitian(rho.mat());
    if (s < 0.0) {
        if (s < -1e-12)
            throw NumericalError("relative_entropy_coherence: negative value " + std::to_string(s));
        return 0.0;
    }
    return s;
}

double relative_entropy_coherence(const DensityMatrix& rho) {
    return relative_entropy_coherence(rho, Matrix::Identity(rho.dim(), rho.dim()));
}

double l1_coherence(const DensityMatrix& rho, const Matrix& basis) {
    const Matrix m = basis.adjoint() * rho.mat() * basis;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j) sum += std::abs(m(i, j));
    return sum;
}

double l1_coherence(const DensityMatrix& rho) {
    return l1_coherence(rho, Matrix::Identity(rho.dim(), rho.dim()));
}

Matrix coherence_basis(const LindbladModel& model) {
    const Eigen::Index d = model.dim();
    Matrix offdiag = model.h0;
    offdiag.diagonal().setZero();
    if (offdiag.cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + model.h0.norm()))
        return Matrix::Identity(d, d);
    Eigen::SelfAdjointEigenSolver<Matrix> es(model.h0);
    return es.eigenvectors();
}

SyncReport sync_report(const DensityMatrix& rho, const LindbladModel& model) {
    const Matrix basis = coherence_basis(model);
    SyncReport report;
    report.s_coh = relative_entropy_coherence(rho, basis);
    report.l1_coh = l1_coherence(rho, basis);
    report.limit_cycle_valid = limit_cycle_check(model);
    report.basis_note = basis.isIdentity(1e-14) ? "declared basis (h0 diagonal)"
                                                : "h0 eigenbasis";
    return report;
}

bool limit_cycle_check(const LindbladModel& model) {
    const Matrix basis = coherence_basis(model);
    for (const auto& state : steady_states(assemble(model, false)))
        if (l1_coherence(state, basis) > 1e-10) return false;
    return true;
}

std::string to_string(SyncPrediction p) {
    switch (p) {
        case SyncPrediction::no_phase_sync_possible: return "no_phase_sync_possible";
        case SyncPrediction::sync_possible_energy_conserving:
            return "sync_possible_energy_conserving";
        case SyncPrediction::sync_possible_energy_nonconserving:
            return "sync_possible_energy_nonconserving";
    }
    throw std::invalid_argument("to_string: unknown prediction");
}

StructureReport structure_analysis(const Matrix& h0, const Matrix& v, double cluster_tol,
                                   double energy_tol) {
    if (!is_hermitian(h0, 1e-10)) throw std::invalid_argument("structure_analysis: h0 not Hermitian");
    if (!is_hermitian(v, 1e-10)) throw std::invalid_argument("structure_analysis: v not Hermitian");
    if (h0.rows() != v.rows()) throw std::invalid_argument("structure_analysis: dimension mismatch");

    StructureReport report;
    report.commutator_norm = spectral_norm(commutator(h0, v));
    report.energy_conserving =
        report.commutator_norm <= energy_tol * spectral_norm(h0) * spectral_norm(v);

    Eigen::SelfAdjointEigenSolver<Matrix> es(h0);
    const RealVector& evals = es.eigenvalues();
    const Eigen::Index d = evals.size();
    const double radius = cluster_tol * (evals(d - 1) - evals(0));

    std::vector<std::vector<Eigen::Index>> clusters;
    for (Eigen::Index i = 0; i < d; ++i) {
        if (!clusters.empty() && evals(i) - evals(clusters.back().back()) <= radius)
            clusters.back().push_back(i);
        else
            clusters.push_back({i});
    }
    bool all_simple = true;
    for (const auto& c : clusters) {
        double mean = 0.0;
        for (auto i : c) mean += evals(i);
        mean /= static_cast<double>(c.size());
        report.degeneracy_clusters.push_back({mean, static_cast<int>(c.size())});
        if (c.size() > 1) all_simple = false;
    }

    // Block confinement: no V matrix elements between distinct clusters.
    double max_cross = 0.0;
    for (std::size_t a = 0; a < clusters.size(); ++a)
        for (std::size_t b = 0; b < clusters.size(); ++b) {
            if (a == b) continue;
            Matrix pa_v_pb(static_cast<Eigen::Index>(clusters[a].size()),
                           static_cast<Eigen::Index>(clusters[b].size()));
            for (std::size_t i = 0; i < clusters[a].size(); ++i)
                for (std::size_t j = 0; j < clusters[b].size(); ++j)
                    pa_v_pb(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                        es.eigenvectors().col(clusters[a][i]).dot(v *
                            es.eigenvectors().col(clusters[b][j]));
            max_cross = std::max(max_cross, spectral_norm(pa_v_pb));
        }
    report.v_block_confined = max_cross <= energy_tol * std::max(spectral_norm(v), 1e-300);

    if (report.energy_conserving)
        report.prediction = all_simple ? SyncPrediction::no_phase_sync_possible
                                       : SyncPrediction::sync_possible_energy_conserving;
    else
        report.prediction = SyncPrediction::sync_possible_energy_nonconserving;
    return report;
}

bool check_strong_symmetry(const Matrix& s, const LindbladModel& model, double tol_rel) {
    if (s.rows() != model.dim() || s.cols() != model.dim())
        throw std::invalid_argument("check_strong_symmetry: dimension mismatch");
    const double unit_dev =
        (s.adjoint() * s - Matrix::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff();
    if (unit_dev > 1e-10)
        throw std::invalid_argument("check_strong_symmetry: candidate not unitary (deviation " +
                                    std::to_string(unit_dev) + ")");
    const Matrix h = model.h0 + model.epsilon * model.v;
    if (spectral_norm(commutator(s, h)) > tol_rel * std::max(spectral_norm(h), 1e-300))
        return false;
    for (const auto& ch : model.channels)
        if (spectral_norm(commutator(s, ch.collapse_op)) >
            tol_rel * std::max(spectral_norm(ch.collapse_op), 1e-300))
            return false;
    return true;
}

namespace {

double current_from_channels(const std::vector<DissipationChannel>& channels,
                             const std::string& prefix, const Matrix& rho, const Matrix& h0) {
    double j = 0.0;
    for (const auto& ch : channels) {
        if (ch.label.rfind(prefix, 0) != 0) continue;
        const Matrix& o = ch.collapse_op;
        const Matrix oo = o.adjoint() * o;
        const Matrix d = ch.rate * (o * rho * o.adjoint() - 0.5 * anticommutator(oo, rho));
        j += (d * h0).trace().real();
    }
    return j;
}

double diag_sum(const Matrix& rho, std::initializer_list<int> idx) {
    double s = 0.0;
    for (int i : idx) s += rho(i, i).real();
    return s;
}

}  // namespace

ThermoReport thermo_report(const DensityMatrix& rho_ss, const ThermalMachineParams& params,
                           BathWiring wiring) {
    const ModelPreset preset = build_coupled_machines(params, wiring);
    const Matrix l = assemble(preset.model, true);
    const double residual = (l * vectorize(rho_ss.mat())).norm();
    if (residual > 1e-9 * l.norm())
        throw NumericalError("thermo_report: input is not a steady state (residual " +
                             std::to_string(residual) + ")");

    const Matrix& rho = rho_ss.mat();
    const Matrix& h0 = preset.model.h0;
    const Matrix h = h0 + params.epsilon * preset.model.v;

    ThermoReport report;
    report.power = (Complex(0.0, -1.0) * (commutator(h, rho) * h0).trace()).real();
    report.j_hot = current_from_channels(preset.model.channels, "hot_A", rho, h0) +
                   current_from_channels(preset.model.channels, "hot_B", rho, h0);
    report.j_cold = current_from_channels(preset.model.channels, "cold_A", rho, h0) +
                    current_from_channels(preset.model.channels, "cold_B", rho, h0);
    report.first_law_residual = report.power + report.j_hot + report.j_cold;

    // Closed forms, verbatim (global basis |1> = |1,1>, ..., |9> = |3,3>;
    // 0-based matrix indices below). The power expression agrees with the
    // generic form; the current expressions do not (documented mismatch).
    report.power_closed_form =
        2.0 * params.epsilon * params.delta * (rho(2, 4) + rho(6, 4)).imag();
    report.j_hot_closed_form =
        params.gamma_h_a * (1.0 + params.omega) *
            (params.nbar_h_a * diag_sum(rho, {6, 7, 8}) -
             (1.0 + params.nbar_h_a) * diag_sum(rho, {0, 1, 2})) +
        params.gamma_h_b * (1.0 + params.omega) *
            (params.nbar_h_b * diag_sum(rho, {2, 5, 8}) -
             (1.0 + params.nbar_h_b) * diag_sum(rho, {0, 3, 6}));
    report.j_cold_closed_form =
        params.gamma_c_a * (params.nbar_c_a * diag_sum(rho, {6, 7, 8}) -
                            (1.0 + params.nbar_c_a) * diag_sum(rho, {3, 4, 5})) +
        (params.omega + params.delta) * params.gamma_c_b *
            (params.nbar_c_b * diag_sum(rho, {2, 5, 8}) -
             (1.0 + params.nbar_c_b) * diag_sum(rho, {1, 4, 7}));
    return report;
}

}  // namespace qsync
