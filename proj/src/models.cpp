#include "qsync/models.hpp"

#include <cmath>

namespace qsync {

Matrix basis_op(Eigen::Index dim, Eigen::Index i, Eigen::Index j) {
    if (dim <= 0) throw std::invalid_argument("basis_op: dim must be positive");
    if (i < 0 || i >= dim || j < 0 || j >= dim)
        throw std::invalid_argument("basis_op: index out of range");
    Matrix m = Matrix::Zero(dim, dim);
    m(i, j) = 1.0;
    return m;
}

Matrix spin1_sz() {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 1.0;
    m(2, 2) = -1.0;
    return m;
}

Matrix spin1_sp() {
    const double r2 = std::sqrt(2.0);
    Matrix m = Matrix::Zero(3, 3);
    m(0, 1) = r2;
    m(1, 2) = r2;
    return m;
}

Matrix spin1_sm() { return spin1_sp().adjoint(); }

Matrix spin1_sx() { return 0.5 * (spin1_sp() + spin1_sm()); }

Matrix spin1_sy() { return Complex(0.0, -0.5) * (spin1_sp() - spin1_sm()); }

Matrix embed_first(const Matrix& op, Eigen::Index dim_second) {
    return kron(op, Matrix::Identity(dim_second, dim_second));
}

Matrix embed_second(Eigen::Index dim_first, const Matrix& op) {
    return kron(Matrix::Identity(dim_first, dim_first), op);
}

std::string to_string(PresetName name) {
    switch (name) {
        case PresetName::coupled_machines: return "coupled_machines";
        case PresetName::spin1_entrainment: return "spin1_entrainment";
        case PresetName::coupled_spin1: return "coupled_spin1";
        case PresetName::entanglement_machine: return "entanglement_machine";
    }
    throw std::invalid_argument("to_string: unknown preset");
}

PresetName preset_from_string(const std::string& name) {
    if (name == "coupled_machines") return PresetName::coupled_machines;
    if (name == "spin1_entrainment") return PresetName::spin1_entrainment;
    if (name == "coupled_spin1") return PresetName::coupled_spin1;
    if (name == "entanglement_machine") return PresetName::entanglement_machine;
    throw std::invalid_argument("unknown preset '" + name + "'");
}

void ThermalMachineParams::validate() const {
    const double rates[] = {gamma_h_a, gamma_h_b, gamma_c_a, gamma_c_b,
                            nbar_h_a, nbar_h_b, nbar_c_a, nbar_c_b};
    for (double r : rates)
        if (r < 0.0 || !std::isfinite(r))
            throw std::invalid_argument("ThermalMachineParams: rates and occupations must be >= 0");
    if (!std::isfinite(omega) || !std::isfinite(delta) || !std::isfinite(epsilon))
        throw std::invalid_argument("ThermalMachineParams: non-finite parameter");
}

namespace {

struct Transition {
    Eigen::Index lower, upper;  // 0-based levels
};

Transition hot_transition(BathWiring w) {
    switch (w) {
        case BathWiring::hot_23_cold_12: return {1, 2};
        case BathWiring::hot_13_cold_23: return {0, 2};
        case BathWiring::printed_both_23: return {1, 2};
    }
    throw std::invalid_argument("unknown wiring");
}

Transition cold_transition(BathWiring w) {
    switch (w) {
        case BathWiring::hot_23_cold_12: return {0, 1};
        case BathWiring::hot_13_cold_23: return {1, 2};
        case BathWiring::printed_both_23: return {1, 2};
    }
    throw std::invalid_argument("unknown wiring");
}

void add_thermal_pair(std::vector<DissipationChannel>& channels, double gamma, double nbar,
                      const Transition& t, bool first_subsystem, const std::string& label) {
    auto embed = [&](const Matrix& local) {
        return first_subsystem ? embed_first(local, 3) : embed_second(3, local);
    };
    channels.push_back({gamma * nbar, embed(basis_op(3, t.upper, t.lower)), label + "_absorb"});
    channels.push_back({gamma * (1.0 + nbar), embed(basis_op(3, t.lower, t.upper)),
                        label + "_emit"});
}

}  // namespace

ModelPreset build_coupled_machines(const ThermalMachineParams& params, BathWiring wiring) {
    params.validate();
    const Matrix id3 = Matrix::Identity(3, 3);

    Matrix ea = Matrix::Zero(3, 3);
    ea(1, 1) = 1.0;
    ea(2, 2) = 1.0 + params.omega;
    Matrix eb = Matrix::Zero(3, 3);
    eb(1, 1) = params.omega + params.delta;
    eb(2, 2) = 1.0 + params.omega;

    LindbladModel model;
    model.h0 = kron(ea, id3) + kron(id3, eb);
    // sigma_23^A sigma_21^B + sigma_12^A sigma_32^B + h.c. (1-based level labels)
    const Matrix t = kron(basis_op(3, 1, 2), basis_op(3, 1, 0)) +
                     kron(basis_op(3, 0, 1), basis_op(3, 2, 1));
    model.v = t + t.adjoint();
    model.epsilon = params.epsilon;

    add_thermal_pair(model.channels, params.gamma_h_a, params.nbar_h_a, hot_transition(wiring),
                     true, "hot_A");
    add_thermal_pair(model.channels, params.gamma_h_b, params.nbar_h_b, hot_transition(wiring),
                     false, "hot_B");
    add_thermal_pair(model.channels, params.gamma_c_a, params.nbar_c_a, cold_transition(wiring),
                     true, "cold_A");
    add_thermal_pair(model.channels, params.gamma_c_b, params.nbar_c_b, cold_transition(wiring),
                     false, "cold_B");

    ModelPreset preset;
    preset.name = PresetName::coupled_machines;
    preset.model = std::move(model);
    preset.basis_labels.reserve(9);
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b)
            preset.basis_labels.push_back("|" + std::to_string(a) + "," + std::to_string(b) + ">");
    preset.model.basis_labels = preset.basis_labels;
    return preset;
}

std::vector<DissipationChannel> default_thermal_channels_one_qutrit() {
    std::vector<DissipationChannel> channels;
    channels.push_back({0.01 * 1.0, basis_op(3, 2, 1), "hot_absorb"});
    channels.push_back({0.01 * 2.0, basis_op(3, 1, 2), "hot_emit"});
    channels.push_back({0.1 * 1e-3, basis_op(3, 1, 0), "cold_absorb"});
    channels.push_back({0.1 * (1.0 + 1e-3), basis_op(3, 0, 1), "cold_emit"});
    return channels;
}

std::vector<DissipationChannel> default_thermal_channels_two_qutrits() {
    std::vector<DissipationChannel> channels;
    for (bool first : {true, false}) {
        const std::string tag = first ? "_A" : "_B";
        for (const auto& local : default_thermal_channels_one_qutrit()) {
            const Matrix op = first ? embed_first(local.collapse_op, 3)
                                    : embed_second(3, local.collapse_op);
            channels.push_back({local.rate, op, local.label + tag});
        }
    }
    return channels;
}

ModelPreset build_spin1_entrainment(double omega_d, double omega_0, double eps,
                                    std::vector<DissipationChannel> channels) {
    LindbladModel model;
    model.h0 = (omega_d - omega_0) * spin1_sz();
    model.v = spin1_sy();
    model.epsilon = eps;
    model.channels = channels.empty() ? default_thermal_channels_one_qutrit()
                                      : std::move(channels);
    model.basis_labels = {"|+1>", "|0>", "|-1>"};

    ModelPreset preset;
    preset.name = PresetName::spin1_entrainment;
    preset.basis_labels = model.basis_labels;
    preset.model = std::move(model);
    return preset;
}

ModelPreset build_coupled_spin1(double omega_a, double omega_b, double eps,
                                std::vector<DissipationChannel> channels) {
    LindbladModel model;
    model.h0 = omega_a * embed_first(spin1_sz(), 3) + omega_b * embed_second(3, spin1_sz());
    model.v = Complex(0.0, 0.5) * (kron(spin1_sp(), spin1_sm()) - kron(spin1_sm(), spin1_sp()));
    model.epsilon = eps;
    model.channels = channels.empty() ? default_thermal_channels_two_qutrits()
                                      : std::move(channels);

    ModelPreset preset;
    preset.name = PresetName::coupled_spin1;
    for (const char* a : {"+1", "0", "-1"})
        for (const char* b : {"+1", "0", "-1"})
            preset.basis_labels.push_back(std::string("|") + a + "," + b + ">");
    model.basis_labels = preset.basis_labels;
    preset.model = std::move(model);
    return preset;
}

ModelPreset build_entanglement_machine(double eps_detuning, double g1, double g2, double g3,
                                       std::vector<DissipationChannel> channels) {
    LindbladModel model;
    Matrix ha = basis_op(3, 1, 1) + (1.0 + eps_detuning) * basis_op(3, 2, 2);
    Matrix hb = eps_detuning * basis_op(3, 1, 1) + (1.0 + eps_detuning) * basis_op(3, 2, 2);
    model.h0 = embed_first(ha, 3) + embed_second(3, hb);
    const Matrix t = g1 * kron(basis_op(3, 0, 2), basis_op(3, 2, 0)) +
                     g2 * kron(basis_op(3, 1, 2), basis_op(3, 1, 0)) +
                     g3 * kron(basis_op(3, 1, 0), basis_op(3, 1, 2));
    model.v = t + t.adjoint();
    model.epsilon = 1.0;  // couplings live in g1..g3
    model.channels = channels.empty() ? default_thermal_channels_two_qutrits()
                                      : std::move(channels);

    ModelPreset preset;
    preset.name = PresetName::entanglement_machine;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            preset.basis_labels.push_back("|" + std::to_string(a) + "," + std::to_string(b) + ">");
    model.basis_labels = preset.basis_labels;
    preset.model = std::move(model);
    return preset;
}

}  // namespace qsync
