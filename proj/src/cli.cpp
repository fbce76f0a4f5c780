#include "qsync/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qsync/analysis.hpp"
#include "qsync/liouvillian.hpp"
#include "qsync/models.hpp"
#include "qsync/perturbation.hpp"
#include "qsync/spectral.hpp"
#include "qsync/sweep.hpp"

namespace qsync {

namespace {

struct PresetOptions {
    std::string preset = "coupled_machines";
    ThermalMachineParams machine;
    std::string wiring = "hot_23_cold_12";
    bool epsilon_given = false;
    // spin presets
    double omega_d = 1.05, omega_0 = 1.0;
    double omega_a = 1.0, omega_b = 1.0;
    double eps_drive = 0.05;  // spin-preset default when --epsilon is omitted
    // entanglement machine
    double eps_detuning = 0.1, g1 = 0.05, g2 = 0.05, g3 = 0.05;
};

void add_preset_options(CLI::App* cmd, PresetOptions& o) {
    cmd->add_option("--preset", o.preset,
                    "coupled_machines | spin1_entrainment | coupled_spin1 | entanglement_machine");
    cmd->add_option("--omega", o.machine.omega, "machine level-spacing parameter");
    cmd->add_option("--delta", o.machine.delta, "machine detuning");
    cmd->add_option("--epsilon", o.machine.epsilon, "coupling strength")
        ->each([&o](const std::string&) { o.epsilon_given = true; });
    cmd->add_option("--gamma-h", o.machine.gamma_h_a, "hot-bath rate (both machines)");
    cmd->add_option("--gamma-c", o.machine.gamma_c_a, "cold-bath rate (both machines)");
    cmd->add_option("--nbar-h", o.machine.nbar_h_a, "hot-bath occupation (both machines)");
    cmd->add_option("--nbar-c", o.machine.nbar_c_a, "cold-bath occupation (both machines)");
    cmd->add_option("--wiring", o.wiring, "hot_23_cold_12 | hot_13_cold_23 | printed_both_23");
    cmd->add_option("--omega-d", o.omega_d, "drive frequency (spin1_entrainment)");
    cmd->add_option("--omega-0", o.omega_0, "natural frequency (spin1_entrainment)");
    cmd->add_option("--omega-a", o.omega_a, "frequency of spin A (coupled_spin1)");
    cmd->add_option("--omega-b", o.omega_b, "frequency of spin B (coupled_spin1)");
    cmd->add_option("--eps-detuning", o.eps_detuning, "level detuning (entanglement_machine)");
    cmd->add_option("--g1", o.g1, "coupling g1 (entanglement_machine)");
    cmd->add_option("--g2", o.g2, "coupling g2 (entanglement_machine)");
    cmd->add_option("--g3", o.g3, "coupling g3 (entanglement_machine)");
}

BathWiring parse_wiring(const std::string& w) {
    if (w == "hot_23_cold_12") return BathWiring::hot_23_cold_12;
    if (w == "hot_13_cold_23") return BathWiring::hot_13_cold_23;
    if (w == "printed_both_23") return BathWiring::printed_both_23;
    throw std::invalid_argument("unknown wiring '" + w + "'");
}

ModelPreset make_preset(PresetOptions& o) {
    // propagate the collective machine flags to both subsystems
    o.machine.gamma_h_b = o.machine.gamma_h_a;
    o.machine.gamma_c_b = o.machine.gamma_c_a;
    o.machine.nbar_h_b = o.machine.nbar_h_a;
    o.machine.nbar_c_b = o.machine.nbar_c_a;
    const double spin_eps = o.epsilon_given ? o.machine.epsilon : o.eps_drive;
    switch (preset_from_string(o.preset)) {
        case PresetName::coupled_machines:
            return build_coupled_machines(o.machine, parse_wiring(o.wiring));
        case PresetName::spin1_entrainment:
            return build_spin1_entrainment(o.omega_d, o.omega_0, spin_eps);
        case PresetName::coupled_spin1:
            return build_coupled_spin1(o.omega_a, o.omega_b, spin_eps);
        case PresetName::entanglement_machine:
            return build_entanglement_machine(o.eps_detuning, o.g1, o.g2, o.g3);
    }
    throw std::invalid_argument("unknown preset");
}

const char* tag_name(ModeTag t) {
    switch (t) {
        case ModeTag::steady: return "steady";
        case ModeTag::oscillating_coherence: return "oscillating_coherence";
        case ModeTag::decaying: return "decaying";
    }
    return "?";
}

int cmd_spectrum(PresetOptions& o, std::ostream& out) {
    const ModelPreset preset = make_preset(o);
    const Matrix l = assemble(preset.model, true);
    const SpectralData spec = classify(eig_left_right(l));
    out << "# Liouvillian spectrum, preset " << to_string(preset.name) << " (dim "
        << l.rows() << ")\n";
    out << std::setw(4) << "idx" << std::setw(24) << "Re(lambda)" << std::setw(24)
        << "Im(lambda)" << std::setw(14) << "|<l|r>|" << "  tag\n";
    int n_steady = 0, n_osc = 0;
    for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
        const auto tag = spec.tags[static_cast<std::size_t>(k)];
        if (tag == ModeTag::steady) ++n_steady;
        if (tag == ModeTag::oscillating_coherence) ++n_osc;
        out << std::setw(4) << k << std::setw(24) << std::setprecision(15)
            << spec.eigenvalues(k).real() << std::setw(24) << spec.eigenvalues(k).imag()
            << std::setw(14) << std::setprecision(6) << std::abs(spec.overlaps(k)) << "  "
            << tag_name(tag) << "\n";
    }
    out << "steady modes: " << n_steady << ", oscillating coherences: " << n_osc << "\n";
    return 0;
}

int cmd_steady(PresetOptions& o, std::ostream& out) {
    const ModelPreset preset = make_preset(o);
    const Matrix l = assemble(preset.model, true);
    const auto states = steady_states(l);
    out << "# steady state, preset " << to_string(preset.name) << "\n";
    out << "steady states found: " << states.size() << "\n";
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& rho = states[k];
        out << "state " << k << " populations:";
        for (Eigen::Index i = 0; i < rho.dim(); ++i)
            out << ' ' << std::setprecision(10) << rho.mat()(i, i).real();
        out << "\n";
        const SyncReport sync = sync_report(rho, preset.model);
        out << "s_coh = " << std::setprecision(12) << sync.s_coh << "\n";
        out << "l1_coherence = " << sync.l1_coh << "\n";
        out << "limit_cycle_valid = " << (sync.limit_cycle_valid ? "true" : "false") << "\n";
        out << "basis = " << sync.basis_note << "\n";
        if (preset.name == PresetName::coupled_machines) {
            const ThermoReport thermo = thermo_report(rho, o.machine, parse_wiring(o.wiring));
            out << "power = " << thermo.power << "\n";
            out << "j_hot = " << thermo.j_hot << "\n";
            out << "j_cold = " << thermo.j_cold << "\n";
            out << "first_law_residual = " << thermo.first_law_residual << "\n";
            out << "power_closed_form = " << thermo.power_closed_form << "\n";
            out << "j_hot_closed_form = " << thermo.j_hot_closed_form << "\n";
            out << "j_cold_closed_form = " << thermo.j_cold_closed_form << "\n";
        }
    }
    return 0;
}

int cmd_analyze(PresetOptions& o, std::ostream& out) {
    const ModelPreset preset = make_preset(o);
    const StructureReport report = structure_analysis(preset.model.h0, preset.model.v);
    out << "# structure analysis, preset " << to_string(preset.name) << "\n";
    out << "commutator_norm = " << std::setprecision(12) << report.commutator_norm << "\n";
    out << "energy_conserving = " << (report.energy_conserving ? "true" : "false") << "\n";
    out << "degeneracy clusters:";
    for (const auto& c : report.degeneracy_clusters)
        out << " (" << std::setprecision(10) << c.eigenvalue << ", x" << c.multiplicity << ")";
    out << "\n";
    out << "v_block_confined = " << (report.v_block_confined ? "true" : "false") << "\n";
    out << "prediction = " << to_string(report.prediction) << "\n";
    switch (report.prediction) {
        case SyncPrediction::no_phase_sync_possible:
            out << "verdict: energy-conserving coupling on a non-degenerate spectrum; no "
                   "steady-state coherence can be generated\n";
            break;
        case SyncPrediction::sync_possible_energy_conserving:
            out << "verdict: energy conserving with degenerate levels; coherence can be "
                   "generated inside the degenerate subspace at zero energy cost\n";
            break;
        case SyncPrediction::sync_possible_energy_nonconserving:
            out << "verdict: energy non-conserving coupling; coherence can be generated at "
                   "the cost of power\n";
            break;
    }
    return 0;
}

int cmd_perturb(PresetOptions& o, std::vector<double> eps_values, std::ostream& out) {
    const ModelPreset preset = make_preset(o);
    const Matrix l0 = assemble(preset.model, false);
    const Matrix lv = hamiltonian_superop(preset.model.v);
    const auto states = steady_states(l0);
    if (states.size() != 1)
        throw NumericalError("perturb: unperturbed steady state is not unique (" +
                             std::to_string(states.size()) + " found)");
    const DensityMatrix& rho0 = states.front();
    const PerturbationReport report = split_correction(preset.model, rho0);
    out << "# first-order steady-state correction, preset " << to_string(preset.name) << "\n";
    out << "trace(rho1) = " << std::setprecision(6) << std::abs(report.rho1.trace()) << "\n";
    out << "hermiticity deviation = " << hermiticity_deviation(report.rho1) << "\n";
    out << "||rho1|| = " << std::setprecision(12) << report.rho1.norm() << "\n";
    out << "pseudoinverse-shift agreement = " << report.shift_agreement << "\n";
    out << "split discrepancy ||split_h + split_x - rho1|| = " << report.split_discrepancy
        << "\n";
    out << "convergence table (r(eps) = ||rho_exact - rho0 - eps*rho1||_F):\n";
    out << std::setw(14) << "eps" << std::setw(18) << "r(eps)" << std::setw(14)
        << "ratio" << "\n";
    if (eps_values.empty()) eps_values = {1e-3, 5e-4, 2.5e-4, 1.25e-4};
    double prev = 0.0;
    for (double eps : eps_values) {
        LindbladModel scaled = preset.model;
        scaled.epsilon = eps;
        const auto exact = steady_states(assemble(scaled, true));
        if (exact.size() != 1)
            throw NumericalError("perturb: perturbed steady state is not unique");
        const double r = (exact.front().mat() - rho0.mat() - eps * report.rho1).norm();
        out << std::setw(14) << std::setprecision(6) << eps << std::setw(18) << r
            << std::setw(14);
        if (prev > 0.0 && r > 0.0)
            out << prev / r;
        else
            out << "-";
        out << "\n";
        prev = r;
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, int threads, const std::string& output_override,
              std::ostream& out) {
    SweepConfig cfg = SweepConfig::from_json_file(config_path);
    if (threads > 0) cfg.threads = threads;
    if (!output_override.empty()) cfg.output_path = output_override;
    if (cfg.output_path.empty())
        throw std::invalid_argument("sweep: no output path (config `output` or --output)");
    const SweepResult result = run_sweep(cfg);
    serialize(result, cfg.format, cfg.output_path);
    int flagged = 0;
    for (const auto& r : result.rows)
        if (r.status != RowStatus::ok) ++flagged;
    out << "sweep complete: " << result.rows.size() << " grid points, " << flagged
        << " flagged\n";
    out << "max s_coh = " << std::setprecision(12) << result.metadata.max_s_coh << "\n";
    out << "max |power| = " << result.metadata.max_abs_power << "\n";
    out << "wrote " << cfg.output_path << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Liouville-space analysis of open quantum systems: spectra, steady states, "
                 "synchronisation measures, perturbation theory, thermal-machine sweeps"};
    app.require_subcommand(1);

    PresetOptions opts;
    auto* spectrum = app.add_subcommand("spectrum", "classified Liouvillian eigenspectrum");
    add_preset_options(spectrum, opts);
    auto* steady = app.add_subcommand("steady", "steady state, sync and thermodynamic report");
    add_preset_options(steady, opts);
    auto* analyze = app.add_subcommand("analyze", "energy-conservation / degeneracy structure");
    add_preset_options(analyze, opts);
    auto* perturb = app.add_subcommand("perturb", "first-order correction and convergence table");
    add_preset_options(perturb, opts);
    std::vector<double> eps_values;
    perturb->add_option("--eps-values", eps_values, "epsilons for the convergence table");

    auto* sweep = app.add_subcommand("sweep", "grid sweep from a JSON config");
    std::string config_path, output_override;
    int threads = 0;
    sweep->add_option("--config", config_path, "JSON sweep configuration")->required();
    sweep->add_option("--threads", threads, "worker threads (overrides config and env)");
    sweep->add_option("--output", output_override, "output path override");

    std::vector<std::string> argv(args);
    try {
        std::reverse(argv.begin(), argv.end());
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream usage;
        const int code = app.exit(e, out, usage);
        err << usage.str();
        return code == 0 ? 0 : 1;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(opts, out);
        if (steady->parsed()) return cmd_steady(opts, out);
        if (analyze->parsed()) return cmd_analyze(opts, out);
        if (perturb->parsed()) return cmd_perturb(opts, eps_values, out);
        if (sweep->parsed()) return cmd_sweep(config_path, threads, output_override, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace qsync
