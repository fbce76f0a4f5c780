// sweep.hpp — Parameter-sweep harness: config parsing, parallel grid
// evaluation over (epsilon, delta), CSV/JSON persistence.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsync/models.hpp"
#include "qsync/operator_core.hpp"

namespace qsync {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kThreadsEnvVar = "QSYNC_THREADS";
inline constexpr int kConfigSchemaVersion = 1;

enum class Observable { s_coh, l1, power, j_hot, j_cold, first_law_residual, spectral_gap };
enum class OutputFormat { csv, json };
enum class RowStatus { ok, degenerate_null_space, no_convergence };

std::string to_string(Observable o);
Observable observable_from_string(const std::string& s);
std::string to_string(RowStatus s);

struct Range {
    double min = 0.0;
    double max = 0.0;
    int count = 1;

    double at(int i) const;  // min + i * (max - min) / (count - 1)
};

struct SweepConfig {
    PresetName preset = PresetName::coupled_machines;
    ThermalMachineParams machine;     // base machine parameters (epsilon/delta swept)
    double spin_omega_0 = 1.0;        // base frequency for the spin presets
    BathWiring wiring = BathWiring::hot_23_cold_12;
    Range eps_range;
    Range delta_range;
    std::vector<Observable> observables;
    std::string output_path;
    OutputFormat format = OutputFormat::csv;
    int threads = 0;  // 0: env var, then hardware concurrency
    bool emit_timestamp = false;

    void validate() const;
    static SweepConfig from_json_text(const std::string& text);
    static SweepConfig from_json_file(const std::string& path);
};

struct SweepRow {
    double epsilon = 0.0;
    double delta = 0.0;
    std::optional<double> s_coh, l1, power, j_hot, j_cold, first_law_residual, spectral_gap;
    RowStatus status = RowStatus::ok;
};

struct SweepMetadata {
    std::string timestamp;     // wall clock; serialized only on request
    std::string code_version;
    double max_s_coh = 0.0;
    double max_abs_power = 0.0;
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepRow> rows;  // ordered by (eps index, delta index)
    SweepMetadata metadata;
};

// Grid points are independent and run on a worker pool; failures become
// flagged rows, never aborts. Output is deterministic for any thread count.
SweepResult run_sweep(const SweepConfig& cfg);

// Columns, exactly: epsilon, delta, s_coh, l1, power, j_hot, j_cold,
// first_law_residual, spectral_gap, status. Unrequested observables are
// empty. Floats carry 17 significant digits and round-trip bit exactly.
std::string to_csv(const SweepResult& result);
std::string to_json_text(const SweepResult& result);
void serialize(const SweepResult& result, OutputFormat format, const std::string& path);

int resolve_thread_count(int requested);

}  // namespace qsync
