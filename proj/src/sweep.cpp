#include "qsync/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <json.hpp>

#include "qsync/analysis.hpp"
#include "qsync/spectral.hpp"

namespace qsync {

namespace {

bool contains(const std::vector<Observable>& set, Observable o) {
    for (auto x : set)
        if (x == o) return true;
    return false;
}

bool is_thermo(Observable o) {
    return o == Observable::power || o == Observable::j_hot || o == Observable::j_cold ||
           o == Observable::first_law_residual;
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace

std::string to_string(Observable o) {
    switch (o) {
        case Observable::s_coh: return "s_coh";
        case Observable::l1: return "l1";
        case Observable::power: return "power";
        case Observable::j_hot: return "j_hot";
        case Observable::j_cold: return "j_cold";
        case Observable::first_law_residual: return "first_law_residual";
        case Observable::spectral_gap: return "spectral_gap";
    }
    throw std::invalid_argument("to_string: unknown observable");
}

Observable observable_from_string(const std::string& s) {
    for (auto o : {Observable::s_coh, Observable::l1, Observable::power, Observable::j_hot,
                   Observable::j_cold, Observable::first_law_residual, Observable::spectral_gap})
        if (to_string(o) == s) return o;
    throw std::invalid_argument("unknown observable '" + s + "'");
}

std::string to_string(RowStatus s) {
    switch (s) {
        case RowStatus::ok: return "ok";
        case RowStatus::degenerate_null_space: return "degenerate_null_space";
        case RowStatus::no_convergence: return "no_convergence";
    }
    throw std::invalid_argument("to_string: unknown status");
}

double Range::at(int i) const {
    if (count == 1) return min;
    return min + static_cast<double>(i) * (max - min) / static_cast<double>(count - 1);
}

void SweepConfig::validate() const {
    machine.validate();
    if (eps_range.count < 1 || delta_range.count < 1)
        throw std::invalid_argument("sweep config: range counts must be >= 1");
    if (eps_range.min > eps_range.max || delta_range.min > delta_range.max)
        throw std::invalid_argument("sweep config: range min must be <= max");
    if (threads < 0) throw std::invalid_argument("sweep config: threads must be >= 0");
    if (preset == PresetName::entanglement_machine)
        throw std::invalid_argument("sweep config: entanglement_machine has no detuning axis "
                                    "and cannot be swept");
    if (preset != PresetName::coupled_machines)
        for (auto o : observables)
            if (is_thermo(o))
                throw std::invalid_argument("sweep config: observable '" + to_string(o) +
                                            "' requires preset coupled_machines");
}

SweepConfig SweepConfig::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("sweep config: invalid JSON: ") + e.what());
    }
    SweepConfig cfg;
    const int schema = j.value("schema_version", kConfigSchemaVersion);
    if (schema != kConfigSchemaVersion)
        throw std::invalid_argument("sweep config: unsupported schema_version " +
                                    std::to_string(schema));
    cfg.preset = preset_from_string(j.value("preset", std::string("coupled_machines")));

    if (j.contains("params")) {
        const auto& p = j["params"];
        auto get = [&](const char* key, double fallback) { return p.value(key, fallback); };
        cfg.machine.omega = get("omega", cfg.machine.omega);
        const double gh = get("gamma_h", cfg.machine.gamma_h_a);
        const double gc = get("gamma_c", cfg.machine.gamma_c_a);
        const double nh = get("nbar_h", cfg.machine.nbar_h_a);
        const double nc = get("nbar_c", cfg.machine.nbar_c_a);
        cfg.machine.gamma_h_a = get("gamma_h_a", gh);
        cfg.machine.gamma_h_b = get("gamma_h_b", gh);
        cfg.machine.gamma_c_a = get("gamma_c_a", gc);
        cfg.machine.gamma_c_b = get("gamma_c_b", gc);
        cfg.machine.nbar_h_a = get("nbar_h_a", nh);
        cfg.machine.nbar_h_b = get("nbar_h_b", nh);
        cfg.machine.nbar_c_a = get("nbar_c_a", nc);
        cfg.machine.nbar_c_b = get("nbar_c_b", nc);
        cfg.spin_omega_0 = get("omega_0", cfg.spin_omega_0);
        if (p.contains("wiring")) {
            const std::string w = p["wiring"];
            if (w == "hot_23_cold_12") cfg.wiring = BathWiring::hot_23_cold_12;
            else if (w == "hot_13_cold_23") cfg.wiring = BathWiring::hot_13_cold_23;
            else if (w == "printed_both_23") cfg.wiring = BathWiring::printed_both_23;
            else throw std::invalid_argument("sweep config: unknown wiring '" + w + "'");
        }
    }

    auto parse_range = [&](const char* key) {
        if (!j.contains(key)) throw std::invalid_argument(std::string("sweep config: missing ") + key);
        const auto& r = j[key];
        Range out;
        out.min = r.at("min").get<double>();
        out.max = r.at("max").get<double>();
        out.count = r.at("count").get<int>();
        return out;
    };
    cfg.eps_range = parse_range("eps_range");
    cfg.delta_range = parse_range("delta_range");

    if (j.contains("observables"))
        for (const auto& o : j["observables"]) cfg.observables.push_back(observable_from_string(o));
    cfg.output_path = j.value("output", std::string());
    const std::string fmt = j.value("format", std::string("csv"));
    if (fmt == "csv") cfg.format = OutputFormat::csv;
    else if (fmt == "json") cfg.format = OutputFormat::json;
    else throw std::invalid_argument("sweep config: unknown format '" + fmt + "'");
    cfg.threads = j.value("threads", 0);
    cfg.emit_timestamp = j.value("emit_timestamp", false);
    cfg.validate();
    return cfg;
}

SweepConfig SweepConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("sweep config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv(kThreadsEnvVar)) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

LindbladModel instantiate(const SweepConfig& cfg, double eps, double delta) {
    switch (cfg.preset) {
        case PresetName::coupled_machines: {
            ThermalMachineParams p = cfg.machine;
            p.epsilon = eps;
            p.delta = delta;
            return build_coupled_machines(p, cfg.wiring).model;
        }
        case PresetName::spin1_entrainment:
            return build_spin1_entrainment(cfg.spin_omega_0 + delta, cfg.spin_omega_0, eps).model;
        case PresetName::coupled_spin1:
            return build_coupled_spin1(cfg.spin_omega_0, cfg.spin_omega_0 + delta, eps).model;
        case PresetName::entanglement_machine:
            break;
    }
    throw std::invalid_argument("instantiate: preset not sweepable");
}

SweepRow evaluate_point(const SweepConfig& cfg, double eps, double delta) {
    SweepRow row;
    row.epsilon = eps;
    row.delta = delta;
    try {
        const LindbladModel model = instantiate(cfg, eps, delta);
        const Matrix l = assemble(model, true);

        Eigen::BDCSVD<Matrix> svd(l, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        Eigen::Index null_dim = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) <= 1e-10 * s(0)) ++null_dim;
        if (null_dim == 0) {
            row.status = RowStatus::no_convergence;
            return row;
        }
        if (null_dim > 1) {
            row.status = RowStatus::degenerate_null_space;
            return row;
        }
        const DensityMatrix rho = density_from_liouville_vector(svd.matrixV().col(s.size() - 1));

        const Matrix basis = coherence_basis(model);
        if (contains(cfg.observables, Observable::s_coh))
            row.s_coh = relative_entropy_coherence(rho, basis);
        if (contains(cfg.observables, Observable::l1)) row.l1 = l1_coherence(rho, basis);

        bool any_thermo = false;
        for (auto o : cfg.observables) any_thermo = any_thermo || is_thermo(o);
        if (any_thermo) {
            ThermalMachineParams p = cfg.machine;
            p.epsilon = eps;
            p.delta = delta;
            const ThermoReport thermo = thermo_report(rho, p, cfg.wiring);
            if (contains(cfg.observables, Observable::power)) row.power = thermo.power;
            if (contains(cfg.observables, Observable::j_hot)) row.j_hot = thermo.j_hot;
            if (contains(cfg.observables, Observable::j_cold)) row.j_cold = thermo.j_cold;
            if (contains(cfg.observables, Observable::first_law_residual))
                row.first_law_residual = thermo.first_law_residual;
        }
        if (contains(cfg.observables, Observable::spectral_gap)) {
            Eigen::ComplexEigenSolver<Matrix> es(l, /*computeEigenvectors=*/false);
            if (es.info() != Eigen::Success) throw NumericalError("eigensolver non-convergence");
            RealVector re = es.eigenvalues().real();
            std::sort(re.data(), re.data() + re.size(), std::greater<double>());
            row.spectral_gap = re.size() > 1 ? -re(1) : 0.0;
        }
    } catch (const NumericalError&) {
        row.status = RowStatus::no_convergence;
        row.s_coh.reset();
        row.l1.reset();
        row.power.reset();
        row.j_hot.reset();
        row.j_cold.reset();
        row.first_law_residual.reset();
        row.spectral_gap.reset();
    }
    return row;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    SweepResult result;
    result.config = cfg;

    const int n_eps = cfg.eps_range.count;
    const int n_delta = cfg.delta_range.count;
    const int total = n_eps * n_delta;
    result.rows.resize(static_cast<std::size_t>(total));

    const int n_threads = std::min(resolve_thread_count(cfg.threads), total);
    std::atomic<int> next{0};
    auto worker = [&]() {
        while (true) {
            const int k = next.fetch_add(1);
            if (k >= total) break;
            const double eps = cfg.eps_range.at(k / n_delta);
            const double delta = cfg.delta_range.at(k % n_delta);
            result.rows[static_cast<std::size_t>(k)] = evaluate_point(cfg, eps, delta);
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    result.metadata.timestamp = iso_timestamp();
    result.metadata.code_version = kVersion;
    for (const auto& row : result.rows) {
        if (row.s_coh && *row.s_coh > result.metadata.max_s_coh)
            result.metadata.max_s_coh = *row.s_coh;
        if (row.power && std::abs(*row.power) > result.metadata.max_abs_power)
            result.metadata.max_abs_power = std::abs(*row.power);
    }
    return result;
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); }

}  // namespace

std::string to_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "# qsync " << result.metadata.code_version << "\n";
    out << "# preset: " << to_string(result.config.preset) << "\n";
    out << "# eps_range: " << fmt17(result.config.eps_range.min) << " "
        << fmt17(result.config.eps_range.max) << " " << result.config.eps_range.count << "\n";
    out << "# delta_range: " << fmt17(result.config.delta_range.min) << " "
        << fmt17(result.config.delta_range.max) << " " << result.config.delta_range.count << "\n";
    out << "# max_s_coh: " << fmt17(result.metadata.max_s_coh) << "\n";
    out << "# max_abs_power: " << fmt17(result.metadata.max_abs_power) << "\n";
    if (result.config.emit_timestamp) out << "# timestamp: " << result.metadata.timestamp << "\n";
    out << "epsilon,delta,s_coh,l1,power,j_hot,j_cold,first_law_residual,spectral_gap,status\n";
    for (const auto& r : result.rows) {
        out << fmt17(r.epsilon) << ',' << fmt17(r.delta) << ',' << cell(r.s_coh) << ','
            << cell(r.l1) << ',' << cell(r.power) << ',' << cell(r.j_hot) << ','
            << cell(r.j_cold) << ',' << cell(r.first_law_residual) << ','
            << cell(r.spectral_gap) << ',' << to_string(r.status) << "\n";
    }
    return out.str();
}

std::string to_json_text(const SweepResult& result) {
    nlohmann::json j;
    j["metadata"] = {{"code_version", result.metadata.code_version},
                     {"max_s_coh", result.metadata.max_s_coh},
                     {"max_abs_power", result.metadata.max_abs_power}};
    if (result.config.emit_timestamp) j["metadata"]["timestamp"] = result.metadata.timestamp;
    j["config"] = {{"schema_version", kConfigSchemaVersion},
                   {"preset", to_string(result.config.preset)},
                   {"eps_range",
                    {{"min", result.config.eps_range.min},
                     {"max", result.config.eps_range.max},
                     {"count", result.config.eps_range.count}}},
                   {"delta_range",
                    {{"min", result.config.delta_range.min},
                     {"max", result.config.delta_range.max},
                     {"count", result.config.delta_range.count}}}};
    std::vector<std::string> names;
    for (auto o : result.config.observables) names.push_back(to_string(o));
    j["config"]["observables"] = names;

    j["grid"] = nlohmann::json::array();
    for (const auto& r : result.rows) {
        nlohmann::json row = {{"epsilon", r.epsilon}, {"delta", r.delta},
                              {"status", to_string(r.status)}};
        auto put = [&](const char* key, const std::optional<double>& v) {
            if (v) row[key] = *v;
        };
        put("s_coh", r.s_coh);
        put("l1", r.l1);
        put("power", r.power);
        put("j_hot", r.j_hot);
        put("j_cold", r.j_cold);
        put("first_law_residual", r.first_law_residual);
        put("spectral_gap", r.spectral_gap);
        j["grid"].push_back(std::move(row));
    }
    return j.dump(2) + "\n";
}

void serialize(const SweepResult& result, OutputFormat format, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("serialize: cannot open '" + path + "' for writing");
    out << (format == OutputFormat::csv ? to_csv(result) : to_json_text(result));
    if (!out) throw std::runtime_error("serialize: write to '" + path + "' failed");
}

}  // namespace qsync
