// Command-line front end: run one scenario or compare two.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "vgrl/scenario.hpp"
#include "vgrl/telemetry.hpp"

namespace fs = std::filesystem;
using namespace vgrl;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitIo = 4;

// 0 quiet, 1 summaries (default), 2 progress
int verbosity() {
    const char* v = std::getenv("VGRL_VERBOSITY");
    if (!v || !*v) return 1;
    return std::atoi(v);
}

struct Overrides {
    std::optional<double> dt;
    std::optional<double> t_end;
    std::optional<long> seed;
    std::optional<int> stride;

    void add_to(CLI::App* app) {
        app->add_option("--dt", dt, "Integration step (s)")->check(CLI::PositiveNumber);
        app->add_option("--t-end", t_end, "Horizon (s)")->check(CLI::PositiveNumber);
        app->add_option("--seed", seed, "Seed")->check(CLI::NonNegativeNumber);
        app->add_option("--stride", stride, "Emit every k-th step")->check(CLI::PositiveNumber);
    }

    void apply(Scenario& sc) const {
        if (dt) sc.sim_cfg.dt = *dt;
        if (t_end) sc.sim_cfg.t_end = *t_end;
        if (seed) sc.sim_cfg.seed = static_cast<unsigned long>(*seed);
        if (stride) sc.sim_cfg.record_stride = *stride;
        validate(sc);
    }
};

std::string opt(const std::optional<double>& v) {
    return v ? format_double(*v) : "undefined";
}

std::string summary_text(const Scenario& sc, const ExperimentResult& r, const BoundReport& b) {
    std::ostringstream out;
    out << "scenario=" << sc.name << '\n'
        << "law=" << to_string(sc.law) << '\n'
        << "convergence_time_s=" << opt(r.convergence_time) << '\n'
        << "steady_state_rms=" << (r.diverged ? "undefined" : format_double(r.steady_state_rms))
        << '\n'
        << "max_abs_u=" << format_double(r.max_abs_u) << '\n'
        << "saturation_violations=" << r.saturation_violations << '\n'
        << "steps_completed=" << r.steps_completed << '\n'
        << "diverged=" << (r.diverged ? "true" : "false") << '\n';
    if (r.diverged) out << "failure=" << r.failure << '\n';
    out << "final_weights=";
    for (Eigen::Index i = 0; i < r.final_weights.size(); ++i) {
        out << (i ? " " : "") << format_double(r.final_weights(i));
    }
    out << "\n\n[bounds]\n"
        << "lambda_min_M=" << format_double(b.lambda_min_M) << '\n'
        << "pd_ok=" << (b.pd_ok ? "true" : "false") << '\n'
        << "gamma_factor=" << opt(b.gamma_factor) << '\n'
        << "gamma_prime_factor=" << format_double(b.gamma_prime_factor) << '\n'
        << "t_m_cap=" << format_double(b.t_m_cap) << '\n'
        << "weight_bound=" << opt(b.weight_bound) << '\n'
        << "weight_bound_constant=" << opt(b.weight_bound_constant) << '\n';
    return out.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + p.string());
}

struct Outcome {
    ExperimentResult result;
    std::string error;
};

// Runs one scenario into dir: telemetry.csv, summary.txt, scenario.ini.
Outcome run_into(const Scenario& sc, const fs::path& dir, const std::string& tag) {
    Outcome o;
    try {
        fs::create_directories(dir);
        write_file(dir / "scenario.ini", serialize_scenario(sc));
        std::ofstream csv(dir / "telemetry.csv");
        if (!csv) throw std::runtime_error("cannot write " + (dir / "telemetry.csv").string());
        const AugmentedModel model = build_model(sc.system);
        CsvTelemetryWriter writer(csv, model.dim(), model.m(), sc.basis.size());
        const bool progress = verbosity() >= 2;
        const double t_end = sc.sim_cfg.t_end;
        double next_report = 0.1 * t_end;
        const TelemetrySink sink = [&](const TelemetryRecord& rec) {
            writer.write(rec);
            if (progress && rec.t >= next_report) {
                std::cerr << tag << " t=" << rec.t << " / " << t_end << '\n';
                next_report += 0.1 * t_end;
            }
        };
        o.result = run_scenario(sc, sink, false);
        csv.flush();
        if (!csv) throw std::runtime_error("failed writing telemetry for " + tag);
        const BoundReport b = scenario_bound_report(sc, o.result);
        write_file(dir / "summary.txt", summary_text(sc, o.result, b));
    } catch (const std::exception& e) {
        o.error = e.what();
    }
    return o;
}

int cmd_run(const std::string& config, const std::string& out, const Overrides& ov) {
    Scenario sc = load_scenario(config);
    ov.apply(sc);
    const Outcome o = run_into(sc, out, sc.name);
    if (!o.error.empty()) {
        std::cerr << "error: " << o.error << '\n';
        return kExitIo;
    }
    if (verbosity() >= 1) {
        std::ifstream in(fs::path(out) / "summary.txt");
        std::cout << in.rdbuf();
    }
    if (o.result.diverged) {
        std::cerr << "episode diverged: " << o.result.failure << '\n';
        return kExitDiverged;
    }
    return 0;
}

void require_shared(const Scenario& a, const Scenario& b) {
    std::string diff;
    if (!(a.system == b.system)) diff += " system";
    if (a.law_cfg.constraint.u_m != b.law_cfg.constraint.u_m) diff += " u_m";
    if (a.sim_cfg.seed != b.sim_cfg.seed) diff += " seed";
    if (!(a.sim_cfg == b.sim_cfg)) diff += " [sim]";
    if (!diff.empty()) {
        throw ConfigError("scenarios must share system, u_m, seed and [sim]; they differ in:" +
                          diff);
    }
}

std::string ratio(const std::optional<double>& a, const std::optional<double>& b) {
    if (!a || !b || *b == 0.0) return "undefined";
    return format_double(*a / *b);
}

int cmd_compare(const std::string& ca, const std::string& cb, const std::string& out,
                const Overrides& ov) {
    Scenario a = load_scenario(ca);
    Scenario b = load_scenario(cb);
    ov.apply(a);
    ov.apply(b);
    require_shared(a, b);

    const fs::path dir(out);
    Outcome oa, ob;
    std::thread worker([&] { oa = run_into(a, dir / "a", "a:" + a.name); });
    ob = run_into(b, dir / "b", "b:" + b.name);
    worker.join();
    for (const Outcome* o : {&oa, &ob}) {
        if (!o->error.empty()) {
            std::cerr << "error: " << o->error << '\n';
            return kExitIo;
        }
    }

    // Metrics come from the emitted CSVs, not from memory.
    const auto metrics = [&](const fs::path& csv, const Scenario& sc) {
        std::ifstream in(csv);
        return summarize_telemetry(in, sc.sim_cfg.convergence_window, sc.sim_cfg.convergence_tol,
                                   sc.sim_cfg.steady_window);
    };
    const TelemetryMetrics ma = metrics(dir / "a" / "telemetry.csv", a);
    const TelemetryMetrics mb = metrics(dir / "b" / "telemetry.csv", b);
    const auto rms = [](const TelemetryMetrics& m, const Outcome& o) -> std::optional<double> {
        if (o.result.diverged) return std::nullopt;
        return m.steady_state_rms;
    };

    std::ostringstream rep;
    rep << "a=" << a.name << '\n'
        << "b=" << b.name << '\n'
        << "a_diverged=" << (oa.result.diverged ? "true" : "false") << '\n'
        << "b_diverged=" << (ob.result.diverged ? "true" : "false") << '\n'
        << "a_convergence_time_s=" << opt(ma.convergence_time) << '\n'
        << "b_convergence_time_s=" << opt(mb.convergence_time) << '\n'
        << "convergence_ratio=" << ratio(ma.convergence_time, mb.convergence_time) << '\n'
        << "a_steady_state_rms=" << opt(rms(ma, oa)) << '\n'
        << "b_steady_state_rms=" << opt(rms(mb, ob)) << '\n'
        << "steady_state_rms_ratio=" << ratio(rms(ma, oa), rms(mb, ob)) << '\n'
        << "a_max_abs_u=" << format_double(ma.max_abs_u) << '\n'
        << "b_max_abs_u=" << format_double(mb.max_abs_u) << '\n';
    write_file(dir / "report.txt", rep.str());
    if (verbosity() >= 1) std::cout << rep.str();
    return (oa.result.diverged || ob.result.diverged) ? kExitDiverged : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variable-gain critic learning for input-constrained tracking"};
    app.require_subcommand(1);

    std::string config, config_b, out;
    Overrides ov;

    auto* run = app.add_subcommand("run", "Run one scenario and write telemetry.csv, summary.txt");
    run->add_option("config", config, "Scenario file or preset name")->required();
    run->add_option("--out", out, "Output directory")->required();
    ov.add_to(run);

    auto* cmp = app.add_subcommand("compare", "Run two scenarios and report metric ratios (a/b)");
    cmp->add_option("config_a", config, "First scenario file or preset")->required();
    cmp->add_option("config_b", config_b, "Second scenario file or preset")->required();
    cmp->add_option("--out", out, "Output directory")->required();
    ov.add_to(cmp);

    auto* show = app.add_subcommand("show", "Print a scenario in config-file form");
    show->add_option("config", config, "Scenario file or preset name")->required();

    app.add_subcommand("presets", "List scenario presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config, out, ov);
        if (*cmp) return cmd_compare(config, config_b, out, ov);
        if (*show) {
            std::cout << serialize_scenario(load_scenario(config));
            return 0;
        }
        for (const auto& p : preset_scenario_names()) std::cout << p << '\n';
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
}
