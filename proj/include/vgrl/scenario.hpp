#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vgrl/analysis.hpp"
#include "vgrl/critic.hpp"
#include "vgrl/dynamics.hpp"
#include "vgrl/learning.hpp"
#include "vgrl/sim.hpp"

namespace vgrl {

// Either a named preset or inline expressions. Inline plants use x1..xn in
// f and g, xd1..xdn in h and z1..z2n in d_m.
struct SystemConfig {
    std::string preset;
    int n = 0;
    int m = 0;
    std::vector<std::string> f;  // n entries
    std::vector<std::string> g;  // n * m entries, row-major
    std::vector<std::string> h;  // n entries
    std::string d_m;             // empty: zero

    bool operator==(const SystemConfig&) const = default;
};

inline constexpr std::string_view kTrackingPreset = "tracking-2d";

// Throws ConfigError for unknown presets or bad expressions.
AugmentedModel build_model(const SystemConfig& sys);

struct Scenario {
    std::string name;
    SystemConfig system;
    UpdateLaw law = UpdateLaw::variable;
    LawConfig law_cfg;
    RegressorBasis basis;
    SimConfig sim_cfg;
    BoundInputs bounds;

    bool operator==(const Scenario& other) const;
};

// Cross-checks dimensions, gains and simulation settings. Throws ConfigError.
void validate(const Scenario& sc);

// Section-based key = value text:
//   name = ...
//   [system] preset | n, m, f1.., g1_1.., h1.., d_m
//   [law]    type, alpha, k2, l, gamma, u_m, R, Q, K1, K2
//   [critic] basis = quadratic | terms = e11 e12 ..; e21 ..  and W0
//   [sim]    dt, t_end, x0, xd0, dither, dither_scale, seed, record_stride,
//            phi_uses_applied_input, convergence_window, convergence_tol,
//            steady_window
//   [bounds] b_N, gamma1, alpha2
// Lines starting with # or ; and text after a whitespace-preceded # are
// comments. Parsing validates the result.
Scenario parse_scenario(std::string_view text);
std::string serialize_scenario(const Scenario& sc);

// um9-variable, um9-constant, um18-variable, um18-constant.
std::vector<std::string> preset_scenario_names();
Scenario preset_scenario(std::string_view name);

// A readable file path, otherwise a preset name.
Scenario load_scenario(const std::string& path_or_preset);

// Builds the model and critic and runs one episode.
ExperimentResult run_scenario(const Scenario& sc, const TelemetrySink& sink = {},
                              bool keep_trajectory = false);

// Bound report for the scenario gains, with phi taken at the final state
// and weights (the initial ones if the episode diverged).
BoundReport scenario_bound_report(const Scenario& sc, const ExperimentResult& result);

}  // namespace vgrl
