#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vgrl/critic.hpp"
#include "vgrl/dynamics.hpp"
#include "vgrl/learning.hpp"

namespace vgrl {

struct SimConfig {
    double dt = 1e-3;
    double t_end = 100.0;
    Vector x0;
    Vector xd0;
    Vector W0;
    bool dither_on = true;
    double dither_scale = 1.0;
    unsigned long seed = 0;
    // Keep (and emit) every k-th step; 1 records every step. The metrics in
    // ExperimentResult always see every step.
    int record_stride = 1;
    // Feed the dithered input into phi instead of the noise-free u_hat.
    bool phi_uses_applied_input = false;
    double convergence_window = 50.0;
    double convergence_tol = 1e-3;
    double steady_window = 50.0;

    void validate(int n, int N) const;
    long step_count() const;

    bool operator==(const SimConfig& other) const;
};

struct TelemetryRecord {
    double t = 0.0;
    Vector z;
    Vector u_applied;
    Vector W_hat;
    double e_hjb = 0.0;
    double g1 = 0.0;
    int xi = 0;
    double sigma = 0.0;
    double V_hat = 0.0;
};

using Trajectory = std::vector<TelemetryRecord>;
using TelemetrySink = std::function<void(const TelemetryRecord&)>;

struct ExperimentResult {
    std::optional<double> convergence_time;
    double steady_state_rms = 0.0;
    Vector final_weights;
    Vector final_state;  // z at the last accepted step
    Trajectory trajectory;
    // Over every integration step, not only the recorded ones.
    double max_abs_u = 0.0;
    long saturation_violations = 0;
    long steps_completed = 0;
    bool diverged = false;
    std::string failure;
};

// Decaying multi-tone probing signal
//   2 e^{-0.009 t} (sin^2(11.9t) cos(19.5t) + sin^2(2.2t) cos(5.8t)
//                   + sin^2(1.2t) cos(9.5t) + sin^5(2.4t)).
double dither(double t, double scale = 1.0);

using Derivative = std::function<Vector(double, const Vector&)>;

// Classical fourth-order Runge-Kutta step. Throws IntegrationError tagged
// with `step` when any stage derivative is non-finite.
Vector rk4_step(const Derivative& deriv, const Vector& y, double t, double dt, long step = 0);

// Integrates [z; W_hat] jointly under the selected law. Divergence does not
// throw: the result is flagged and keeps the telemetry gathered so far.
// Records go to `sink` and, unless keep_trajectory is false, to the result.
ExperimentResult run_episode(const AugmentedModel& model, const CriticState& critic0,
                             UpdateLaw law, const LawConfig& law_cfg, const SimConfig& sim_cfg,
                             const TelemetrySink& sink = {}, bool keep_trajectory = true);

// Streaming form of convergence_time for uniformly spaced samples.
class ConvergenceTracker {
public:
    ConvergenceTracker(long window_samples, double tol);

    void push(double t, const Vector& W);
    std::optional<double> result() const { return found_; }

private:
    long offset_;
    double tol_;
    long count_ = 0;
    std::optional<double> found_;
    std::deque<double> times_;
    std::vector<std::deque<std::pair<long, double>>> hi_, lo_;
};

// Streaming RMS of ||e|| over the trailing window.
class SteadyStateTracker {
public:
    explicit SteadyStateTracker(double window) : window_(window) {}

    void push(double t, double e_norm_sq);
    double result() const;

private:
    double window_;
    std::deque<std::pair<double, double>> samples_;
};

// Earliest t* whose window [t*, t* + window] keeps every weight within tol
// (infinity norm) of W(t* + window). Empty when no such t* exists.
std::optional<double> convergence_time(const Trajectory& trajectory, double window, double tol);

// RMS of ||e|| over the last `window` seconds.
double steady_state_error(const Trajectory& trajectory, double window);

}  // namespace vgrl
