#include "vgrl/sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vgrl {

void SimConfig::validate(int n, int N) const {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(t_end > dt)) throw ConfigError("t_end must exceed dt");
    if (x0.size() != n) throw ConfigError("x0 must have " + std::to_string(n) + " entries");
    if (xd0.size() != n) throw ConfigError("xd0 must have " + std::to_string(n) + " entries");
    if (W0.size() != N) throw ConfigError("W0 must have " + std::to_string(N) + " entries");
    if (record_stride < 1) throw ConfigError("record_stride must be >= 1");
    if (!(convergence_window > 0.0) || !(convergence_window < t_end)) {
        throw ConfigError("convergence_window must lie in (0, t_end)");
    }
    if (!(convergence_tol > 0.0)) throw ConfigError("convergence_tol must be positive");
    if (!(steady_window > 0.0) || !(steady_window < t_end)) {
        throw ConfigError("steady_window must lie in (0, t_end)");
    }
}

long SimConfig::step_count() const {
    return std::lround(t_end / dt);
}

double dither(double t, double scale) {
    const auto sq = [](double x) { return x * x; };
    const double s24 = std::sin(2.4 * t);
    const double sum = sq(std::sin(11.9 * t)) * std::cos(19.5 * t) +
                       sq(std::sin(2.2 * t)) * std::cos(5.8 * t) +
                       sq(std::sin(1.2 * t)) * std::cos(9.5 * t) + s24 * s24 * s24 * s24 * s24;
    return scale * 2.0 * std::exp(-0.009 * t) * sum;
}

namespace {

void require_finite(const Vector& v, long step, const char* what) {
    if (!v.allFinite()) {
        throw IntegrationError(std::string("non-finite ") + what + " at step " +
                                   std::to_string(step),
                               step);
    }
}

Vector rk4_from_k1(const Derivative& deriv, const Vector& y, const Vector& k1, double t, double dt,
                   long step) {
    require_finite(k1, step, "derivative");
    const Vector k2 = deriv(t + 0.5 * dt, y + (0.5 * dt) * k1);
    require_finite(k2, step, "derivative");
    const Vector k3 = deriv(t + 0.5 * dt, y + (0.5 * dt) * k2);
    require_finite(k3, step, "derivative");
    const Vector k4 = deriv(t + dt, y + dt * k3);
    require_finite(k4, step, "derivative");
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Vector rk4_step(const Derivative& deriv, const Vector& y, double t, double dt, long step) {
    if (!(dt > 0.0)) throw ConfigError("rk4_step needs dt > 0");
    return rk4_from_k1(deriv, y, deriv(t, y), t, dt, step);
}

ExperimentResult run_episode(const AugmentedModel& model, const CriticState& critic0,
                             UpdateLaw law, const LawConfig& law_cfg, const SimConfig& sim_cfg,
                             const TelemetrySink& sink, bool keep_trajectory) {
    const int n = model.n();
    const int d = model.dim();
    const int N = critic0.basis.size();
    if (critic0.basis.state_dim() != d) {
        throw ConfigError("basis is defined over " + std::to_string(critic0.basis.state_dim()) +
                          " variables but the augmented state has " + std::to_string(d));
    }
    law_cfg.validate(N, n, model.m());
    sim_cfg.validate(n, N);

    const RegressorBasis& basis = critic0.basis;
    const double u_m = law_cfg.constraint.u_m;

    const auto applied_input = [&](const Vector& u_hat, double t) {
        if (!sim_cfg.dither_on) return u_hat;
        const double noise = dither(t, sim_cfg.dither_scale);
        Vector u = u_hat.array() + noise;
        return Vector(u.cwiseMax(-u_m).cwiseMin(u_m));
    };

    // One evaluation of the coupled field; `diag` receives the update
    // diagnostics when requested.
    const auto field = [&](double t, const Vector& y, UpdateDiagnostics* diag,
                           Vector* u_out) -> Vector {
        const Vector z = y.head(d);
        const Vector W = y.tail(N);
        const CriticPoint p = evaluate_point(model, z, basis, W, law_cfg.constraint);
        const Vector u = applied_input(p.u_hat, t);
        const Vector& u_phi = sim_cfg.phi_uses_applied_input ? u : p.u_hat;
        UpdateResult upd = compute_update(law, p, W, law_cfg, u_phi);

        Vector dy(d + N);
        dy.head(d) = p.F + p.G * u;
        dy.tail(N) = upd.W_dot;
        if (diag) *diag = std::move(upd.diag);
        if (u_out) *u_out = u;
        return dy;
    };
    const Derivative deriv = [&](double t, const Vector& y) {
        return field(t, y, nullptr, nullptr);
    };

    ExperimentResult result;
    ConvergenceTracker conv(std::lround(sim_cfg.convergence_window / sim_cfg.dt),
                            sim_cfg.convergence_tol);
    SteadyStateTracker steady(sim_cfg.steady_window);
    Vector y(d + N);
    y.head(d) = make_augmented_state(sim_cfg.x0, sim_cfg.xd0);
    y.tail(N) = sim_cfg.W0;

    const long steps = sim_cfg.step_count();
    const auto record = [&](long k, const Vector& state, const UpdateDiagnostics& diag,
                            const Vector& u) {
        TelemetryRecord rec;
        rec.t = static_cast<double>(k) * sim_cfg.dt;
        rec.z = state.head(d);
        rec.u_applied = u;
        rec.W_hat = state.tail(N);
        rec.e_hjb = diag.e_hjb;
        rec.g1 = diag.g1;
        rec.xi = diag.xi;
        rec.sigma = diag.sigma;
        rec.V_hat = rec.W_hat.dot(eval_basis(basis, rec.z));
        if (sink) sink(rec);
        if (keep_trajectory) result.trajectory.push_back(std::move(rec));
    };

    long k = 0;
    try {
        for (;; ++k) {
            const double t = static_cast<double>(k) * sim_cfg.dt;
            UpdateDiagnostics diag;
            Vector u;
            const Vector k1 = field(t, y, &diag, &u);

            const double peak = u.cwiseAbs().maxCoeff();
            result.max_abs_u = std::max(result.max_abs_u, peak);
            if (peak > u_m) ++result.saturation_violations;

            const double t_rec = static_cast<double>(k) * sim_cfg.dt;
            conv.push(t_rec, y.tail(N));
            steady.push(t_rec, y.head(n).squaredNorm());
            if (k % sim_cfg.record_stride == 0) record(k, y, diag, u);
            if (k == steps) break;

            Vector next = rk4_from_k1(deriv, y, k1, t, sim_cfg.dt, k);
            require_finite(next, k, "state");
            y = std::move(next);
        }
    } catch (const IntegrationError& err) {
        result.diverged = true;
        result.failure = err.what();
    }
    result.steps_completed = k;
    result.final_weights = y.tail(N);
    result.final_state = y.head(d);

    if (!result.diverged) {
        result.convergence_time = conv.result();
        result.steady_state_rms = steady.result();
    }
    return result;
}

ConvergenceTracker::ConvergenceTracker(long window_samples, double tol)
    : offset_(window_samples), tol_(tol) {
    if (offset_ < 1) throw ConfigError("convergence window must span at least one sample");
}

void ConvergenceTracker::push(double t, const Vector& W) {
    if (found_) return;
    if (hi_.empty()) {
        hi_.resize(W.size());
        lo_.resize(W.size());
    }
    const long j = count_++;
    times_.push_back(t);
    if (static_cast<long>(times_.size()) > offset_ + 1) times_.pop_front();

    // Monotone deques give the per-component max/min over [j - offset, j].
    double spread = 0.0;
    for (Eigen::Index c = 0; c < W.size(); ++c) {
        auto& hi = hi_[c];
        auto& lo = lo_[c];
        const double w = W(c);
        while (!hi.empty() && hi.back().second <= w) hi.pop_back();
        hi.emplace_back(j, w);
        while (!lo.empty() && lo.back().second >= w) lo.pop_back();
        lo.emplace_back(j, w);
        while (hi.front().first < j - offset_) hi.pop_front();
        while (lo.front().first < j - offset_) lo.pop_front();
        spread = std::max({spread, hi.front().second - w, w - lo.front().second});
    }
    if (j >= offset_ && spread <= tol_) found_ = times_.front();
}

void SteadyStateTracker::push(double t, double e_norm_sq) {
    samples_.emplace_back(t, e_norm_sq);
    while (samples_.front().first < t - window_) samples_.pop_front();
}

double SteadyStateTracker::result() const {
    if (samples_.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& s : samples_) sum += s.second;
    return std::sqrt(sum / static_cast<double>(samples_.size()));
}

std::optional<double> convergence_time(const Trajectory& trajectory, double window, double tol) {
    if (trajectory.size() < 2) return std::nullopt;
    const double spacing = trajectory[1].t - trajectory[0].t;
    const long offset = std::llround(window / spacing);
    if (offset < 1 || offset >= static_cast<long>(trajectory.size())) return std::nullopt;
    ConvergenceTracker tracker(offset, tol);
    for (const auto& rec : trajectory) {
        tracker.push(rec.t, rec.W_hat);
        if (tracker.result()) break;
    }
    return tracker.result();
}

double steady_state_error(const Trajectory& trajectory, double window) {
    SteadyStateTracker tracker(window);
    for (const auto& rec : trajectory) {
        tracker.push(rec.t, rec.z.head(rec.z.size() / 2).squaredNorm());
    }
    return tracker.result();
}

bool SimConfig::operator==(const SimConfig& other) const {
    return dt == other.dt && t_end == other.t_end && same_values(x0, other.x0) &&
           same_values(xd0, other.xd0) && same_values(W0, other.W0) &&
           dither_on == other.dither_on && dither_scale == other.dither_scale &&
           seed == other.seed && record_stride == other.record_stride &&
           phi_uses_applied_input == other.phi_uses_applied_input &&
           convergence_window == other.convergence_window &&
           convergence_tol == other.convergence_tol && steady_window == other.steady_window;
}

}  // namespace vgrl
