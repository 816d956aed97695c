#pragma once

#include <string_view>

#include "vgrl/control.hpp"
#include "vgrl/critic.hpp"
#include "vgrl/dynamics.hpp"

namespace vgrl {

enum class UpdateLaw { variable, constant, plain };

std::string_view to_string(UpdateLaw law);
// Accepts "variable", "constant", "plain"; throws ConfigError otherwise.
UpdateLaw parse_update_law(std::string_view text);

// Tuning constants for the critic update laws.
struct LawConfig {
    double alpha = 1.0;  // base learning rate
    double k2 = 1.0;     // exponent of the HJB-error gain
    double l = 0.01;     // gain offset, g1 >= l
    Vector K1;           // length N
    Matrix K2;           // N x N, symmetric
    ControlConstraint constraint;
    CostWeights cost;  // cost.gamma is the discount rate

    // Defaults K1 = 0.1 * ones(N), K2 = 0.1 * I_N.
    static LawConfig with_default_gains(int N);

    // Checks signs, dimensions, K2 symmetry and positive definiteness of
    // M = [[1, -K1^T/2], [-K1/2, K2]]. Throws ConfigError naming the field.
    void validate(int N, int n, int m) const;

    bool operator==(const LawConfig& other) const;
};

// Quantities shared by every law at one (z, W_hat) point.
struct CriticPoint {
    Vector z;
    Vector F;
    Matrix G;
    Vector theta;     // theta(z)
    Matrix jacobian;  // d theta / dz
    Vector tau2;
    Vector u_hat;  // -u_m tanh(tau2)
    double d_M = 0.0;
};

CriticPoint evaluate_point(const AugmentedModel& model, const Vector& z,
                           const RegressorBasis& basis, const Vector& W_hat,
                           const ControlConstraint& cc);
CriticPoint evaluate_point(const AugmentedModel& model, const Vector& z,
                           const CriticState& critic, const ControlConstraint& cc);

struct UpdateDiagnostics {
    double e_hjb = 0.0;
    double g1 = 0.0;
    double sigma = 0.0;
    int xi = 0;
    Vector term1;  // HJB-error descent
    Vector term2;  // Lyapunov repair, zero when xi == 0
    Vector term3;  // residual-set shaping
};

struct UpdateResult {
    Vector W_dot;
    UpdateDiagnostics diag;
};

struct LyapunovRate {
    double sigma = 0.0;
    int xi = 1;
};

// HJB residual under the current weights:
//   W^T dtheta F - gamma W^T theta + z^T Q1 z + d_M^2 + u_m^2 sum_i R_i ln(1 - tanh^2 tau2_i).
double hjb_error(const AugmentedModel& model, const Vector& z, const CriticState& critic,
                 const LawConfig& cfg);
double hjb_error(const CriticPoint& p, const Vector& W_hat, const LawConfig& cfg);

// g1 = |e|^k2 + l.
double variable_gain(double e_hjb, const LawConfig& cfg);

// sigma = z^T (F(z) + G(z) u_hat); xi = 0 iff sigma < 0.
LyapunovRate lyapunov_rate(const AugmentedModel& model, const Vector& z, const Vector& u_hat);

// phi = dtheta (F + G u) - gamma theta, which equals d e_hjb / d W_hat when u = u_hat.
Vector regressor_phi(const CriticPoint& p, const Vector& u, double gamma);

// Variable-gain law: g1 scales the HJB-descent and residual-shaping terms.
UpdateResult variable_gain_update(const AugmentedModel& model, const Vector& z,
                                  const CriticState& critic, const LawConfig& cfg);
// Same structure with g1 fixed at 1.
UpdateResult constant_rate_update(const AugmentedModel& model, const Vector& z,
                                  const CriticState& critic, const LawConfig& cfg);
// Normalized gradient descent on e^2 / 2: -alpha phi e / (1 + phi^T phi)^2.
Vector plain_gd_update(const AugmentedModel& model, const Vector& z, const CriticState& critic,
                       const LawConfig& cfg);

// Point-based form used by the integrator. u_phi is the input that enters
// phi; pass p.u_hat for the standard laws.
UpdateResult compute_update(UpdateLaw law, const CriticPoint& p, const Vector& W_hat,
                            const LawConfig& cfg, const Vector& u_phi);

}  // namespace vgrl
