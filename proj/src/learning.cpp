#include "vgrl/learning.hpp"

#include <cmath>
#include <string>

#include "vgrl/analysis.hpp"

namespace vgrl {

namespace {

double sgn(double x) {
    return (x > 0.0) - (x < 0.0);
}

}  // namespace

std::string_view to_string(UpdateLaw law) {
    switch (law) {
        case UpdateLaw::variable: return "variable";
        case UpdateLaw::constant: return "constant";
        case UpdateLaw::plain: return "plain";
    }
    return "unknown";
}

UpdateLaw parse_update_law(std::string_view text) {
    if (text == "variable") return UpdateLaw::variable;
    if (text == "constant") return UpdateLaw::constant;
    if (text == "plain") return UpdateLaw::plain;
    throw ConfigError("unknown update law '" + std::string(text) +
                      "' (expected variable, constant or plain)");
}

LawConfig LawConfig::with_default_gains(int N) {
    LawConfig cfg;
    cfg.K1 = Vector::Constant(N, 0.1);
    cfg.K2 = 0.1 * Matrix::Identity(N, N);
    return cfg;
}

void LawConfig::validate(int N, int n, int m) const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be >= 0");
    if (!(k2 > 0.0)) throw ConfigError("k2 must be positive");
    if (!(l > 0.0)) throw ConfigError("l must be positive");
    if (K1.size() != N) {
        throw ConfigError("K1 has length " + std::to_string(K1.size()) + ", expected " +
                          std::to_string(N));
    }
    constraint.validate(m);
    cost.validate(n);
    const MAssembly M = assemble_M(K1, K2);
    if (!M.pd_ok) {
        throw ConfigError("K1/K2 make M = [[1, -K1^T/2], [-K1/2, K2]] indefinite (lambda_min = " +
                          std::to_string(M.lambda_min) + "); M must be positive definite");
    }
}

CriticPoint evaluate_point(const AugmentedModel& model, const Vector& z,
                           const RegressorBasis& basis, const Vector& W_hat,
                           const ControlConstraint& cc) {
    if (W_hat.size() != basis.size()) {
        throw ConfigError("weight vector length does not match basis size");
    }
    CriticPoint p;
    p.z = z;
    model.evaluate(z, p.F, p.G);
    eval_basis_and_jacobian(basis, z, p.theta, p.jacobian);
    p.tau2 = tau2(p.G, p.jacobian, W_hat, cc);
    p.u_hat = (-cc.u_m) * p.tau2.array().tanh().matrix();
    p.d_M = model.d_M(z);
    return p;
}

CriticPoint evaluate_point(const AugmentedModel& model, const Vector& z,
                           const CriticState& critic, const ControlConstraint& cc) {
    return evaluate_point(model, z, critic.basis, critic.W_hat, cc);
}

double hjb_error(const CriticPoint& p, const Vector& W_hat, const LawConfig& cfg) {
    const auto& cc = cfg.constraint;
    double log_term = 0.0;
    for (Eigen::Index i = 0; i < p.tau2.size(); ++i) log_term += cc.R(i) * log_sech2(p.tau2(i));
    return W_hat.dot(p.jacobian * p.F) - cfg.cost.gamma * W_hat.dot(p.theta) +
           cfg.cost.state_cost(p.z) + p.d_M * p.d_M + cc.u_m * cc.u_m * log_term;
}

double hjb_error(const AugmentedModel& model, const Vector& z, const CriticState& critic,
                 const LawConfig& cfg) {
    return hjb_error(evaluate_point(model, z, critic, cfg.constraint), critic.W_hat, cfg);
}

double variable_gain(double e_hjb, const LawConfig& cfg) {
    return std::pow(std::abs(e_hjb), cfg.k2) + cfg.l;
}

LyapunovRate lyapunov_rate(const AugmentedModel& model, const Vector& z, const Vector& u_hat) {
    Vector F;
    Matrix G;
    model.evaluate(z, F, G);
    if (u_hat.size() != model.m()) throw ConfigError("control length does not match plant");
    LyapunovRate r;
    r.sigma = z.dot(F + G * u_hat);
    r.xi = r.sigma < 0.0 ? 0 : 1;
    return r;
}

Vector regressor_phi(const CriticPoint& p, const Vector& u, double gamma) {
    return p.jacobian * (p.F + p.G * u) - gamma * p.theta;
}

UpdateResult compute_update(UpdateLaw law, const CriticPoint& p, const Vector& W_hat,
                            const LawConfig& cfg, const Vector& u_phi) {
    const auto& cc = cfg.constraint;
    const double alpha = cfg.alpha;
    const int N = static_cast<int>(W_hat.size());

    UpdateResult out;
    auto& d = out.diag;
    d.e_hjb = hjb_error(p, W_hat, cfg);
    const Vector phi = regressor_phi(p, u_phi, cfg.cost.gamma);
    const double ms = 1.0 + phi.squaredNorm();

    d.sigma = p.z.dot(p.F + p.G * p.u_hat);
    d.xi = d.sigma < 0.0 ? 0 : 1;

    if (law == UpdateLaw::plain) {
        d.g1 = 1.0;
        d.term1 = (-alpha * d.e_hjb / (ms * ms)) * phi;
        d.term2 = Vector::Zero(N);
        d.term3 = Vector::Zero(N);
        out.W_dot = d.term1;
        return out;
    }

    d.g1 = law == UpdateLaw::variable ? variable_gain(d.e_hjb, cfg) : 1.0;

    // -alpha g1 phi_bar e, phi_bar = phi / ms^2
    d.term1 = (-alpha * d.g1 * d.e_hjb / (ms * ms)) * phi;

    // (alpha/2) Xi dtheta G R^{-1} (I - B) G^T z; equals -alpha dSigma/dW.
    if (d.xi == 1) {
        const Vector gz = p.G.transpose() * p.z;
        Vector scaled(gz.size());
        for (Eigen::Index i = 0; i < gz.size(); ++i) {
            const double t = std::tanh(p.tau2(i));
            scaled(i) = (1.0 - t * t) * gz(i) / cc.R(i);
        }
        d.term2 = (0.5 * alpha) * (p.jacobian * (p.G * scaled));
    } else {
        d.term2 = Vector::Zero(N);
    }

    // alpha g1 [(K1 vphi^T - K2) W + u_m dtheta G (tanh tau2 - sgn tau2) vphi^T W / ms],
    // vphi = phi / ms
    const double vphi_w = phi.dot(W_hat) / ms;
    Vector bracket(p.tau2.size());
    for (Eigen::Index i = 0; i < bracket.size(); ++i) {
        bracket(i) = std::tanh(p.tau2(i)) - sgn(p.tau2(i));
    }
    d.term3 = (alpha * d.g1) * (cfg.K1 * vphi_w - cfg.K2 * W_hat +
                                (cc.u_m * vphi_w / ms) * (p.jacobian * (p.G * bracket)));

    out.W_dot = d.term1 + d.term2 + d.term3;
    return out;
}

UpdateResult variable_gain_update(const AugmentedModel& model, const Vector& z,
                                  const CriticState& critic, const LawConfig& cfg) {
    const CriticPoint p = evaluate_point(model, z, critic, cfg.constraint);
    return compute_update(UpdateLaw::variable, p, critic.W_hat, cfg, p.u_hat);
}

UpdateResult constant_rate_update(const AugmentedModel& model, const Vector& z,
                                  const CriticState& critic, const LawConfig& cfg) {
    const CriticPoint p = evaluate_point(model, z, critic, cfg.constraint);
    return compute_update(UpdateLaw::constant, p, critic.W_hat, cfg, p.u_hat);
}

Vector plain_gd_update(const AugmentedModel& model, const Vector& z, const CriticState& critic,
                       const LawConfig& cfg) {
    const CriticPoint p = evaluate_point(model, z, critic, cfg.constraint);
    return compute_update(UpdateLaw::plain, p, critic.W_hat, cfg, p.u_hat).W_dot;
}

bool LawConfig::operator==(const LawConfig& other) const {
    return alpha == other.alpha && k2 == other.k2 && l == other.l && same_values(K1, other.K1) &&
           same_values(K2, other.K2) && constraint == other.constraint && cost == other.cost;
}

}  // namespace vgrl
