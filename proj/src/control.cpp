#include "vgrl/control.hpp"

#include <cmath>
#include <string>

namespace vgrl {

void ControlConstraint::validate(int m) const {
    if (!(u_m > 0.0) || !std::isfinite(u_m)) {
        throw ConfigError("u_m must be a positive finite bound");
    }
    if (R.size() != m) {
        throw ConfigError("R has " + std::to_string(R.size()) + " diagonal entries, expected " +
                          std::to_string(m));
    }
    if ((R.array() <= 0.0).any()) throw ConfigError("R must be positive definite");
    if (!(margin >= 0.0 && margin < 1.0)) throw ConfigError("penalty margin must lie in [0, 1)");
}

void CostWeights::validate(int n) const {
    if (Q.size() != n) {
        throw ConfigError("Q has " + std::to_string(Q.size()) + " diagonal entries, expected " +
                          std::to_string(n));
    }
    if ((Q.array() <= 0.0).any()) throw ConfigError("Q must be positive definite");
    if (!(gamma >= 0.0)) throw ConfigError("discount gamma must be nonnegative");
}

Matrix CostWeights::Q1() const {
    const auto n = Q.size();
    Matrix q1 = Matrix::Zero(2 * n, 2 * n);
    q1.topLeftCorner(n, n) = Q.asDiagonal();
    return q1;
}

double CostWeights::state_cost(const Vector& z) const {
    if (z.size() != 2 * Q.size()) throw ConfigError("state length does not match Q");
    const auto e = z.head(Q.size());
    return (e.array().square() * Q.array()).sum();
}

Vector tau2(const Matrix& G, const Matrix& jacobian, const Vector& W_hat,
            const ControlConstraint& cc) {
    Vector t = G.transpose() * (jacobian.transpose() * W_hat);
    t.array() /= (2.0 * cc.u_m) * cc.R.array();
    return t;
}

Vector tau2(const AugmentedModel& model, const Vector& z, const CriticState& critic,
            const ControlConstraint& cc) {
    cc.validate(model.m());
    return tau2(model.G(z), eval_basis_jacobian(critic.basis, z), critic.W_hat, cc);
}

Vector constrained_control(const AugmentedModel& model, const Vector& z,
                           const CriticState& critic, const ControlConstraint& cc) {
    return (-cc.u_m) * tau2(model, z, critic, cc).array().tanh().matrix();
}

double control_penalty(const Vector& u, const ControlConstraint& cc) {
    cc.validate(static_cast<int>(u.size()));
    const double limit = cc.u_m * (1.0 - cc.margin);
    double total = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double ui = u(i);
        if (!(std::abs(ui) < limit)) {
            throw DomainError("control component " + std::to_string(i + 1) + " = " +
                              std::to_string(ui) + " is outside the open interval (-u_m, u_m)");
        }
        const double r = ui / cc.u_m;
        total += cc.R(i) * (2.0 * cc.u_m * ui * std::atanh(r) +
                            cc.u_m * cc.u_m * std::log1p(-r * r));
    }
    return total;
}

double log_sech2(double tau) {
    // ln(1 - tanh^2 t) = -2 ln cosh t = -2 (|t| + ln(1 + e^{-2|t|}) - ln 2)
    const double a = std::abs(tau);
    return -2.0 * (a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0));
}

double utility(const AugmentedModel& model, const Vector& z, const Vector& u,
               const CostWeights& cw, const ControlConstraint& cc) {
    const double d = model.d_M(z);
    return d * d + cw.state_cost(z) + control_penalty(u, cc);
}

bool ControlConstraint::operator==(const ControlConstraint& other) const {
    return u_m == other.u_m && same_values(R, other.R) && margin == other.margin;
}

bool CostWeights::operator==(const CostWeights& other) const {
    return same_values(Q, other.Q) && gamma == other.gamma;
}

}  // namespace vgrl
