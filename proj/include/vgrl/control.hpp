#pragma once

#include "vgrl/critic.hpp"
#include "vgrl/dynamics.hpp"
#include "vgrl/types.hpp"

namespace vgrl {

// Symmetric input saturation |u_i| <= u_m with diagonal penalty weight R.
struct ControlConstraint {
    double u_m = 1.0;
    Vector R;  // diagonal of R, length m, all entries > 0
    // Inputs closer than margin * u_m to the bound are outside the penalty domain.
    double margin = 1e-12;

    void validate(int m) const;
    bool operator==(const ControlConstraint& other) const;
};

// Q1 = blkdiag(Q, 0) over z = [e; x_d]; only diag(Q) is stored.
struct CostWeights {
    Vector Q;  // length n, strictly positive
    double gamma = 0.0;

    void validate(int n) const;
    Matrix Q1() const;
    // z^T Q1 z = e^T Q e.
    double state_cost(const Vector& z) const;
    bool operator==(const CostWeights& other) const;
};

// tau2 = (1 / 2u_m) R^{-1} G^T(z) dtheta^T W_hat.
Vector tau2(const AugmentedModel& model, const Vector& z, const CriticState& critic,
            const ControlConstraint& cc);
Vector tau2(const Matrix& G, const Matrix& jacobian, const Vector& W_hat,
            const ControlConstraint& cc);

// u_hat = -u_m tanh(tau2).
Vector constrained_control(const AugmentedModel& model, const Vector& z,
                           const CriticState& critic, const ControlConstraint& cc);

// Closed form of 2 u_m int_0^u atanh(v / u_m)^T R dv:
//   sum_i R_i [2 u_m u_i atanh(u_i / u_m) + u_m^2 ln(1 - u_i^2 / u_m^2)].
// Throws DomainError when any |u_i| reaches the saturation bound.
double control_penalty(const Vector& u, const ControlConstraint& cc);

// ln(1 - tanh^2(tau)) evaluated without cancellation for large |tau|.
double log_sech2(double tau);

// d_M(z)^2 + z^T Q1 z + C(u).
double utility(const AugmentedModel& model, const Vector& z, const Vector& u,
               const CostWeights& cw, const ControlConstraint& cc);

}  // namespace vgrl
