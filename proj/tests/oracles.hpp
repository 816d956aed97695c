#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance runner. Nothing here calls the closed forms under test.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <random>

#include "vgrl/critic.hpp"
#include "vgrl/dynamics.hpp"
#include "vgrl/learning.hpp"

namespace oracle {

using vgrl::Matrix;
using vgrl::Vector;

inline vgrl::AugmentedModel tracking_model() {
    auto [plant, ref] = vgrl::preset_system_2d();
    return vgrl::AugmentedModel(plant, ref);
}

inline Vector uniform(std::mt19937_64& rng, int n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = d(rng);
    return v;
}

inline double rel_err(const Vector& a, const Vector& b) {
    const double scale = std::max(b.norm(), 1e-300);
    return (a - b).norm() / scale;
}

inline double rel_err(const Matrix& a, const Matrix& b) {
    const double scale = std::max(b.norm(), 1e-300);
    return (a - b).norm() / scale;
}

// Central differences of a vector-valued map; column k is d/dx_k.
inline Matrix central_jacobian(const std::function<Vector(const Vector&)>& fn, const Vector& x,
                               double h) {
    const Vector f0 = fn(x);
    Matrix J(f0.size(), x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        Vector xp = x, xm = x;
        xp(k) += h;
        xm(k) -= h;
        J.col(k) = (fn(xp) - fn(xm)) / (2.0 * h);
    }
    return J;
}

inline Vector central_gradient(const std::function<double(const Vector&)>& fn, const Vector& x,
                               double h) {
    Vector g(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        Vector xp = x, xm = x;
        xp(k) += h;
        xm(k) -= h;
        g(k) = (fn(xp) - fn(xm)) / (2.0 * h);
    }
    return g;
}

// 2 u_m int_0^u R atanh(v / u_m) dv per component, by adaptive Gauss-Kronrod.
inline double penalty_quadrature(const Vector& u, double u_m, const Vector& R) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const auto integrand = [&](double v) { return 2.0 * u_m * R(i) * std::atanh(v / u_m); };
        double err = 0.0;
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            integrand, 0.0, u(i), 12, 1e-13, &err);
    }
    return total;
}

// Hamiltonian evaluated from its defining pieces at the critic's control:
//   W^T dtheta (F + G u) - gamma W^T theta + z^T Q1 z + d_M^2 + C(u)
// with C(u) from quadrature. Equals the HJB residual at u = u_hat.
inline double hamiltonian_quadrature(const vgrl::AugmentedModel& model, const Vector& z,
                                     const vgrl::RegressorBasis& basis, const Vector& W,
                                     const vgrl::LawConfig& cfg) {
    const Vector F = model.F(z);
    const Matrix G = model.G(z);
    const Matrix J = vgrl::eval_basis_jacobian(basis, z);
    const Vector theta = vgrl::eval_basis(basis, z);
    const double u_m = cfg.constraint.u_m;
    Vector tau = (0.5 / u_m) * (G.transpose() * (J.transpose() * W));
    for (Eigen::Index i = 0; i < tau.size(); ++i) tau(i) /= cfg.constraint.R(i);
    const Vector u = -u_m * tau.array().tanh().matrix();
    double state_cost = 0.0;
    for (int i = 0; i < model.n(); ++i) state_cost += cfg.cost.Q(i) * z(i) * z(i);
    const double d = model.d_M(z);
    return W.dot(J * (F + G * u)) - cfg.cost.gamma * W.dot(theta) + state_cost + d * d +
           penalty_quadrature(u, u_m, cfg.constraint.R);
}

// Sigma(W) = z^T (F + G u_hat(W)).
inline double sigma_of_weights(const vgrl::AugmentedModel& model, const Vector& z,
                               const vgrl::RegressorBasis& basis, const Vector& W,
                               const vgrl::ControlConstraint& cc) {
    const Vector F = model.F(z);
    const Matrix G = model.G(z);
    const Matrix J = vgrl::eval_basis_jacobian(basis, z);
    Vector tau = (0.5 / cc.u_m) * (G.transpose() * (J.transpose() * W));
    for (Eigen::Index i = 0; i < tau.size(); ++i) tau(i) /= cc.R(i);
    const Vector u = -cc.u_m * tau.array().tanh().matrix();
    return z.dot(F + G * u);
}

// Global error of RK4 on the harmonic reference at t_end for step dt.
double reference_rk4_error(double dt, double t_end);

// Observed order log2(e(dt) / e(dt/2)).
inline double reference_rk4_order(double dt, double t_end) {
    return std::log2(reference_rk4_error(dt, t_end) / reference_rk4_error(0.5 * dt, t_end));
}

}  // namespace oracle
