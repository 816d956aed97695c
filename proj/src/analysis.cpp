#include "vgrl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vgrl {

MAssembly assemble_M(const Vector& K1, const Matrix& K2) {
    const auto N = K1.size();
    if (K2.rows() != N || K2.cols() != N) {
        throw ConfigError("K2 must be " + std::to_string(N) + "x" + std::to_string(N) +
                          " to match K1");
    }
    if (K2 != K2.transpose()) {
        throw ConfigError("K2 must be symmetric for M = [[1, -K1^T/2], [-K1/2, K2]] to be symmetric");
    }
    MAssembly out;
    out.M.resize(N + 1, N + 1);
    out.M(0, 0) = 1.0;
    out.M.block(0, 1, 1, N) = -0.5 * K1.transpose();
    out.M.block(1, 0, N, 1) = -0.5 * K1;
    out.M.bottomRightCorner(N, N) = K2;

    Eigen::SelfAdjointEigenSolver<Matrix> solver(out.M, Eigen::EigenvaluesOnly);
    out.lambda_min = solver.eigenvalues()(0);
    out.pd_ok = out.lambda_min > 0.0;
    return out;
}

double gamma_factor(double gamma1) {
    // The discriminant reaches zero at the upper limit; allow rounding slack there.
    if (!(gamma1 >= 0.0) || gamma1 > kGamma1Max * (1.0 + 1e-14)) {
        throw DomainError("gamma_factor requires 0 <= gamma1 <= 3 - sqrt(8), got " +
                          std::to_string(gamma1));
    }
    const double half = 0.5 * (1.0 - gamma1);
    return half + std::sqrt(std::max(half * half - gamma1, 0.0));
}

double gamma_prime_factor(double gamma1, double alpha2) {
    if (!(gamma1 >= 0.0) || !(alpha2 >= 0.0)) {
        throw DomainError("gamma_prime_factor requires gamma1 >= 0 and alpha2 >= 0");
    }
    const double half = 0.5 * (1.0 - gamma1 + alpha2);
    return half + std::sqrt(half * half + gamma1);
}

double tanh_diff_bound(const Vector& tau1, const Vector& tau2) {
    if (tau1.size() != tau2.size()) {
        throw ConfigError("tanh_diff_bound needs equal-length vectors");
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < tau1.size(); ++i) {
        const double d = tau1(i) - tau2(i);
        sum += std::min(d * d, 4.0);
    }
    return std::sqrt(sum);
}

double uub_weight_bound(double b_N, const MAssembly& m, const Vector& phi, double factor) {
    if (!(m.lambda_min > 0.0)) {
        throw DomainError("weight bound undefined: M is not positive definite");
    }
    return (b_N / m.lambda_min) * factor / std::sqrt(1.0 + phi.squaredNorm());
}

BoundReport make_bound_report(const Vector& K1, const Matrix& K2, int m, const BoundInputs& in,
                              const Vector& phi) {
    const MAssembly M = assemble_M(K1, K2);
    BoundReport r;
    r.lambda_min_M = M.lambda_min;
    r.pd_ok = M.pd_ok;
    try {
        r.gamma_factor = gamma_factor(in.gamma1);
    } catch (const DomainError&) {
        r.gamma_factor.reset();
    }
    r.gamma_prime_factor = gamma_prime_factor(in.gamma1, in.alpha2);
    r.t_m_cap = 2.0 * std::sqrt(static_cast<double>(m));
    if (M.pd_ok) {
        r.weight_bound_constant = uub_weight_bound(in.b_N, M, phi, 1.0);
        if (r.gamma_factor) r.weight_bound = uub_weight_bound(in.b_N, M, phi, *r.gamma_factor);
    }
    return r;
}

}  // namespace vgrl
