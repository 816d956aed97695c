#pragma once

#include <optional>

#include "vgrl/types.hpp"

namespace vgrl {

// Block matrix M = [[1, -K1^T/2], [-K1/2, K2]] from the weight-error
// Lyapunov analysis, with its smallest eigenvalue.
struct MAssembly {
    Matrix M;
    double lambda_min = 0.0;
    bool pd_ok = false;
};

// Throws ConfigError for dimension mismatch or a non-symmetric K2.
MAssembly assemble_M(const Vector& K1, const Matrix& K2);

// Gamma = (1 - g)/2 + sqrt((1 - g)^2 / 4 - g), defined for 0 <= g <= 3 - sqrt(8).
double gamma_factor(double gamma1);
inline constexpr double kGamma1Max = 0.17157287525380990;  // 3 - sqrt(8)
// Lower limit quoted alongside the Gamma range; gamma_factor(kGamma1Max)
// actually evaluates to sqrt(2) - 1.
inline constexpr double kQuotedGammaLowerLimit = 0.478;

// Gamma' = (1 - g + a)/2 + sqrt(((1 - g + a)/2)^2 + g) for g, a >= 0.
double gamma_prime_factor(double gamma1, double alpha2);

// T_m = sqrt(sum_i min(|t1_i - t2_i|^2, 4)); bounds ||tanh t1 - tanh t2||.
double tanh_diff_bound(const Vector& tau1, const Vector& tau2);

// (b_N / lambda_min(M)) * factor / sqrt(1 + ||phi||^2).
double uub_weight_bound(double b_N, const MAssembly& m, const Vector& phi, double factor);

struct BoundInputs {
    double b_N = 1.0;
    double gamma1 = 0.0;
    double alpha2 = 0.0;
};

struct BoundReport {
    double lambda_min_M = 0.0;
    bool pd_ok = false;
    std::optional<double> gamma_factor;  // empty outside [0, 3 - sqrt(8)]
    double gamma_prime_factor = 1.0;
    double t_m_cap = 0.0;                        // 2 sqrt(m)
    std::optional<double> weight_bound;          // scaled by Gamma
    std::optional<double> weight_bound_constant; // factor 1 reference
};

BoundReport make_bound_report(const Vector& K1, const Matrix& K2, int m, const BoundInputs& in,
                              const Vector& phi);

}  // namespace vgrl
