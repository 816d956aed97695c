#pragma once

#include <vector>

#include "vgrl/types.hpp"

namespace vgrl {

// Polynomial regressor basis. Each term is a monomial prod_k z_k^{e_k};
// weights are interpreted positionally against the term order.
class RegressorBasis {
public:
    using Exponents = std::vector<int>;

    RegressorBasis() = default;
    // Throws ConfigError on empty/ragged tuples, negative exponents,
    // zero-degree terms (theta(0) must vanish) or duplicate terms.
    explicit RegressorBasis(std::vector<Exponents> terms);

    int size() const noexcept { return static_cast<int>(terms_.size()); }
    int state_dim() const noexcept { return dim_; }
    const std::vector<Exponents>& terms() const noexcept { return terms_; }

    bool operator==(const RegressorBasis& other) const { return terms_ == other.terms_; }

    // Nonzero (variable, exponent) pairs of term j.
    struct Factor {
        int var;
        int power;
    };
    const std::vector<Factor>& factors(int j) const { return factors_[j]; }

private:
    std::vector<Exponents> terms_;
    std::vector<std::vector<Factor>> factors_;
    int dim_ = 0;
};

// theta(z), length N.
Vector eval_basis(const RegressorBasis& basis, const Vector& z);

// d theta / dz, N x dim(z).
Matrix eval_basis_jacobian(const RegressorBasis& basis, const Vector& z);

// Computes theta(z) and its Jacobian in one pass.
void eval_basis_and_jacobian(const RegressorBasis& basis, const Vector& z, Vector& theta,
                             Matrix& jacobian);

// The ten quadratic monomials over a 4-dimensional augmented state:
// z1^2, z2^2, z3^2, z4^2, z1z2, z1z3, z1z4, z2z3, z2z4, z3z4.
RegressorBasis quadratic_basis_2d();

// All monomials of total degree min_degree..max_degree over dim variables,
// grouped by degree. Degree-2 terms come squares first, then cross terms.
RegressorBasis polynomial_basis(int dim, int min_degree, int max_degree);

struct CriticState {
    RegressorBasis basis;
    Vector W_hat;

    CriticState() = default;
    CriticState(RegressorBasis b, Vector w);
};

// V_hat(z) = W_hat^T theta(z).
double value_estimate(const CriticState& critic, const Vector& z);

}  // namespace vgrl
