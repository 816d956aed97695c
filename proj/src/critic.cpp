#include "vgrl/critic.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace vgrl {

namespace {

double ipow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

void check_state(const RegressorBasis& basis, const Vector& z) {
    if (z.size() != basis.state_dim()) {
        throw ConfigError("state has length " + std::to_string(z.size()) +
                          " but basis expects " + std::to_string(basis.state_dim()));
    }
}

}  // namespace

RegressorBasis::RegressorBasis(std::vector<Exponents> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw ConfigError("regressor basis must have at least one term");
    dim_ = static_cast<int>(terms_.front().size());
    if (dim_ == 0) throw ConfigError("basis exponent tuples must be non-empty");

    std::set<Exponents> seen;
    for (std::size_t j = 0; j < terms_.size(); ++j) {
        const auto& t = terms_[j];
        if (static_cast<int>(t.size()) != dim_) {
            throw ConfigError("basis term " + std::to_string(j + 1) + " has " +
                              std::to_string(t.size()) + " exponents, expected " +
                              std::to_string(dim_));
        }
        if (std::any_of(t.begin(), t.end(), [](int e) { return e < 0; })) {
            throw ConfigError("basis term " + std::to_string(j + 1) + " has a negative exponent");
        }
        if (std::accumulate(t.begin(), t.end(), 0) < 1) {
            throw ConfigError("basis term " + std::to_string(j + 1) +
                              " is constant; every regressor must vanish at the origin");
        }
        if (!seen.insert(t).second) {
            throw ConfigError("basis term " + std::to_string(j + 1) + " duplicates an earlier term");
        }
        std::vector<Factor> f;
        for (int k = 0; k < dim_; ++k) {
            if (t[k] > 0) f.push_back({k, t[k]});
        }
        factors_.push_back(std::move(f));
    }
}

void eval_basis_and_jacobian(const RegressorBasis& basis, const Vector& z, Vector& theta,
                             Matrix& jacobian) {
    check_state(basis, z);
    const int N = basis.size();
    const int d = basis.state_dim();
    theta.resize(N);
    jacobian.setZero(N, d);
    for (int j = 0; j < N; ++j) {
        const auto& factors = basis.factors(j);
        double value = 1.0;
        for (const auto& f : factors) value *= ipow(z(f.var), f.power);
        theta(j) = value;
        for (const auto& f : factors) {
            double partial = f.power * ipow(z(f.var), f.power - 1);
            for (const auto& other : factors) {
                if (other.var != f.var) partial *= ipow(z(other.var), other.power);
            }
            jacobian(j, f.var) = partial;
        }
    }
}

Vector eval_basis(const RegressorBasis& basis, const Vector& z) {
    check_state(basis, z);
    Vector theta(basis.size());
    for (int j = 0; j < basis.size(); ++j) {
        double value = 1.0;
        for (const auto& f : basis.factors(j)) value *= ipow(z(f.var), f.power);
        theta(j) = value;
    }
    return theta;
}

Matrix eval_basis_jacobian(const RegressorBasis& basis, const Vector& z) {
    Vector theta;
    Matrix jac;
    eval_basis_and_jacobian(basis, z, theta, jac);
    return jac;
}

RegressorBasis quadratic_basis_2d() {
    return polynomial_basis(4, 2, 2);
}

RegressorBasis polynomial_basis(int dim, int min_degree, int max_degree) {
    if (dim <= 0 || min_degree < 1 || max_degree < min_degree) {
        throw ConfigError("invalid polynomial basis request");
    }
    std::vector<RegressorBasis::Exponents> terms;
    for (int degree = min_degree; degree <= max_degree; ++degree) {
        std::vector<RegressorBasis::Exponents> group;
        // Enumerate exponent tuples of this total degree in lexicographic
        // order of the variables used (z1z2 before z1z3 ...).
        RegressorBasis::Exponents e(dim, 0);
        auto rec = [&](auto&& self, int start, int remaining) -> void {
            if (remaining == 0) {
                group.push_back(e);
                return;
            }
            for (int k = start; k < dim; ++k) {
                ++e[k];
                self(self, k, remaining - 1);
                --e[k];
            }
        };
        rec(rec, 0, degree);
        // Pure powers first, then mixed terms; mixed terms keep enumeration order.
        std::stable_partition(group.begin(), group.end(), [](const auto& t) {
            return std::count_if(t.begin(), t.end(), [](int x) { return x > 0; }) == 1;
        });
        terms.insert(terms.end(), group.begin(), group.end());
    }
    return RegressorBasis(std::move(terms));
}

CriticState::CriticState(RegressorBasis b, Vector w) : basis(std::move(b)), W_hat(std::move(w)) {
    if (W_hat.size() != basis.size()) {
        throw ConfigError("weight vector has length " + std::to_string(W_hat.size()) +
                          ", basis has " + std::to_string(basis.size()) + " terms");
    }
}

double value_estimate(const CriticState& critic, const Vector& z) {
    if (critic.W_hat.size() != critic.basis.size()) {
        throw ConfigError("weight vector length does not match basis size");
    }
    return critic.W_hat.dot(eval_basis(critic.basis, z));
}

}  // namespace vgrl
