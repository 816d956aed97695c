#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "oracles.hpp"
#include "vgrl/analysis.hpp"

using namespace vgrl;

namespace {

bool schur_pd(const Vector& K1, const Matrix& K2) {
    const Matrix S = K2 - 0.25 * K1 * K1.transpose();
    return Eigen::LLT<Matrix>(S).info() == Eigen::Success;
}

// Random symmetric K2 = A A^T + shift I and K1; shift is drawn so both
// verdicts occur.
std::pair<Vector, Matrix> random_gains(std::mt19937_64& rng, int N) {
    const Vector K1 = oracle::uniform(rng, N, -1, 1);
    Matrix A(N, N);
    for (int j = 0; j < N; ++j) A.col(j) = oracle::uniform(rng, N, -0.3, 0.3);
    std::uniform_real_distribution<double> shift(-0.2, 0.6);
    Matrix K2 = A * A.transpose() + shift(rng) * Matrix::Identity(N, N);
    K2 = (0.5 * (K2 + K2.transpose())).eval();
    return {K1, K2};
}

}  // namespace

TEST_CASE("M assembly examples") {
    const MAssembly id = assemble_M(Vector::Zero(3), Matrix::Identity(3, 3));
    CHECK(same_values(id.M, Matrix::Identity(4, 4)));
    CHECK(id.lambda_min == doctest::Approx(1.0));
    CHECK(id.pd_ok);

    const MAssembly def = assemble_M(Vector::Constant(10, 0.1), 0.1 * Matrix::Identity(10, 10));
    CHECK(def.M(0, 0) == 1.0);
    CHECK(def.M(0, 3) == -0.05);
    CHECK(def.M(3, 0) == -0.05);
    CHECK(def.pd_ok == schur_pd(Vector::Constant(10, 0.1), 0.1 * Matrix::Identity(10, 10)));
    CHECK(def.pd_ok);

    CHECK_THROWS_AS(assemble_M(Vector::Zero(2), Matrix::Identity(3, 3)), ConfigError);
    Matrix ns = Matrix::Identity(2, 2);
    ns(0, 1) = 0.5;
    CHECK_THROWS_AS(assemble_M(Vector::Zero(2), ns), ConfigError);
}

TEST_CASE("M verdict matches the Schur complement and M is symmetric") {
    std::mt19937_64 rng(99);
    int pd = 0;
    for (int k = 0; k < 100; ++k) {
        const auto [K1, K2] = random_gains(rng, 6);
        const MAssembly a = assemble_M(K1, K2);
        CHECK(a.pd_ok == schur_pd(K1, K2));
        CHECK(same_values(a.M, Matrix(a.M.transpose())));
        pd += a.pd_ok;
    }
    CHECK(pd > 0);
    CHECK(pd < 100);
}

TEST_CASE("gamma factor") {
    CHECK(gamma_factor(0.0) == 1.0);
    CHECK(std::abs(gamma_factor(kGamma1Max) - (std::sqrt(2.0) - 1.0)) <= 1e-12);
    CHECK(kGamma1Max == doctest::Approx(3.0 - std::sqrt(8.0)).epsilon(1e-15));

    double prev = gamma_factor(0.0);
    for (int k = 1; k <= 100; ++k) {
        const double g = kGamma1Max * k / 100.0;
        const double v = gamma_factor(g);
        CHECK(v < prev);
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
    CHECK_THROWS_AS(gamma_factor(-1e-3), DomainError);
    CHECK_THROWS_AS(gamma_factor(0.2), DomainError);
}

TEST_CASE("gamma prime factor") {
    CHECK(gamma_prime_factor(0.0, 0.0) == 1.0);
    for (double g : {0.01, 0.1, 0.5, 2.0}) {
        CHECK(gamma_prime_factor(g, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    }
    // positive root of x^2 - (1 - g + a) x - g from the companion matrix
    const double g = 0.1, a = 0.2;
    Eigen::Matrix2d companion;
    companion << 1.0 - g + a, g, 1.0, 0.0;
    const auto ev = companion.eigenvalues();
    const double root = std::max(ev(0).real(), ev(1).real());
    CHECK(gamma_prime_factor(g, a) == doctest::Approx(root).epsilon(1e-14));
    CHECK_THROWS_AS(gamma_prime_factor(-0.1, 0.0), DomainError);
    CHECK_THROWS_AS(gamma_prime_factor(0.1, -0.1), DomainError);
}

TEST_CASE("tanh difference bound") {
    Vector t(2);
    t << 0.5, 3.0;
    CHECK(tanh_diff_bound(t, t) == 0.0);
    CHECK(tanh_diff_bound(t, Vector::Zero(2)) == doctest::Approx(std::sqrt(4.25)).epsilon(1e-15));
    CHECK((t.array().tanh().matrix()).norm() <= std::sqrt(4.25));

    Vector far(3);
    far << 2.0, -7.0, 30.0;
    CHECK(tanh_diff_bound(far, Vector::Zero(3)) == 2.0 * std::sqrt(3.0));
    CHECK_THROWS_AS(tanh_diff_bound(far, t), ConfigError);

    std::mt19937_64 rng(4);
    for (int m = 1; m <= 3; ++m) {
        for (int k = 0; k < 1000; ++k) {
            const Vector a = oracle::uniform(rng, m, -5, 5);
            const Vector b = oracle::uniform(rng, m, -5, 5);
            const double lhs = (a.array().tanh() - b.array().tanh()).matrix().norm();
            CHECK(lhs <= tanh_diff_bound(a, b));
        }
    }
}

TEST_CASE("weight bound") {
    const MAssembly id = assemble_M(Vector::Zero(2), Matrix::Identity(2, 2));
    CHECK(uub_weight_bound(1.0, id, Vector::Zero(2), 1.0) == 1.0);
    CHECK(uub_weight_bound(2.0, id, Vector::Zero(2), 1.0) == 2.0);
    Vector phi(2);
    phi << 1.0, 1.0;
    CHECK(uub_weight_bound(1.0, id, phi, 1.0) == doctest::Approx(1.0 / std::sqrt(3.0)));

    Matrix neg = Matrix::Identity(2, 2);
    neg(1, 1) = -1.0;
    CHECK_THROWS_AS(uub_weight_bound(1.0, assemble_M(Vector::Zero(2), neg), phi, 1.0),
                    DomainError);
}

TEST_CASE("bound report") {
    BoundInputs in;
    in.b_N = 2.0;
    in.gamma1 = 0.1;
    const Vector K1 = Vector::Constant(10, 0.1);
    const Matrix K2 = 0.1 * Matrix::Identity(10, 10);
    const BoundReport r = make_bound_report(K1, K2, 1, in, Vector::Zero(10));
    REQUIRE(r.gamma_factor);
    REQUIRE(r.weight_bound);
    REQUIRE(r.weight_bound_constant);
    CHECK(r.pd_ok);
    CHECK(r.t_m_cap == 2.0);
    CHECK(*r.weight_bound_constant == doctest::Approx(2.0 / r.lambda_min_M));
    CHECK(*r.weight_bound < *r.weight_bound_constant);
    CHECK(*r.weight_bound == doctest::Approx(*r.gamma_factor * *r.weight_bound_constant));

    in.gamma1 = 0.5;
    CHECK_FALSE(make_bound_report(K1, K2, 1, in, Vector::Zero(10)).gamma_factor);
}
