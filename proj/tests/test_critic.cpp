#include <doctest.h>

#include "oracles.hpp"
#include "vgrl/critic.hpp"

using namespace vgrl;

TEST_CASE("quadratic basis order and values") {
    const RegressorBasis b = quadratic_basis_2d();
    REQUIRE(b.size() == 10);
    CHECK(b.state_dim() == 4);
    CHECK(b.terms()[4] == RegressorBasis::Exponents{1, 1, 0, 0});
    for (const auto& t : b.terms()) {
        int deg = 0;
        for (int e : t) deg += e;
        CHECK(deg == 2);
    }

    CHECK(eval_basis(b, Vector::Zero(4)).norm() == 0.0);
    CHECK(same_values(eval_basis(b, Vector::Ones(4)), Vector::Ones(10)));

    Vector z(4);
    z << 1, 2, 3, 4;
    Vector expected(10);
    expected << 1, 4, 9, 16, 2, 3, 4, 6, 8, 12;
    CHECK(same_values(eval_basis(b, z), expected));
}

TEST_CASE("quadratic basis equals the generated degree-2 basis") {
    CHECK(polynomial_basis(4, 2, 2) == quadratic_basis_2d());
    CHECK(polynomial_basis(2, 1, 2).size() == 5);
}

TEST_CASE("jacobian rows") {
    const RegressorBasis b = quadratic_basis_2d();
    CHECK(eval_basis_jacobian(b, Vector::Zero(4)).norm() == 0.0);
    Vector z(4);
    z << 1, 2, 3, 4;
    const Matrix J = eval_basis_jacobian(b, z);
    CHECK(J.rows() == 10);
    CHECK(J.cols() == 4);
    Eigen::RowVector4d row0(2, 0, 0, 0);
    CHECK(same_values(J.row(0), row0));
    Eigen::RowVector4d row9(0, 0, 4, 3);
    CHECK(same_values(J.row(9), row9));
}

TEST_CASE("jacobian agrees with central differences") {
    std::mt19937_64 rng(2024);
    const RegressorBasis bases[] = {quadratic_basis_2d(), polynomial_basis(4, 1, 4)};
    for (const auto& b : bases) {
        for (int k = 0; k < 100; ++k) {
            const Vector z = oracle::uniform(rng, 4, -2, 2);
            const Matrix fd = oracle::central_jacobian(
                [&](const Vector& x) { return eval_basis(b, x); }, z, 1e-5);
            CHECK(oracle::rel_err(eval_basis_jacobian(b, z), fd) <= 1e-6);
        }
    }
}

TEST_CASE("combined evaluation matches separate calls") {
    const RegressorBasis b = polynomial_basis(4, 1, 3);
    Vector z(4);
    z << 0.3, -0.7, 1.1, 2.0;
    Vector theta;
    Matrix J;
    eval_basis_and_jacobian(b, z, theta, J);
    CHECK(same_values(theta, eval_basis(b, z)));
    CHECK(same_values(J, eval_basis_jacobian(b, z)));
}

TEST_CASE("value estimate") {
    const RegressorBasis b = quadratic_basis_2d();
    std::mt19937_64 rng(5);
    const Vector z = oracle::uniform(rng, 4, -1, 1);
    CHECK(value_estimate(CriticState(b, Vector::Zero(10)), z) == 0.0);
    CHECK(value_estimate(CriticState(b, oracle::uniform(rng, 10, -1, 1)), Vector::Zero(4)) == 0.0);

    Vector z1 = Vector::Zero(4);
    z1(0) = 2.0;
    CHECK(value_estimate(CriticState(b, Vector::Unit(10, 0)), z1) == 4.0);

    // linear in the weights
    const Vector w1 = oracle::uniform(rng, 10, -1, 1);
    const Vector w2 = oracle::uniform(rng, 10, -1, 1);
    const double lhs = value_estimate(CriticState(b, 2.0 * w1 + w2), z);
    const double rhs =
        2.0 * value_estimate(CriticState(b, w1), z) + value_estimate(CriticState(b, w2), z);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("basis validation") {
    using T = std::vector<RegressorBasis::Exponents>;
    CHECK_THROWS_AS(RegressorBasis(T{}), ConfigError);
    CHECK_THROWS_AS(RegressorBasis(T{{}}), ConfigError);
    CHECK_THROWS_AS(RegressorBasis(T{{1, 0}, {1}}), ConfigError);
    CHECK_THROWS_AS(RegressorBasis(T{{-1, 2}}), ConfigError);
    CHECK_THROWS_AS(RegressorBasis(T{{0, 0}}), ConfigError);
    CHECK_THROWS_AS(RegressorBasis(T{{1, 1}, {1, 1}}), ConfigError);

    const RegressorBasis b = quadratic_basis_2d();
    CHECK_THROWS_AS(eval_basis(b, Vector::Zero(3)), ConfigError);
    CHECK_THROWS_AS(eval_basis_jacobian(b, Vector::Zero(5)), ConfigError);
    CHECK_THROWS_AS(CriticState(b, Vector::Zero(9)), ConfigError);
}
