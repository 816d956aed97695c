#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vgrl/dynamics.hpp"

using namespace vgrl;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

}  // namespace

TEST_CASE("preset plant and reference values") {
    const auto [plant, ref] = preset_system_2d();
    CHECK(plant.n == 2);
    CHECK(plant.m == 1);
    CHECK(plant.f(vec({0, 0})).norm() == 0.0);

    // f2 = -(1.5)(-0.5) - 49(0.5) + 0.5 cos^3(0.5) sin(-0.5)
    const Vector f = plant.f(vec({0.5, -0.5}));
    const double c = std::cos(0.5);
    CHECK(f(0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(f(1) == doctest::Approx(-23.75 + 0.5 * c * c * c * std::sin(-0.5)).epsilon(1e-15));

    const Vector h = ref.H(vec({1, 0}));
    CHECK(h(0) == 0.0);
    CHECK(h(1) == -49.0);
}

TEST_CASE("augmented drift at zero and at a hand-evaluated point") {
    const AugmentedModel model = oracle::tracking_model();
    CHECK(model.dim() == 4);
    CHECK(model.F(Vector::Zero(4)).norm() == 0.0);

    // x = e + xd = (0.4, 0.6), H(xd) = (0.4, -14.7)
    const Vector F = model.F(vec({0.1, 0.2, 0.3, 0.4}));
    const double c = std::cos(0.4);
    CHECK(F(0) == doctest::Approx(-0.2).epsilon(1e-14));
    CHECK(F(1) == doctest::Approx(-5.74 + 0.5 * c * c * c * std::sin(0.6)).epsilon(1e-14));
    CHECK(F(2) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(F(3) == doctest::Approx(-14.7).epsilon(1e-15));
}

TEST_CASE("coupling matrix is [0 1 0 0]^T everywhere") {
    const AugmentedModel model = oracle::tracking_model();
    std::mt19937_64 rng(11);
    Matrix expected(4, 1);
    expected << 0, 1, 0, 0;
    for (int k = 0; k < 50; ++k) {
        const Matrix G = model.G(oracle::uniform(rng, 4, -3, 3));
        CHECK(same_values(G, expected));
    }
}

TEST_CASE("evaluate matches F and G") {
    const AugmentedModel model = oracle::tracking_model();
    const Vector z = vec({0.3, -1.2, 0.7, 2.0});
    Vector F;
    Matrix G;
    model.evaluate(z, F, G);
    CHECK(same_values(F, model.F(z)));
    CHECK(same_values(G, model.G(z)));
}

TEST_CASE("augmented state assembly") {
    const Vector z = make_augmented_state(vec({1.5, 1.5}), vec({0.5, -0.5}));
    CHECK(same_values(z, vec({1.0, 2.0, 0.5, -0.5})));
    CHECK_THROWS_AS(make_augmented_state(vec({1}), vec({1, 2})), ConfigError);
}

TEST_CASE("dimension errors") {
    auto [plant, ref] = preset_system_2d();
    const AugmentedModel model(plant, ref);
    CHECK_THROWS_AS(model.F(Vector::Zero(3)), ConfigError);
    CHECK_THROWS_AS(model.G(Vector::Zero(5)), ConfigError);

    ReferenceModel bad = ref;
    bad.n = 3;
    CHECK_THROWS_AS(AugmentedModel(plant, bad), ConfigError);

    PlantModel wide = plant;
    wide.g = [](const Vector&) { return Matrix::Ones(2, 2); };
    const AugmentedModel mis(wide, ref);
    CHECK_THROWS_AS(mis.G(Vector::Zero(4)), ConfigError);
}

TEST_CASE("uncertainty bound defaults to zero and rejects negatives") {
    auto [plant, ref] = preset_system_2d();
    CHECK(AugmentedModel(plant, ref).d_M(Vector::Ones(4)) == 0.0);
    plant.d_M = [](const Vector& z) { return z.norm(); };
    CHECK(AugmentedModel(plant, ref).d_M(Vector::Constant(4, 0.5)) == doctest::Approx(1.0));
    plant.d_M = [](const Vector&) { return -1.0; };
    CHECK_THROWS_AS(AugmentedModel(plant, ref).d_M(Vector::Zero(4)), DomainError);
}
