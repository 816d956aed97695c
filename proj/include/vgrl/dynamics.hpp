#pragma once

#include <functional>
#include <utility>

#include "vgrl/types.hpp"

namespace vgrl {

// Affine-in-control plant xdot = f(x) + g(x) u. The matched uncertainty is
// not simulated; only its bound d_M(z) enters the cost.
struct PlantModel {
    int n = 0;
    int m = 0;
    std::function<Vector(const Vector&)> f;
    std::function<Matrix(const Vector&)> g;
    // Bound on the matched uncertainty, evaluated on the augmented state.
    // Empty means the zero map.
    std::function<double(const Vector&)> d_M;
};

// Autonomous reference generator xd_dot = H(xd) with H(0) = 0.
struct ReferenceModel {
    int n = 0;
    std::function<Vector(const Vector&)> H;
};

// Tracking dynamics over z = [e; x_d], e = x - x_d:
//   F(z) = [f(e + x_d) - H(x_d); H(x_d)],  G(z) = [g(e + x_d); 0].
class AugmentedModel {
public:
    AugmentedModel(PlantModel plant, ReferenceModel reference);

    int n() const noexcept { return plant_.n; }
    int m() const noexcept { return plant_.m; }
    int dim() const noexcept { return 2 * plant_.n; }

    Vector F(const Vector& z) const;
    Matrix G(const Vector& z) const;
    // Both at once; shares the e + x_d and H(x_d) evaluations.
    void evaluate(const Vector& z, Vector& F, Matrix& G) const;
    double d_M(const Vector& z) const;

    const PlantModel& plant() const noexcept { return plant_; }
    const ReferenceModel& reference() const noexcept { return reference_; }

private:
    void check_dim(const Vector& z) const;

    PlantModel plant_;
    ReferenceModel reference_;
};

AugmentedModel augment(PlantModel plant, ReferenceModel reference);

// Assembles z = [x - x_d; x_d].
Vector make_augmented_state(const Vector& x, const Vector& x_d);

// Second-order benchmark plant
//   f1 = -x1 + x2
//   f2 = -(x1 + 1) x2 - 49 x1 + 0.5 cos^3(x1) sin(x2),   g = [0, 1]^T
// with the harmonic reference xd1' = xd2, xd2' = -49 xd1.
std::pair<PlantModel, ReferenceModel> preset_system_2d();

}  // namespace vgrl
