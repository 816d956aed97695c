#include "vgrl/dynamics.hpp"

#include <cmath>
#include <string>

namespace vgrl {

AugmentedModel::AugmentedModel(PlantModel plant, ReferenceModel reference)
    : plant_(std::move(plant)), reference_(std::move(reference)) {
    if (plant_.n <= 0 || plant_.m <= 0) {
        throw ConfigError("plant dimensions must be positive (n=" + std::to_string(plant_.n) +
                          ", m=" + std::to_string(plant_.m) + ")");
    }
    if (plant_.n != reference_.n) {
        throw ConfigError("plant state dimension " + std::to_string(plant_.n) +
                          " does not match reference dimension " + std::to_string(reference_.n));
    }
    if (!plant_.f || !plant_.g || !reference_.H) {
        throw ConfigError("plant and reference dynamics must be callable");
    }
}

void AugmentedModel::check_dim(const Vector& z) const {
    if (z.size() != dim()) {
        throw ConfigError("augmented state has length " + std::to_string(z.size()) +
                          ", expected " + std::to_string(dim()));
    }
}

void AugmentedModel::evaluate(const Vector& z, Vector& F, Matrix& G) const {
    check_dim(z);
    const int n = plant_.n;
    const Vector xd = z.tail(n);
    const Vector x = z.head(n) + xd;

    const Vector h = reference_.H(xd);
    const Vector fx = plant_.f(x);
    const Matrix gx = plant_.g(x);
    if (h.size() != n || fx.size() != n) {
        throw ConfigError("dynamics returned a vector of the wrong length");
    }
    if (gx.rows() != n || gx.cols() != plant_.m) {
        throw ConfigError("coupling matrix g(x) is " + std::to_string(gx.rows()) + "x" +
                          std::to_string(gx.cols()) + ", expected " + std::to_string(n) + "x" +
                          std::to_string(plant_.m));
    }

    F.resize(2 * n);
    F.head(n) = fx - h;
    F.tail(n) = h;
    G = Matrix::Zero(2 * n, plant_.m);
    G.topRows(n) = gx;
}

Vector AugmentedModel::F(const Vector& z) const {
    Vector F;
    Matrix G;
    evaluate(z, F, G);
    return F;
}

Matrix AugmentedModel::G(const Vector& z) const {
    Vector F;
    Matrix G;
    evaluate(z, F, G);
    return G;
}

double AugmentedModel::d_M(const Vector& z) const {
    if (!plant_.d_M) return 0.0;
    const double d = plant_.d_M(z);
    if (!(d >= 0.0)) {
        throw DomainError("uncertainty bound d_M(z) must be nonnegative, got " + std::to_string(d));
    }
    return d;
}

AugmentedModel augment(PlantModel plant, ReferenceModel reference) {
    return AugmentedModel(std::move(plant), std::move(reference));
}

Vector make_augmented_state(const Vector& x, const Vector& x_d) {
    if (x.size() != x_d.size()) {
        throw ConfigError("plant and desired state lengths differ");
    }
    Vector z(2 * x.size());
    z << x - x_d, x_d;
    return z;
}

std::pair<PlantModel, ReferenceModel> preset_system_2d() {
    PlantModel plant;
    plant.n = 2;
    plant.m = 1;
    plant.f = [](const Vector& x) {
        const double c = std::cos(x(0));
        Vector out(2);
        out(0) = -x(0) + x(1);
        out(1) = -(x(0) + 1.0) * x(1) - 49.0 * x(0) + 0.5 * c * c * c * std::sin(x(1));
        return out;
    };
    plant.g = [](const Vector&) {
        Matrix out(2, 1);
        out << 0.0, 1.0;
        return out;
    };

    ReferenceModel reference;
    reference.n = 2;
    reference.H = [](const Vector& xd) {
        Vector out(2);
        out(0) = xd(1);
        out(1) = -49.0 * xd(0);
        return out;
    };
    return {std::move(plant), std::move(reference)};
}

}  // namespace vgrl
