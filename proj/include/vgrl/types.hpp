#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace vgrl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Exact element-wise equality; differing shapes compare unequal.
template <class A, class B>
bool same_values(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

// Raised for malformed or inconsistent configuration (dimension mismatches,
// invalid gains, unparsable scenario files).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when an argument lies outside a function's mathematical domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Raised when integration produces a non-finite derivative.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, long step)
        : std::runtime_error(what), step_(step) {}

    long step() const noexcept { return step_; }

private:
    long step_;
};

}  // namespace vgrl
