#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vgrl/types.hpp"

namespace vgrl {

// Scalar expression over named variables. Supports numbers, + - * / ^
// (right-associative, binds tighter than unary minus), parentheses and the
// functions sin, cos, tanh.
class Expression {
public:
    Expression() = default;

    // Throws ConfigError pointing at the offending column.
    static Expression parse(std::string_view text, const std::vector<std::string>& variables);

    // vars[i] is the value of variables[i] given at parse time.
    double operator()(const double* vars) const;
    double operator()(const Vector& vars) const { return (*this)(vars.data()); }

    const std::string& text() const noexcept { return text_; }
    int arity() const noexcept { return arity_; }

private:
    enum class Op { constant, variable, neg, add, sub, mul, div, pow, sin, cos, tanh };
    struct Instr {
        Op op;
        double value = 0.0;
        int index = 0;
    };
    static constexpr int kMaxDepth = 64;

    std::vector<Instr> code_;
    std::string text_;
    int arity_ = 0;

    friend class ExprParser;
};

}  // namespace vgrl
