#include "vgrl/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "vgrl/telemetry.hpp"

namespace vgrl {

class ExprParser {
public:
    ExprParser(std::string_view text, const std::vector<std::string>& vars)
        : s_(text), vars_(vars) {}

    Expression run() {
        Expression e;
        e.text_ = std::string(s_);
        e.arity_ = static_cast<int>(vars_.size());
        code_ = &e.code_;
        expr();
        skip_space();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        if (max_depth_ > Expression::kMaxDepth) fail("expression nests too deeply");
        return e;
    }

private:
    using Op = Expression::Op;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("in expression '" + std::string(s_) + "' at column " +
                          std::to_string(pos_ + 1) + ": " + what);
    }

    void skip_space() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void emit(Op op, double value = 0.0, int index = 0) {
        code_->push_back({op, value, index});
        switch (op) {
            case Op::constant:
            case Op::variable: ++depth_; break;
            case Op::add:
            case Op::sub:
            case Op::mul:
            case Op::div:
            case Op::pow: --depth_; break;
            default: break;
        }
        max_depth_ = std::max(max_depth_, depth_);
    }

    void expr() {
        term();
        for (;;) {
            if (accept('+')) {
                term();
                emit(Op::add);
            } else if (accept('-')) {
                term();
                emit(Op::sub);
            } else {
                return;
            }
        }
    }

    void term() {
        unary();
        for (;;) {
            if (accept('*')) {
                unary();
                emit(Op::mul);
            } else if (accept('/')) {
                unary();
                emit(Op::div);
            } else {
                return;
            }
        }
    }

    void unary() {
        if (accept('-')) {
            unary();
            emit(Op::neg);
        } else if (accept('+')) {
            unary();
        } else {
            power();
        }
    }

    void power() {
        primary();
        if (accept('^')) {
            unary();
            emit(Op::pow);
        }
    }

    void primary() {
        skip_space();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            expr();
            if (!accept(')')) fail("missing ')'");
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                        s_[pos_] == '_')) {
                ++pos_;
            }
            const std::string name(s_.substr(start, pos_ - start));
            if (name == "sin" || name == "cos" || name == "tanh") {
                if (!accept('(')) fail("expected '(' after " + name);
                expr();
                if (!accept(')')) fail("missing ')'");
                emit(name == "sin" ? Op::sin : name == "cos" ? Op::cos : Op::tanh);
                return;
            }
            const auto it = std::find(vars_.begin(), vars_.end(), name);
            if (it == vars_.end()) {
                pos_ = start;
                fail("unknown identifier '" + name + "'");
            }
            emit(Op::variable, 0.0, static_cast<int>(it - vars_.begin()));
            return;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    void number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                                    s_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
            if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
                pos_ = p;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                    ++pos_;
                }
            }
        }
        try {
            emit(Op::constant, parse_double(s_.substr(start, pos_ - start)));
        } catch (const ConfigError&) {
            pos_ = start;
            fail("malformed number");
        }
    }

    std::string_view s_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
    std::vector<Expression::Instr>* code_ = nullptr;
    int depth_ = 0;
    int max_depth_ = 0;
};

Expression Expression::parse(std::string_view text, const std::vector<std::string>& variables) {
    return ExprParser(text, variables).run();
}

double Expression::operator()(const double* vars) const {
    if (code_.empty()) throw ConfigError("evaluating an empty expression");
    std::array<double, kMaxDepth> st;
    int top = -1;
    for (const Instr& in : code_) {
        switch (in.op) {
            case Op::constant: st[++top] = in.value; break;
            case Op::variable: st[++top] = vars[in.index]; break;
            case Op::neg: st[top] = -st[top]; break;
            case Op::add: st[top - 1] += st[top]; --top; break;
            case Op::sub: st[top - 1] -= st[top]; --top; break;
            case Op::mul: st[top - 1] *= st[top]; --top; break;
            case Op::div: st[top - 1] /= st[top]; --top; break;
            case Op::pow: st[top - 1] = std::pow(st[top - 1], st[top]); --top; break;
            case Op::sin: st[top] = std::sin(st[top]); break;
            case Op::cos: st[top] = std::cos(st[top]); break;
            case Op::tanh: st[top] = std::tanh(st[top]); break;
        }
    }
    return st[0];
}

}  // namespace vgrl
