// Small arithmetic-expression evaluator over one variable x, used for the
// initial-datum spec. Supports + - * / ^, parentheses, the constants pi and
// e, and the usual single-argument functions.
#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace viscodiff {

struct ExpressionError : std::runtime_error {
    std::size_t position;
    ExpressionError(std::size_t pos, const std::string& what)
        : std::runtime_error(what), position(pos) {}
};

class CompiledExpression {
  public:
    static CompiledExpression parse(std::string_view text);

    double eval(double x) const;
    const std::string& text() const { return text_; }

  private:
    // postfix program: push-number / push-x / apply-op / apply-function
    struct Instr {
        enum class Op { push_const, push_x, add, sub, mul, div, pow, neg, call } op;
        double value = 0.0;
        int function = 0;
    };

    std::string text_;
    std::vector<Instr> program_;

    friend class ExpressionParser;
};

}  // namespace viscodiff
