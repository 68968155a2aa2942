#include "viscodiff/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace viscodiff {

namespace {

using Instr = CompiledExpression;

struct FunctionEntry {
    const char* name;
    double (*fn)(double);
};

constexpr FunctionEntry kFunctions[] = {
    {"sin", [](double v) { return std::sin(v); }},
    {"cos", [](double v) { return std::cos(v); }},
    {"tan", [](double v) { return std::tan(v); }},
    {"exp", [](double v) { return std::exp(v); }},
    {"log", [](double v) { return std::log(v); }},
    {"sqrt", [](double v) { return std::sqrt(v); }},
    {"abs", [](double v) { return std::abs(v); }},
    {"tanh", [](double v) { return std::tanh(v); }},
    {"sinh", [](double v) { return std::sinh(v); }},
    {"cosh", [](double v) { return std::cosh(v); }},
    {"floor", [](double v) { return std::floor(v); }},
    {"ceil", [](double v) { return std::ceil(v); }},
};

int function_id(const std::string& name) {
    for (std::size_t i = 0; i < std::size(kFunctions); ++i)
        if (name == kFunctions[i].name) return static_cast<int>(i);
    return -1;
}

}  // namespace

class ExpressionParser {
  public:
    explicit ExpressionParser(std::string_view text) : text_(text) {}

    std::vector<CompiledExpression::Instr> parse() {
        std::vector<CompiledExpression::Instr> program;
        parse_expression(program);
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return program;
    }

  private:
    using Op = CompiledExpression::Instr::Op;

    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& why) const {
        throw ExpressionError(pos_, "expression error at position " + std::to_string(pos_) +
                                        ": " + why);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    // grammar: expr := term (('+'|'-') term)*
    //          term := factor (('*'|'/') factor)*
    //          factor := '-' factor | power
    //          power := atom ('^' factor)?          (right associative)
    //          atom := number | ident | ident '(' expr ')' | '(' expr ')'
    void parse_expression(std::vector<CompiledExpression::Instr>& out) {
        parse_term(out);
        while (true) {
            if (consume('+')) {
                parse_term(out);
                out.push_back({Op::add});
            } else if (consume('-')) {
                parse_term(out);
                out.push_back({Op::sub});
            } else {
                return;
            }
        }
    }

    void parse_term(std::vector<CompiledExpression::Instr>& out) {
        parse_factor(out);
        while (true) {
            if (consume('*')) {
                parse_factor(out);
                out.push_back({Op::mul});
            } else if (consume('/')) {
                parse_factor(out);
                out.push_back({Op::div});
            } else {
                return;
            }
        }
    }

    void parse_factor(std::vector<CompiledExpression::Instr>& out) {
        if (consume('-')) {
            parse_factor(out);
            out.push_back({Op::neg});
            return;
        }
        parse_power(out);
    }

    void parse_power(std::vector<CompiledExpression::Instr>& out) {
        parse_atom(out);
        if (consume('^')) {
            parse_factor(out);  // right associative, unary minus allowed in exponent
            out.push_back({Op::pow});
        }
    }

    void parse_atom(std::vector<CompiledExpression::Instr>& out) {
        skip_space();
        if (pos_ >= text_.size()) fail("expected operand");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            parse_expression(out);
            if (!consume(')')) fail("expected ')'");
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = text_.data() + pos_;
            char* end = nullptr;
            const double value = std::strtod(begin, &end);
            if (end == begin) fail("malformed number");
            pos_ += static_cast<std::size_t>(end - begin);
            out.push_back({Op::push_const, value});
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                name += text_[pos_++];
            if (name == "x") {
                out.push_back({Op::push_x});
                return;
            }
            if (name == "pi") {
                out.push_back({Op::push_const, std::numbers::pi});
                return;
            }
            if (name == "e") {
                out.push_back({Op::push_const, std::numbers::e});
                return;
            }
            const int fn = function_id(name);
            if (fn < 0) fail("unknown identifier '" + name + "'");
            if (!consume('(')) fail("function '" + name + "' needs an argument list");
            parse_expression(out);
            if (!consume(')')) fail("expected ')'");
            out.push_back({Op::call, 0.0, fn});
            return;
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

CompiledExpression CompiledExpression::parse(std::string_view text) {
    CompiledExpression compiled;
    compiled.text_ = std::string(text);
    compiled.program_ = ExpressionParser(text).parse();
    return compiled;
}

double CompiledExpression::eval(double x) const {
    std::vector<double> stack(program_.size() + 1);
    int top = -1;
    for (const Instr& instr : program_) {
        switch (instr.op) {
            case Instr::Op::push_const: stack[++top] = instr.value; break;
            case Instr::Op::push_x: stack[++top] = x; break;
            case Instr::Op::add: --top; stack[top] += stack[top + 1]; break;
            case Instr::Op::sub: --top; stack[top] -= stack[top + 1]; break;
            case Instr::Op::mul: --top; stack[top] *= stack[top + 1]; break;
            case Instr::Op::div: --top; stack[top] /= stack[top + 1]; break;
            case Instr::Op::pow: --top; stack[top] = std::pow(stack[top], stack[top + 1]); break;
            case Instr::Op::neg: stack[top] = -stack[top]; break;
            case Instr::Op::call: stack[top] = kFunctions[instr.function].fn(stack[top]); break;
        }
    }
    return top >= 0 ? stack[top] : 0.0;
}

}  // namespace viscodiff
