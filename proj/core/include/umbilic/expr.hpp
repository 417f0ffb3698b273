#ifndef UMBILIC_EXPR_HPP
#define UMBILIC_EXPR_HPP

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "umbilic/jet.hpp"

namespace umbilic {

// Expression grammar (whitespace-insensitive):
//
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := "-" factor | power
//   power  := atom ("^" integer)?
//   atom   := number | "u" | "v" | ident "(" expr ")" | "(" expr ")"
//   ident  := "sin"|"cos"|"sinh"|"cosh"|"exp"|"ln"|"sqrt"
//
// "^" binds tighter than unary minus, so "-u^2" is -(u^2). Exponents are
// integer literals (optionally negative); fractional powers of a positive
// base are expressible as exp(q*ln(x)).

enum class BinaryOp { Add, Sub, Mul, Div };
enum class UnaryFn { Sin, Cos, Sinh, Cosh, Exp, Ln, Sqrt };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    struct Number {
        double value;
    };
    struct Var {
        char name;  // 'u' or 'v'
    };
    struct Neg {
        ExprPtr operand;
    };
    struct Binary {
        BinaryOp op;
        ExprPtr lhs, rhs;
    };
    struct Pow {
        ExprPtr base;
        int exponent;
    };
    struct Call {
        UnaryFn fn;
        ExprPtr arg;
    };

    std::variant<Number, Var, Neg, Binary, Pow, Call> node;
};

struct ParseError {
    std::size_t position;  // byte offset of the offending lexeme
    std::string expected;  // token class description
    std::string found;     // offending lexeme ("end of input" at EOF)

    std::string message() const;
};

struct ParseResult {
    ExprPtr ast;  // null iff error is set
    std::optional<ParseError> error;

    bool ok() const { return ast != nullptr; }
};

/// Total: every input yields an AST or a ParseError, never an exception.
ParseResult parse(std::string_view text);

/// Evaluate over order-3 jets seeded at (u0, v0). Throws DomainError carrying
/// (u0, v0) on division by zero or ln/sqrt of a nonpositive value.
Jet3 eval_jet(const Expr& ast, double u0, double v0);

/// Value-only evaluation (same domain errors).
double eval_value(const Expr& ast, double u0, double v0);

/// Precedence-aware rendering; parse(pretty_print(e)) is structurally
/// identical to e.
std::string pretty_print(const Expr& ast);

bool structurally_equal(const Expr& a, const Expr& b);

// Builders for programmatic construction (used by the harmonic basis).
ExprPtr make_number(double value);
ExprPtr make_var(char name);
ExprPtr make_neg(ExprPtr operand);
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_pow(ExprPtr base, int exponent);
ExprPtr make_call(UnaryFn fn, ExprPtr arg);

}  // namespace umbilic

#endif
