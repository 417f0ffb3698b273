#include "umbilic/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "umbilic/errors.hpp"

namespace umbilic {

std::string ParseError::message() const {
    std::ostringstream os;
    os << "parse error at offset " << position << ": expected " << expected << ", found '"
       << found << "'";
    return os.str();
}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End, Bad };

struct Token {
    Tok kind;
    std::size_t pos;
    std::string lexeme;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (pos_ >= text_.size()) return {Tok::End, pos_, "end of input"};

        const std::size_t start = pos_;
        const char c = text_[pos_];
        switch (c) {
            case '+': ++pos_; return {Tok::Plus, start, "+"};
            case '-': ++pos_; return {Tok::Minus, start, "-"};
            case '*': ++pos_; return {Tok::Star, start, "*"};
            case '/': ++pos_; return {Tok::Slash, start, "/"};
            case '^': ++pos_; return {Tok::Caret, start, "^"};
            case '(': ++pos_; return {Tok::LParen, start, "("};
            case ')': ++pos_; return {Tok::RParen, start, ")"};
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
            return scan_number(start);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            while (pos_ < text_.size() &&
                   std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            return {Tok::Ident, start, std::string(text_.substr(start, pos_ - start))};
        }
        ++pos_;
        return {Tok::Bad, start, std::string(1, c)};
    }

private:
    Token scan_number(std::size_t start) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // "2e" is the number 2 followed by identifier e
            }
        }
        return {Tok::Number, start, std::string(text_.substr(start, pos_ - start))};
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::optional<UnaryFn> function_by_name(const std::string& name) {
    if (name == "sin") return UnaryFn::Sin;
    if (name == "cos") return UnaryFn::Cos;
    if (name == "sinh") return UnaryFn::Sinh;
    if (name == "cosh") return UnaryFn::Cosh;
    if (name == "exp") return UnaryFn::Exp;
    if (name == "ln") return UnaryFn::Ln;
    if (name == "sqrt") return UnaryFn::Sqrt;
    return std::nullopt;
}

// Recursive-descent parser. All failures funnel into ParseError; the depth
// guard keeps deeply nested fuzz inputs from exhausting the stack.
class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { current_ = lexer_.next(); }

    ParseResult run() {
        ExprPtr e = parse_expr(0);
        if (!e) return {nullptr, error_};
        if (current_.kind != Tok::End) {
            return {nullptr, ParseError{current_.pos, "end of input", current_.lexeme}};
        }
        return {std::move(e), std::nullopt};
    }

private:
    static constexpr int kMaxDepth = 256;

    ExprPtr fail(const std::string& expected) {
        if (!error_) error_ = ParseError{current_.pos, expected, current_.lexeme};
        return nullptr;
    }

    void advance() { current_ = lexer_.next(); }

    ExprPtr parse_expr(int depth) {
        if (depth > kMaxDepth) return fail("shallower nesting (limit 256)");
        ExprPtr lhs = parse_term(depth + 1);
        if (!lhs) return nullptr;
        while (current_.kind == Tok::Plus || current_.kind == Tok::Minus) {
            const BinaryOp op = current_.kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
            advance();
            ExprPtr rhs = parse_term(depth + 1);
            if (!rhs) return nullptr;
            lhs = make_binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    ExprPtr parse_term(int depth) {
        if (depth > kMaxDepth) return fail("shallower nesting (limit 256)");
        ExprPtr lhs = parse_factor(depth + 1);
        if (!lhs) return nullptr;
        while (current_.kind == Tok::Star || current_.kind == Tok::Slash) {
            const BinaryOp op = current_.kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
            advance();
            ExprPtr rhs = parse_factor(depth + 1);
            if (!rhs) return nullptr;
            lhs = make_binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    ExprPtr parse_factor(int depth) {
        if (depth > kMaxDepth) return fail("shallower nesting (limit 256)");
        if (current_.kind == Tok::Minus) {
            advance();
            ExprPtr operand = parse_factor(depth + 1);
            if (!operand) return nullptr;
            return make_neg(std::move(operand));
        }
        return parse_power(depth + 1);
    }

    ExprPtr parse_power(int depth) {
        ExprPtr base = parse_atom(depth + 1);
        if (!base) return nullptr;
        if (current_.kind != Tok::Caret) return base;
        advance();
        bool negate = false;
        if (current_.kind == Tok::Minus) {
            negate = true;
            advance();
        }
        if (current_.kind != Tok::Number) return fail("integer exponent");
        const Token tok = current_;
        for (char c : tok.lexeme) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                return fail("integer exponent");
            }
        }
        int exponent = 0;
        const auto [ptr, ec] = std::from_chars(tok.lexeme.data(),
                                               tok.lexeme.data() + tok.lexeme.size(), exponent);
        if (ec != std::errc{} || ptr != tok.lexeme.data() + tok.lexeme.size()) {
            return fail("integer exponent in range");
        }
        advance();
        return make_pow(std::move(base), negate ? -exponent : exponent);
    }

    ExprPtr parse_atom(int depth) {
        if (depth > kMaxDepth) return fail("shallower nesting (limit 256)");
        switch (current_.kind) {
            case Tok::Number: {
                const Token tok = current_;
                advance();
                return make_number(std::strtod(tok.lexeme.c_str(), nullptr));
            }
            case Tok::Ident: {
                const Token tok = current_;
                if (tok.lexeme == "u" || tok.lexeme == "v") {
                    advance();
                    return make_var(tok.lexeme[0]);
                }
                const auto fn = function_by_name(tok.lexeme);
                if (!fn) {
                    return fail("variable u/v or function name");
                }
                advance();
                if (current_.kind != Tok::LParen) return fail("'(' after function name");
                advance();
                ExprPtr arg = parse_expr(depth + 1);
                if (!arg) return nullptr;
                if (current_.kind != Tok::RParen) return fail("')'");
                advance();
                return make_call(*fn, std::move(arg));
            }
            case Tok::LParen: {
                advance();
                ExprPtr inner = parse_expr(depth + 1);
                if (!inner) return nullptr;
                if (current_.kind != Tok::RParen) return fail("')'");
                advance();
                return inner;
            }
            default:
                return fail("operand");
        }
    }

    Lexer lexer_;
    Token current_;
    std::optional<ParseError> error_;
};

}  // namespace

ParseResult parse(std::string_view text) { return Parser(text).run(); }

namespace {

Jet3 eval_node(const Expr& e, const Jet3& u, const Jet3& v) {
    return std::visit(
        [&](const auto& n) -> Jet3 {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Number>) {
                return Jet3::constant(n.value);
            } else if constexpr (std::is_same_v<T, Expr::Var>) {
                return n.name == 'u' ? u : v;
            } else if constexpr (std::is_same_v<T, Expr::Neg>) {
                return -eval_node(*n.operand, u, v);
            } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                const Jet3 a = eval_node(*n.lhs, u, v);
                const Jet3 b = eval_node(*n.rhs, u, v);
                switch (n.op) {
                    case BinaryOp::Add: return a + b;
                    case BinaryOp::Sub: return a - b;
                    case BinaryOp::Mul: return a * b;
                    case BinaryOp::Div: return a / b;
                }
                return Jet3{};
            } else if constexpr (std::is_same_v<T, Expr::Pow>) {
                return int_pow(eval_node(*n.base, u, v), n.exponent);
            } else {
                const Jet3 a = eval_node(*n.arg, u, v);
                switch (n.fn) {
                    case UnaryFn::Sin: return sin(a);
                    case UnaryFn::Cos: return cos(a);
                    case UnaryFn::Sinh: return sinh(a);
                    case UnaryFn::Cosh: return cosh(a);
                    case UnaryFn::Exp: return exp(a);
                    case UnaryFn::Ln: return ln(a);
                    case UnaryFn::Sqrt: return sqrt(a);
                }
                return Jet3{};
            }
        },
        e.node);
}

}  // namespace

Jet3 eval_jet(const Expr& ast, double u0, double v0) {
    const auto [u, v] = seed_coordinates(u0, v0);
    try {
        return eval_node(ast, u, v);
    } catch (const DomainError& e) {
        if (e.point) throw;
        throw DomainError(e.what(), u0, v0);
    }
}

double eval_value(const Expr& ast, double u0, double v0) {
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Number>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, Expr::Var>) {
                return n.name == 'u' ? u0 : v0;
            } else if constexpr (std::is_same_v<T, Expr::Neg>) {
                return -eval_value(*n.operand, u0, v0);
            } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                const double a = eval_value(*n.lhs, u0, v0);
                const double b = eval_value(*n.rhs, u0, v0);
                switch (n.op) {
                    case BinaryOp::Add: return a + b;
                    case BinaryOp::Sub: return a - b;
                    case BinaryOp::Mul: return a * b;
                    case BinaryOp::Div:
                        if (b == 0.0) throw DomainError("division by zero", u0, v0);
                        return a / b;
                }
                return 0.0;
            } else if constexpr (std::is_same_v<T, Expr::Pow>) {
                const double base = eval_value(*n.base, u0, v0);
                if (n.exponent < 0 && base == 0.0) {
                    throw DomainError("zero raised to a negative power", u0, v0);
                }
                return std::pow(base, n.exponent);
            } else {
                const double a = eval_value(*n.arg, u0, v0);
                switch (n.fn) {
                    case UnaryFn::Sin: return std::sin(a);
                    case UnaryFn::Cos: return std::cos(a);
                    case UnaryFn::Sinh: return std::sinh(a);
                    case UnaryFn::Cosh: return std::cosh(a);
                    case UnaryFn::Exp: return std::exp(a);
                    case UnaryFn::Ln:
                        if (!(a > 0.0)) throw DomainError("ln of nonpositive value", u0, v0);
                        return std::log(a);
                    case UnaryFn::Sqrt:
                        if (!(a > 0.0)) throw DomainError("sqrt of nonpositive value", u0, v0);
                        return std::sqrt(a);
                }
                return 0.0;
            }
        },
        ast.node);
}

namespace {

// precedence levels: add/sub = 1, mul/div = 2, unary minus = 3, pow = 4, atom = 5
int node_level(const Expr& e) {
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Binary>) {
                return (n.op == BinaryOp::Add || n.op == BinaryOp::Sub) ? 1 : 2;
            } else if constexpr (std::is_same_v<T, Expr::Neg>) {
                return 3;
            } else if constexpr (std::is_same_v<T, Expr::Pow>) {
                return 4;
            } else if constexpr (std::is_same_v<T, Expr::Number>) {
                return n.value < 0 ? 3 : 5;  // negative literals print with a sign
            } else {
                return 5;
            }
        },
        e.node);
}

const char* fn_name(UnaryFn fn) {
    switch (fn) {
        case UnaryFn::Sin: return "sin";
        case UnaryFn::Cos: return "cos";
        case UnaryFn::Sinh: return "sinh";
        case UnaryFn::Cosh: return "cosh";
        case UnaryFn::Exp: return "exp";
        case UnaryFn::Ln: return "ln";
        case UnaryFn::Sqrt: return "sqrt";
    }
    return "?";
}

void print_node(std::ostream& os, const Expr& e, int min_level);

void print_child(std::ostream& os, const Expr& child, int min_level) {
    if (node_level(child) < min_level) {
        os << '(';
        print_node(os, child, 0);
        os << ')';
    } else {
        print_node(os, child, 0);
    }
}

void print_node(std::ostream& os, const Expr& e, int) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Number>) {
                std::ostringstream tmp;
                tmp.precision(17);
                tmp << n.value;
                os << tmp.str();
            } else if constexpr (std::is_same_v<T, Expr::Var>) {
                os << n.name;
            } else if constexpr (std::is_same_v<T, Expr::Neg>) {
                os << '-';
                print_child(os, *n.operand, 3);
            } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                const int level = (n.op == BinaryOp::Add || n.op == BinaryOp::Sub) ? 1 : 2;
                print_child(os, *n.lhs, level);
                switch (n.op) {
                    case BinaryOp::Add: os << " + "; break;
                    case BinaryOp::Sub: os << " - "; break;
                    case BinaryOp::Mul: os << "*"; break;
                    case BinaryOp::Div: os << "/"; break;
                }
                print_child(os, *n.rhs, level + 1);
            } else if constexpr (std::is_same_v<T, Expr::Pow>) {
                print_child(os, *n.base, 5);
                os << '^' << n.exponent;
            } else {
                os << fn_name(n.fn) << '(';
                print_node(os, *n.arg, 0);
                os << ')';
            }
        },
        e.node);
}

}  // namespace

std::string pretty_print(const Expr& ast) {
    std::ostringstream os;
    print_node(os, ast, 0);
    return os.str();
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& na) -> bool {
            using T = std::decay_t<decltype(na)>;
            const auto& nb = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Expr::Number>) {
                return na.value == nb.value;
            } else if constexpr (std::is_same_v<T, Expr::Var>) {
                return na.name == nb.name;
            } else if constexpr (std::is_same_v<T, Expr::Neg>) {
                return structurally_equal(*na.operand, *nb.operand);
            } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                return na.op == nb.op && structurally_equal(*na.lhs, *nb.lhs) &&
                       structurally_equal(*na.rhs, *nb.rhs);
            } else if constexpr (std::is_same_v<T, Expr::Pow>) {
                return na.exponent == nb.exponent && structurally_equal(*na.base, *nb.base);
            } else {
                return na.fn == nb.fn && structurally_equal(*na.arg, *nb.arg);
            }
        },
        a.node);
}

ExprPtr make_number(double value) { return std::make_shared<Expr>(Expr{Expr::Number{value}}); }
ExprPtr make_var(char name) { return std::make_shared<Expr>(Expr{Expr::Var{name}}); }
ExprPtr make_neg(ExprPtr operand) {
    return std::make_shared<Expr>(Expr{Expr::Neg{std::move(operand)}});
}
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
    return std::make_shared<Expr>(Expr{Expr::Binary{op, std::move(lhs), std::move(rhs)}});
}
ExprPtr make_pow(ExprPtr base, int exponent) {
    return std::make_shared<Expr>(Expr{Expr::Pow{std::move(base), exponent}});
}
ExprPtr make_call(UnaryFn fn, ExprPtr arg) {
    return std::make_shared<Expr>(Expr{Expr::Call{fn, std::move(arg)}});
}

}  // namespace umbilic
