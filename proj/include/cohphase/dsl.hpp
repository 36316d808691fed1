#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cohphase/series.hpp"

namespace cohphase::dsl {

enum class TokenKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma };

struct Token {
    TokenKind kind;
    std::string lexeme;
    int position;  // byte offset into the source
};

// Splits src into tokens, skipping ASCII whitespace.  Numbers are unsigned
// decimals with optional fraction and exponent; identifiers match
// [A-Za-z_][A-Za-z0-9_]*.  Any other byte (including non-ASCII, e.g. a
// typographic minus) raises LexError at its offset.
std::vector<Token> tokenize(std::string_view src);

enum class BinOp { Add, Sub, Mul, Div, Pow };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// One AST node.  Unary minus never appears: the parser folds it into the
// literal when the operand is a number and desugars to (0 - x) otherwise.
struct Expr {
    enum class Kind { Literal, Var, Binary, Call };
    Kind kind;
    double value = 0.0;             // Literal
    std::string name;               // Var name or Call function
    BinOp op = BinOp::Add;          // Binary
    std::vector<ExprPtr> children;  // Binary: {lhs, rhs}; Call: arguments
};

// Grammar:
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := unary
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?          (right-associative)
//   atom   := Number | Ident | Ident '(' expr (',' expr)* ')' | '(' expr ')'
// Functions: sqrt, exp, ln, gamma, abs (one argument); pow, min, max (two).
// Raises ParseError (with byte offset) or ArityError.
ExprPtr parse(const std::vector<Token>& tokens);

ExprPtr parse(std::string_view src);

// Parameter bindings for evaluation.  `n` is reserved for the mode index and
// cannot be bound.
class ParamEnv {
public:
    ParamEnv() = default;
    explicit ParamEnv(const std::map<std::string, double>& values);

    void bind(const std::string& name, double value);
    const double* find(const std::string& name) const;
    const std::map<std::string, double>& values() const noexcept { return values_; }

private:
    std::map<std::string, double> values_;
};

// Numeric evaluation at mode index n.  gamma(x) is exp(lgamma(x)) for x > 0.
// Raises UnboundVariable for free names outside env + {n}; DomainError (with
// the offending subexpression and n in the message) for sqrt of a negative,
// ln/gamma of a nonpositive, division by zero, or a NaN result.
double eval(const Expr& ast, int n, const ParamEnv& env);

// Prints with the minimal parentheses needed so that parse(to_string(x)) is
// structurally identical to x.  Negative literals are parenthesized.
std::string to_string(const Expr& ast);

bool structurally_equal(const Expr& a, const Expr& b);

std::set<std::string> free_variables(const Expr& ast);

// Compiles an expression into a StateSpec of the given kind (Nonlinearity for
// an f(n) formula, Spectrum for e_n).  All free variables must be bound by
// env + {n}.  Spectrum sources are probed at n = 0 (must vanish within 1e-14)
// and n = 1 .. 16 (must be positive).  The returned evaluator memoizes per-n
// results and is safe to share across threads.
StateSpec compile_spec(SpecKind kind, std::string_view src, const ParamEnv& env,
                       double radius = std::numeric_limits<double>::infinity());

} // namespace cohphase::dsl
