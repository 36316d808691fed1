#include "cohphase/dsl.hpp"

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <unordered_map>
#include <utility>

#include "cohphase/io.hpp"

namespace cohphase::dsl {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

std::string byte_repr(unsigned char c) {
    if (c >= 0x20 && c < 0x7f) return std::string("'") + static_cast<char>(c) + "'";
    static const char* hex = "0123456789abcdef";
    return std::string("0x") + hex[c >> 4] + hex[c & 0xf];
}

// Arity table; the only callable names.
const std::unordered_map<std::string, int>& functions() {
    static const std::unordered_map<std::string, int> table = {
        {"sqrt", 1}, {"exp", 1}, {"ln", 1}, {"gamma", 1}, {"abs", 1},
        {"pow", 2},  {"min", 2}, {"max", 2},
    };
    return table;
}

ExprPtr literal(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Literal;
    e->value = v;
    return e;
}

ExprPtr variable(std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Var;
    e->name = std::move(name);
    return e;
}

ExprPtr binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Binary;
    e->op = op;
    e->children = {std::move(lhs), std::move(rhs)};
    return e;
}

ExprPtr call(std::string name, std::vector<ExprPtr> args) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Call;
    e->name = std::move(name);
    e->children = std::move(args);
    return e;
}

class Parser {
public:
    explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

    ExprPtr run() {
        if (toks_.empty())
            throw Error(Errc::ParseError, "empty expression", 0);
        ExprPtr e = expr();
        if (pos_ < toks_.size())
            throw Error(Errc::ParseError,
                        "unexpected '" + toks_[pos_].lexeme + "' after expression at offset " +
                            std::to_string(toks_[pos_].position),
                        toks_[pos_].position);
        return e;
    }

private:
    const std::vector<Token>& toks_;
    size_t pos_ = 0;

    const Token* peek() const { return pos_ < toks_.size() ? &toks_[pos_] : nullptr; }

    bool match(TokenKind k) {
        if (peek() && peek()->kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& expected) const {
        if (const Token* t = peek())
            throw Error(Errc::ParseError,
                        "expected " + expected + " at offset " + std::to_string(t->position) +
                            ", found '" + t->lexeme + "'",
                        t->position);
        const long end = toks_.empty() ? 0 : toks_.back().position +
                                                 static_cast<long>(toks_.back().lexeme.size());
        throw Error(Errc::ParseError, "expected " + expected + " at end of input", end);
    }

    void expect(TokenKind k, const std::string& what) {
        if (!match(k)) fail(what);
    }

    ExprPtr expr() {
        ExprPtr lhs = term();
        while (peek() && (peek()->kind == TokenKind::Plus || peek()->kind == TokenKind::Minus)) {
            const BinOp op = peek()->kind == TokenKind::Plus ? BinOp::Add : BinOp::Sub;
            ++pos_;
            lhs = binary(op, std::move(lhs), term());
        }
        return lhs;
    }

    ExprPtr term() {
        ExprPtr lhs = unary();
        while (peek() && (peek()->kind == TokenKind::Star || peek()->kind == TokenKind::Slash)) {
            const BinOp op = peek()->kind == TokenKind::Star ? BinOp::Mul : BinOp::Div;
            ++pos_;
            lhs = binary(op, std::move(lhs), unary());
        }
        return lhs;
    }

    // '-x^2' negates the whole power: the operand of unary '-' is another
    // unary, which parses 'x^2' first.  Negated numbers fold into the
    // literal; anything else desugars to (0 - x).
    ExprPtr unary() {
        if (match(TokenKind::Minus)) {
            ExprPtr operand = unary();
            if (operand->kind == Expr::Kind::Literal) return literal(-operand->value);
            return binary(BinOp::Sub, literal(0.0), std::move(operand));
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = atom();
        if (match(TokenKind::Caret)) return binary(BinOp::Pow, std::move(base), unary());
        return base;
    }

    ExprPtr atom() {
        const Token* t = peek();
        if (!t) fail("a number, identifier, or '('");
        switch (t->kind) {
            case TokenKind::Number: {
                ++pos_;
                const double v = std::strtod(t->lexeme.c_str(), nullptr);
                if (!std::isfinite(v))
                    throw Error(Errc::ParseError,
                                "number literal '" + t->lexeme + "' out of range at offset " +
                                    std::to_string(t->position),
                                t->position);
                return literal(v);
            }
            case TokenKind::Ident: {
                ++pos_;
                if (!match(TokenKind::LParen)) return variable(t->lexeme);
                const auto& fns = functions();
                const auto it = fns.find(t->lexeme);
                if (it == fns.end())
                    throw Error(Errc::ParseError,
                                "unknown function '" + t->lexeme + "' at offset " +
                                    std::to_string(t->position),
                                t->position);
                std::vector<ExprPtr> args;
                args.push_back(expr());
                while (match(TokenKind::Comma)) args.push_back(expr());
                expect(TokenKind::RParen, "')'");
                if (static_cast<int>(args.size()) != it->second)
                    throw Error(Errc::ArityError,
                                t->lexeme + " expects " + std::to_string(it->second) +
                                    (it->second == 1 ? " argument, got " : " arguments, got ") +
                                    std::to_string(args.size()),
                                t->position);
                return call(t->lexeme, std::move(args));
            }
            case TokenKind::LParen: {
                ++pos_;
                ExprPtr inner = expr();
                expect(TokenKind::RParen, "')'");
                return inner;
            }
            default:
                fail("a number, identifier, or '('");
        }
    }
};

[[noreturn]] void domain_error(const std::string& what, const Expr& node, int n) {
    throw Error(Errc::DomainError,
                what + " in '" + to_string(node) + "' at n = " + std::to_string(n), n);
}

double eval_node(const Expr& e, int n, const ParamEnv& env) {
    switch (e.kind) {
        case Expr::Kind::Literal:
            return e.value;
        case Expr::Kind::Var: {
            if (e.name == "n") return static_cast<double>(n);
            if (const double* v = env.find(e.name)) return *v;
            throw Error(Errc::UnboundVariable, "unbound variable '" + e.name + "'");
        }
        case Expr::Kind::Binary: {
            const double a = eval_node(*e.children[0], n, env);
            const double b = eval_node(*e.children[1], n, env);
            double r = 0.0;
            switch (e.op) {
                case BinOp::Add: r = a + b; break;
                case BinOp::Sub: r = a - b; break;
                case BinOp::Mul: r = a * b; break;
                case BinOp::Div:
                    if (b == 0.0) domain_error("division by zero", e, n);
                    r = a / b;
                    break;
                case BinOp::Pow: r = std::pow(a, b); break;
            }
            if (std::isnan(r)) domain_error("NaN result", e, n);
            return r;
        }
        case Expr::Kind::Call: {
            const double a = eval_node(*e.children[0], n, env);
            double r = 0.0;
            if (e.name == "sqrt") {
                if (a < 0.0) domain_error("sqrt of negative argument", e, n);
                r = std::sqrt(a);
            } else if (e.name == "exp") {
                r = std::exp(a);
            } else if (e.name == "ln") {
                if (a <= 0.0) domain_error("ln of nonpositive argument", e, n);
                r = std::log(a);
            } else if (e.name == "gamma") {
                if (a <= 0.0) domain_error("gamma of nonpositive argument", e, n);
                r = std::exp(std::lgamma(a));
            } else if (e.name == "abs") {
                r = std::fabs(a);
            } else {
                const double b = eval_node(*e.children[1], n, env);
                if (e.name == "pow") r = std::pow(a, b);
                else if (e.name == "min") r = std::fmin(a, b);
                else r = std::fmax(a, b);
            }
            if (std::isnan(r)) domain_error("NaN result", e, n);
            return r;
        }
    }
    throw Error(Errc::ParseError, "corrupt expression node");
}

int precedence(const Expr& e) {
    if (e.kind != Expr::Kind::Binary) return 4;
    switch (e.op) {
        case BinOp::Add:
        case BinOp::Sub: return 1;
        case BinOp::Mul:
        case BinOp::Div: return 2;
        case BinOp::Pow: return 3;
    }
    return 4;
}

const char* op_text(BinOp op) {
    switch (op) {
        case BinOp::Add: return " + ";
        case BinOp::Sub: return " - ";
        case BinOp::Mul: return " * ";
        case BinOp::Div: return " / ";
        case BinOp::Pow: return "^";
    }
    return "?";
}

std::string print_node(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Literal: {
            std::string s = format_double(e.value);
            // A bare leading '-' would rebind as unary minus on reparse.
            if (!s.empty() && s[0] == '-') return "(" + s + ")";
            return s;
        }
        case Expr::Kind::Var:
            return e.name;
        case Expr::Kind::Call: {
            std::string s = e.name + "(";
            for (size_t i = 0; i < e.children.size(); ++i) {
                if (i) s += ", ";
                s += print_node(*e.children[i]);
            }
            return s + ")";
        }
        case Expr::Kind::Binary: {
            const Expr& lhs = *e.children[0];
            const Expr& rhs = *e.children[1];
            std::string ls = print_node(lhs);
            std::string rs = print_node(rhs);
            if (e.op == BinOp::Pow) {
                // The base slot of '^' only admits atoms; the exponent slot
                // admits unary/power.
                if (lhs.kind == Expr::Kind::Binary) ls = "(" + ls + ")";
                if (rhs.kind == Expr::Kind::Binary && rhs.op != BinOp::Pow) rs = "(" + rs + ")";
            } else {
                const int mine = precedence(e);
                if (precedence(lhs) < mine) ls = "(" + ls + ")";
                if (precedence(rhs) <= mine) rs = "(" + rs + ")";
            }
            return ls + op_text(e.op) + rs;
        }
    }
    return "?";
}

} // namespace

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    const size_t size = src.size();
    size_t i = 0;
    while (i < size) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        const int pos = static_cast<int>(i);
        if (is_digit(c)) {
            size_t j = i;
            while (j < size && is_digit(src[j])) ++j;
            if (j < size && src[j] == '.') {
                ++j;
                while (j < size && is_digit(src[j])) ++j;
            }
            // Consume an exponent only when a complete one is present, so
            // '2e' stays Number('2') Ident('e').
            if (j < size && (src[j] == 'e' || src[j] == 'E')) {
                size_t k = j + 1;
                if (k < size && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < size && is_digit(src[k])) {
                    while (k < size && is_digit(src[k])) ++k;
                    j = k;
                }
            }
            out.push_back({TokenKind::Number, std::string(src.substr(i, j - i)), pos});
            i = j;
            continue;
        }
        if (is_ident_start(c)) {
            size_t j = i;
            while (j < size && is_ident_char(src[j])) ++j;
            out.push_back({TokenKind::Ident, std::string(src.substr(i, j - i)), pos});
            i = j;
            continue;
        }
        TokenKind kind;
        switch (c) {
            case '+': kind = TokenKind::Plus; break;
            case '-': kind = TokenKind::Minus; break;
            case '*': kind = TokenKind::Star; break;
            case '/': kind = TokenKind::Slash; break;
            case '^': kind = TokenKind::Caret; break;
            case '(': kind = TokenKind::LParen; break;
            case ')': kind = TokenKind::RParen; break;
            case ',': kind = TokenKind::Comma; break;
            default:
                throw Error(Errc::LexError,
                            "unexpected byte " + byte_repr(static_cast<unsigned char>(c)) +
                                " at offset " + std::to_string(pos),
                            pos);
        }
        out.push_back({kind, std::string(1, c), pos});
        ++i;
    }
    return out;
}

ExprPtr parse(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

ExprPtr parse(std::string_view src) { return parse(tokenize(src)); }

ParamEnv::ParamEnv(const std::map<std::string, double>& values) {
    for (const auto& [name, value] : values) bind(name, value);
}

void ParamEnv::bind(const std::string& name, double value) {
    if (name == "n")
        throw Error(Errc::InvalidParameter, "'n' is the mode index and cannot be bound");
    if (name.empty() || !is_ident_start(name[0]))
        throw Error(Errc::InvalidParameter, "invalid parameter name '" + name + "'");
    for (const char c : name)
        if (!is_ident_char(c))
            throw Error(Errc::InvalidParameter, "invalid parameter name '" + name + "'");
    values_[name] = value;
}

const double* ParamEnv::find(const std::string& name) const {
    const auto it = values_.find(name);
    return it == values_.end() ? nullptr : &it->second;
}

double eval(const Expr& ast, int n, const ParamEnv& env) { return eval_node(ast, n, env); }

std::string to_string(const Expr& ast) { return print_node(ast); }

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::Literal: return a.value == b.value;
        case Expr::Kind::Var: return a.name == b.name;
        case Expr::Kind::Binary:
            if (a.op != b.op) return false;
            break;
        case Expr::Kind::Call:
            if (a.name != b.name) return false;
            break;
    }
    if (a.children.size() != b.children.size()) return false;
    for (size_t i = 0; i < a.children.size(); ++i)
        if (!structurally_equal(*a.children[i], *b.children[i])) return false;
    return true;
}

std::set<std::string> free_variables(const Expr& ast) {
    std::set<std::string> names;
    if (ast.kind == Expr::Kind::Var) names.insert(ast.name);
    for (const auto& child : ast.children) {
        auto sub = free_variables(*child);
        names.insert(sub.begin(), sub.end());
    }
    return names;
}

StateSpec compile_spec(SpecKind kind, std::string_view src, const ParamEnv& env, double radius) {
    if (!(radius > 0.0))
        throw Error(Errc::InvalidParameter, "radius must be positive");
    ExprPtr ast = parse(src);
    for (const auto& name : free_variables(*ast))
        if (name != "n" && !env.find(name))
            throw Error(Errc::UnboundVariable, "unbound variable '" + name + "'");

    struct Memo {
        std::mutex mutex;
        std::unordered_map<int, double> cache;
    };
    auto memo = std::make_shared<Memo>();
    auto evaluator = [ast, env, memo](int n) {
        {
            std::lock_guard<std::mutex> lock(memo->mutex);
            const auto it = memo->cache.find(n);
            if (it != memo->cache.end()) return it->second;
        }
        const double v = eval(*ast, n, env);
        std::lock_guard<std::mutex> lock(memo->mutex);
        return memo->cache.emplace(n, v).first->second;
    };

    if (kind == SpecKind::Spectrum) {
        const double e0 = evaluator(0);
        if (!(std::abs(e0) <= 1e-14))
            throw Error(Errc::SpectrumGroundNotZero,
                        "e_0 = " + format_double(e0) + " must be 0", 0);
        for (int n = 1; n <= 16; ++n) {
            const double en = evaluator(n);
            if (!(en > 0.0))
                throw Error(Errc::NonpositiveSpectrum,
                            "e_" + std::to_string(n) + " = " + format_double(en) +
                                " must be positive", n);
        }
    }
    return StateSpec{kind, std::move(evaluator), radius, std::string(src)};
}

} // namespace cohphase::dsl
