#pragma once

#include "complex.hpp"
#include "error.hpp"

#include <cctype>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace spps {

// Coefficient expressions in the variable x.  Numeric literals keep their
// source text and are re-parsed at evaluation precision, so one parsed
// expression serves every precision level without rounding at parse time.
//
// Grammar (no implicit multiplication):
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := '-' factor | power
//   power   := atom ('^' factor)?          (right associative)
//   atom    := number | 'x' | 'pi' | 'e' | 'i' | name '(' expr ')' | '(' expr ')'

enum class ExprKind { Number, Variable, ConstPi, ConstE, ConstI, Negate, Add, Sub, Mul, Div, Pow, Call };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind;
    std::string text;  // literal text or function name
    Expr lhs, rhs;
};

inline Expr make_expr(ExprKind k, std::string text = {}, Expr lhs = nullptr, Expr rhs = nullptr) {
    return std::make_shared<ExprNode>(ExprNode{k, std::move(text), std::move(lhs), std::move(rhs)});
}

namespace detail {

inline const std::vector<std::string>& known_functions() {
    static const std::vector<std::string> fns = {"sin", "cos", "tan", "exp", "log",
                                                 "sqrt", "sinh", "cosh", "tanh", "abs"};
    return fns;
}

struct Token {
    enum Type { Number, Name, Op, LParen, RParen, End } type;
    std::string text;
    std::size_t column;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= src_.size()) {
            tok_ = {Token::End, "", start};
            return;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t p = pos_;
            bool seen_digit = false;
            while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p, seen_digit = true;
            if (p < src_.size() && src_[p] == '.') {
                ++p;
                while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p, seen_digit = true;
            }
            if (!seen_digit) throw ParseError("malformed number", start);
            if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
                std::size_t q = p + 1;
                if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
                if (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) {
                    while (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) ++q;
                    p = q;
                }
            }
            tok_ = {Token::Number, src_.substr(pos_, p - pos_), start};
            pos_ = p;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t p = pos_;
            while (p < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[p])) || src_[p] == '_'))
                ++p;
            tok_ = {Token::Name, src_.substr(pos_, p - pos_), start};
            pos_ = p;
            return;
        }
        switch (c) {
            case '+': case '-': case '*': case '/': case '^':
                tok_ = {Token::Op, std::string(1, c), start};
                break;
            case '(':
                tok_ = {Token::LParen, "(", start};
                break;
            case ')':
                tok_ = {Token::RParen, ")", start};
                break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
        ++pos_;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    Token tok_{Token::End, "", 0};
};

class Parser {
  public:
    explicit Parser(const std::string& src) : lex_(src) {}

    Expr parse() {
        Expr e = expr();
        if (lex_.peek().type != Token::End)
            throw ParseError("unexpected trailing input", lex_.peek().column);
        return e;
    }

  private:
    Expr expr() {
        Expr e = term();
        while (lex_.peek().type == Token::Op &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            const bool add = lex_.take().text == "+";
            e = make_expr(add ? ExprKind::Add : ExprKind::Sub, "", e, term());
        }
        return e;
    }

    Expr term() {
        Expr e = factor();
        while (lex_.peek().type == Token::Op &&
               (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            const bool mul = lex_.take().text == "*";
            e = make_expr(mul ? ExprKind::Mul : ExprKind::Div, "", e, factor());
        }
        return e;
    }

    Expr factor() {
        if (lex_.peek().type == Token::Op && lex_.peek().text == "-") {
            lex_.take();
            return make_expr(ExprKind::Negate, "", factor());
        }
        if (lex_.peek().type == Token::Op && lex_.peek().text == "+") {
            lex_.take();
            return factor();
        }
        return power();
    }

    Expr power() {
        Expr base = atom();
        if (lex_.peek().type == Token::Op && lex_.peek().text == "^") {
            lex_.take();
            return make_expr(ExprKind::Pow, "", base, factor());  // right associative
        }
        return base;
    }

    Expr atom() {
        const Token t = lex_.take();
        switch (t.type) {
            case Token::Number:
                return make_expr(ExprKind::Number, t.text);
            case Token::Name: {
                if (t.text == "x") return make_expr(ExprKind::Variable);
                if (t.text == "pi") return make_expr(ExprKind::ConstPi);
                if (t.text == "e") return make_expr(ExprKind::ConstE);
                if (t.text == "i") return make_expr(ExprKind::ConstI);
                for (const auto& fn : known_functions()) {
                    if (t.text != fn) continue;
                    if (lex_.peek().type != Token::LParen)
                        throw ParseError("function '" + t.text + "' requires parentheses",
                                         lex_.peek().column);
                    lex_.take();
                    Expr arg = expr();
                    if (lex_.peek().type != Token::RParen)
                        throw ParseError("missing ')'", lex_.peek().column);
                    lex_.take();
                    return make_expr(ExprKind::Call, t.text, arg);
                }
                throw ParseError("unknown identifier '" + t.text + "'", t.column);
            }
            case Token::LParen: {
                Expr e = expr();
                if (lex_.peek().type != Token::RParen)
                    throw ParseError("missing ')'", lex_.peek().column);
                lex_.take();
                return e;
            }
            case Token::RParen:
                throw ParseError("unexpected ')'", t.column);
            case Token::Op:
                throw ParseError("unexpected operator '" + t.text + "'", t.column);
            case Token::End:
            default:
                throw ParseError("unexpected end of input", t.column);
        }
    }

    Lexer lex_;
};

// True when the complex value is an exact small-integer real, in which case
// powers use exact binary powering instead of exp/log.
template <class Real>
bool integer_exponent(const Cplx<Real>& w, long& out) {
    using std::floor;
    if (w.im != 0) return false;
    const Real fl = floor(w.re);
    if (fl != w.re) return false;
    if (!(fl >= Real(-1000000) && fl <= Real(1000000))) return false;
    out = static_cast<long>(fl);
    return true;
}

}  // namespace detail

inline Expr parse_expression(const std::string& src) {
    detail::Parser p(src);
    return p.parse();
}

template <class Real>
Cplx<Real> evaluate(const Expr& e, const Cplx<Real>& x) {
    using std::abs;
    if (!e) throw ContractViolation("evaluating empty expression");
    const Cplx<Real> zero{Real(0), Real(0)};
    switch (e->kind) {
        case ExprKind::Number:
            return Cplx<Real>(RealTraits<Real>::from_string(e->text));
        case ExprKind::Variable:
            return x;
        case ExprKind::ConstPi:
            return Cplx<Real>(real_pi<Real>());
        case ExprKind::ConstE: {
            using std::exp;
            return Cplx<Real>(exp(Real(1)));
        }
        case ExprKind::ConstI:
            return Cplx<Real>{Real(0), Real(1)};
        case ExprKind::Negate:
            return -evaluate(e->lhs, x);
        case ExprKind::Add:
            return evaluate(e->lhs, x) + evaluate(e->rhs, x);
        case ExprKind::Sub:
            return evaluate(e->lhs, x) - evaluate(e->rhs, x);
        case ExprKind::Mul:
            return evaluate(e->lhs, x) * evaluate(e->rhs, x);
        case ExprKind::Div: {
            const Cplx<Real> den = evaluate(e->rhs, x);
            if (den == zero) throw EvaluationSingularity("division by zero");
            return evaluate(e->lhs, x) / den;
        }
        case ExprKind::Pow: {
            const Cplx<Real> base = evaluate(e->lhs, x);
            const Cplx<Real> expo = evaluate(e->rhs, x);
            long n = 0;
            if (detail::integer_exponent(expo, n)) {
                if (base == zero) {
                    if (n > 0) return zero;
                    if (n == 0) return Cplx<Real>(Real(1));
                    throw EvaluationSingularity("zero raised to a negative power");
                }
                return n >= 0 ? powi(base, n) : Cplx<Real>(Real(1)) / powi(base, -n);
            }
            if (base == zero) {
                if (expo.im == 0 && expo.re > 0) return zero;
                if (expo == zero) return Cplx<Real>(Real(1));
                throw EvaluationSingularity("zero base with non-positive exponent");
            }
            return exp(expo * log(base));
        }
        case ExprKind::Call: {
            const Cplx<Real> a = evaluate(e->lhs, x);
            const std::string& f = e->text;
            if (f == "sin") return sin(a);
            if (f == "cos") return cos(a);
            if (f == "tan") {
                const Cplx<Real> c = cos(a);
                if (abs(c) <= 100 * real_eps<Real>() * (1 + abs(a)))
                    throw EvaluationSingularity("tan evaluated at a pole");
                return sin(a) / c;
            }
            if (f == "exp") return exp(a);
            if (f == "log") {
                if (a == zero) throw EvaluationSingularity("log of zero");
                return log(a);
            }
            if (f == "sqrt") return sqrt(a);
            if (f == "sinh") return sinh(a);
            if (f == "cosh") return cosh(a);
            if (f == "tanh") return tanh(a);
            if (f == "abs") return Cplx<Real>(abs(a));
            throw ContractViolation("unknown function in AST: " + f);
        }
    }
    throw ContractViolation("corrupt expression node");
}

template <class Real>
Cplx<Real> evaluate(const Expr& e, const Real& x) {
    return evaluate(e, Cplx<Real>(x));
}

namespace detail {

inline int precedence_of(ExprKind k) {
    switch (k) {
        case ExprKind::Add:
        case ExprKind::Sub:
            return 1;
        case ExprKind::Mul:
        case ExprKind::Div:
            return 2;
        case ExprKind::Negate:
            return 3;
        case ExprKind::Pow:
            return 4;
        default:
            return 5;
    }
}

inline void print_expr(const Expr& e, std::string& out, int parent_prec, bool rhs_of_binary) {
    const int prec = precedence_of(e->kind);
    const bool need_parens =
        prec < parent_prec || (prec == parent_prec && rhs_of_binary && parent_prec != 4) ||
        (e->kind == ExprKind::Pow && parent_prec == 4 && !rhs_of_binary);
    if (need_parens) out += '(';
    switch (e->kind) {
        case ExprKind::Number: out += e->text; break;
        case ExprKind::Variable: out += 'x'; break;
        case ExprKind::ConstPi: out += "pi"; break;
        case ExprKind::ConstE: out += 'e'; break;
        case ExprKind::ConstI: out += 'i'; break;
        case ExprKind::Negate:
            out += '-';
            print_expr(e->lhs, out, prec, true);
            break;
        case ExprKind::Add:
        case ExprKind::Sub:
            print_expr(e->lhs, out, prec, false);
            out += e->kind == ExprKind::Add ? "+" : "-";
            print_expr(e->rhs, out, prec, true);
            break;
        case ExprKind::Mul:
        case ExprKind::Div:
            print_expr(e->lhs, out, prec, false);
            out += e->kind == ExprKind::Mul ? "*" : "/";
            print_expr(e->rhs, out, prec, true);
            break;
        case ExprKind::Pow:
            print_expr(e->lhs, out, prec, false);
            out += '^';
            print_expr(e->rhs, out, prec, true);
            break;
        case ExprKind::Call:
            out += e->text;
            out += '(';
            print_expr(e->lhs, out, 0, false);
            out += ')';
            break;
    }
    if (need_parens) out += ')';
}

}  // namespace detail

// Canonical text form; parsing the result yields an equivalent expression.
inline std::string to_string(const Expr& e) {
    std::string out;
    detail::print_expr(e, out, 0, false);
    return out;
}

}  // namespace spps
