#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "vfindex/expr.hpp"

namespace vfindex {

class ParseError : public std::runtime_error {
public:
    enum class Kind { Syntax, UnknownIdentifier, NonIntegerExponent };

    ParseError(Kind k, std::size_t at, const std::string& msg)
        : std::runtime_error(msg + " at offset " + std::to_string(at)), kind(k), offset(at) {}

    Kind kind;
    std::size_t offset;
};

namespace detail {

// Recursive-descent parser for the field language:
//
//   field    := '(' expr ',' expr ')'
//   expr     := term (('+' | '-') term)*
//   term     := unary (('*' | '/') unary)*
//   unary    := ('+' | '-') unary | power
//   power    := primary ('^' exponent)*
//   exponent := ['+' | '-'] INTEGER | '(' ['+' | '-'] INTEGER ')'
//   primary  := NUMBER | 'x' | 'y' | FUNC '(' expr ')' | '(' expr ')'
//   FUNC     := 'sin' | 'cos' | 'exp' | 'sqrt'
//   NUMBER   := DIGITS ['.' DIGITS] [('e' | 'E') ['+' | '-'] DIGITS]  (or '.' DIGITS ...)
class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    std::pair<ScalarExpr, ScalarExpr> field() {
        expect('(', "expected '(' opening the field");
        ScalarExpr a = expr();
        expect(',', "expected ',' between components");
        ScalarExpr b = expr();
        expect(')', "expected ')' closing the field");
        finish();
        return {a, b};
    }

    ScalarExpr scalar() {
        ScalarExpr e = expr();
        finish();
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(ParseError::Kind::Syntax, pos_, msg);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c, const char* msg) {
        if (!accept(c)) fail(msg);
    }
    void finish() {
        if (peek() != '\0') fail("unexpected trailing input");
    }

    ScalarExpr expr() {
        ScalarExpr acc = term();
        for (;;) {
            if (accept('+')) acc = acc + term();
            else if (accept('-')) acc = acc - term();
            else return acc;
        }
    }

    ScalarExpr term() {
        ScalarExpr acc = unary();
        for (;;) {
            if (accept('*')) acc = acc * unary();
            else if (accept('/')) acc = acc / unary();
            else return acc;
        }
    }

    ScalarExpr unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    ScalarExpr power() {
        ScalarExpr base = primary();
        while (accept('^')) base = ScalarExpr::power(base, exponent());
        return base;
    }

    int exponent() {
        const std::size_t start = (skip_ws(), pos_);
        bool parens = accept('(');
        int sign = 1;
        if (accept('-')) sign = -1;
        else accept('+');
        skip_ws();
        const std::size_t digits_at = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const bool have_digits = pos_ > digits_at;
        const bool fractional = pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E');
        if (!have_digits || fractional) {
            // Anything other than an integer literal: a decimal, a variable, an expression.
            if (!have_digits && pos_ >= src_.size()) fail("expected exponent");
            throw ParseError(ParseError::Kind::NonIntegerExponent, start, "non-integer exponent");
        }
        const std::string_view digits = src_.substr(digits_at, pos_ - digits_at);
        if (digits.size() > 6) throw ParseError(ParseError::Kind::NonIntegerExponent, start, "exponent too large");
        if (parens) expect(')', "expected ')' after exponent");
        return sign * std::stoi(std::string(digits));
    }

    ScalarExpr number() {
        const std::size_t start = pos_;
        std::string mantissa;
        int frac_digits = 0;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) mantissa += src_[pos_++];
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                mantissa += src_[pos_++];
                ++frac_digits;
            }
        }
        if (mantissa.empty()) {
            pos_ = start;
            fail("malformed number");
        }
        long exp10 = 0;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_++;
            int s = 1;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) s = src_[pos_++] == '-' ? -1 : 1;
            std::string ed;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ed += src_[pos_++];
            if (ed.empty() || ed.size() > 4) {
                pos_ = save;
                fail("malformed exponent in number");
            }
            exp10 = s * std::stol(ed);
        }
        exp10 -= frac_digits;
        // cpp_int reads a leading 0 as an octal prefix
        const std::size_t nz = mantissa.find_first_not_of('0');
        Rational q{BigInt(nz == std::string::npos ? std::string("0") : mantissa.substr(nz))};
        BigInt ten_pow = 1;
        for (long i = 0; i < std::labs(exp10); ++i) ten_pow *= 10;
        if (exp10 >= 0) q *= Rational(ten_pow);
        else q /= Rational(ten_pow);
        return ScalarExpr::constant(q);
    }

    ScalarExpr primary() {
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
            const std::string_view id = src_.substr(start, pos_ - start);
            if (id == "x") return ScalarExpr::x();
            if (id == "y") return ScalarExpr::y();
            Op fn;
            if (id == "sin") fn = Op::Sin;
            else if (id == "cos") fn = Op::Cos;
            else if (id == "exp") fn = Op::Exp;
            else if (id == "sqrt") fn = Op::Sqrt;
            else throw ParseError(ParseError::Kind::UnknownIdentifier, start, "unknown identifier '" + std::string(id) + "'");
            expect('(', "expected '(' after function name");
            ScalarExpr arg = expr();
            expect(')', "expected ')' closing function argument");
            return ScalarExpr::unary(fn, arg);
        }
        if (accept('(')) {
            ScalarExpr inner = expr();
            expect(')', "expected ')'");
            return inner;
        }
        if (c == '\0') fail("unexpected end of input");
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace detail

inline ScalarExpr parse_scalar(std::string_view src) { return detail::Parser(src).scalar(); }

}  // namespace vfindex
