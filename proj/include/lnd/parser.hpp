// Parser for the shared polynomial expression grammar:
//   variables from the declared list, integer and a/b rational literals,
//   operators + - * ^, parentheses, insignificant whitespace.
// Juxtaposition is not multiplication; '/' occurs only between integer
// literals.
#pragma once

#include "lnd/polynomial.hpp"
#include "lnd/rational.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lnd {

struct ParseError : std::runtime_error {
    ParseError(int line_, int col_, const std::string& what_)
        : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                             std::to_string(col_) + ": " + what_),
          line(line_),
          col(col_) {}
    int line;
    int col;
};

namespace detail {

enum class Tok { Number, Ident, Plus, Minus, Star, Caret, Slash, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        skip_ws();
        int l = line_, c = col_;
        if (pos_ >= src_.size()) return {Tok::End, "", l, c};
        char ch = src_[pos_];
        if (std::isdigit((unsigned char)ch)) {
            std::string num;
            while (pos_ < src_.size() && std::isdigit((unsigned char)src_[pos_]))
                num += advance();
            return {Tok::Number, num, l, c};
        }
        if (std::isalpha((unsigned char)ch) || ch == '_') {
            std::string id;
            while (pos_ < src_.size() &&
                   (std::isalnum((unsigned char)src_[pos_]) || src_[pos_] == '_'))
                id += advance();
            return {Tok::Ident, id, l, c};
        }
        advance();
        switch (ch) {
            case '+': return {Tok::Plus, "+", l, c};
            case '-': return {Tok::Minus, "-", l, c};
            case '*': return {Tok::Star, "*", l, c};
            case '^': return {Tok::Caret, "^", l, c};
            case '/': return {Tok::Slash, "/", l, c};
            case '(': return {Tok::LParen, "(", l, c};
            case ')': return {Tok::RParen, ")", l, c};
            default:
                throw ParseError(l, c, std::string("unexpected character '") + ch + "'");
        }
    }

private:
    char advance() {
        char ch = src_[pos_++];
        if (ch == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return ch;
    }
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace((unsigned char)src_[pos_])) advance();
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    Parser(const std::string& src, VarListPtr ring)
        : lexer_(src), ring_(std::move(ring)), cur_(lexer_.next()) {}

    Polynomial parse() {
        Polynomial p = expression();
        expect(Tok::End, "end of input");
        return p;
    }

private:
    Polynomial expression() {
        Polynomial acc = term();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            bool minus = cur_.kind == Tok::Minus;
            bump();
            Polynomial t = term();
            acc = minus ? acc - t : acc + t;
        }
        return acc;
    }

    Polynomial term() {
        Polynomial acc = signed_factor();
        while (cur_.kind == Tok::Star) {
            bump();
            acc = acc * signed_factor();
        }
        return acc;
    }

    Polynomial signed_factor() {
        int sign = 1;
        while (cur_.kind == Tok::Minus || cur_.kind == Tok::Plus) {
            if (cur_.kind == Tok::Minus) sign = -sign;
            bump();
        }
        Polynomial f = factor();
        return sign < 0 ? -f : f;
    }

    Polynomial factor() {
        Polynomial base = atom();
        if (cur_.kind == Tok::Caret) {
            Token caret = cur_;
            bump();
            if (cur_.kind != Tok::Number)
                throw ParseError(cur_.line, cur_.col, "expected integer exponent after '^'");
            unsigned long e = parse_exponent(cur_);
            bump();
            return base.pow((unsigned)e);
        }
        return base;
    }

    Polynomial atom() {
        switch (cur_.kind) {
            case Tok::Number: {
                std::string num = cur_.text;
                bump();
                if (cur_.kind == Tok::Slash) {
                    bump();
                    if (cur_.kind != Tok::Number)
                        throw ParseError(cur_.line, cur_.col,
                                         "expected integer denominator after '/'");
                    num += "/" + cur_.text;
                    bump();
                }
                return Polynomial::constant(ring_, Rational::from_string(num));
            }
            case Tok::Ident: {
                for (const auto& v : *ring_) {
                    if (v == cur_.text) {
                        Polynomial p = Polynomial::variable(ring_, v);
                        bump();
                        return p;
                    }
                }
                throw ParseError(cur_.line, cur_.col,
                                 "unknown variable '" + cur_.text + "'");
            }
            case Tok::LParen: {
                bump();
                Polynomial p = expression();
                expect(Tok::RParen, "')'");
                return p;
            }
            default:
                throw ParseError(cur_.line, cur_.col, "expected a number, variable or '('");
        }
    }

    static unsigned long parse_exponent(const Token& t) {
        try {
            std::size_t used = 0;
            unsigned long e = std::stoul(t.text, &used);
            if (used != t.text.size()) throw std::invalid_argument("");
            return e;
        } catch (const std::exception&) {
            throw ParseError(t.line, t.col, "exponent out of range");
        }
    }

    void expect(Tok k, const std::string& what) {
        if (cur_.kind != k)
            throw ParseError(cur_.line, cur_.col, "expected " + what);
        if (k != Tok::End) bump();
    }
    void bump() { cur_ = lexer_.next(); }

    Lexer lexer_;
    VarListPtr ring_;
    Token cur_;
};

}  // namespace detail

inline Polynomial parse_polynomial(const std::string& text, const VarListPtr& ring) {
    return detail::Parser(text, ring).parse();
}

inline Rational parse_rational(const std::string& text) {
    auto ring = make_ring({});
    Polynomial p = detail::Parser(text, ring).parse();
    return p.constant_value();
}

}  // namespace lnd
