#pragma once

// Tiny arithmetic expression evaluator for custom indicator shapes.
// Grammar: expr := term (('+'|'-') term)*; term := factor (('*'|'/') factor)*;
// factor := unary ('^' factor)?; unary := ('-')? primary;
// primary := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'.
// Variables: x, y, z, r (= sqrt(x^2+y^2+z^2)), pi.

#include <array>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracfront_cli {

class Expr {
  public:
    explicit Expr(std::string text) : text_(std::move(text)) {
        pos_ = 0;
        root_ = parse_expr();
        skip_ws();
        if (pos_ != text_.size())
            throw std::invalid_argument("expr: trailing characters at position " +
                                        std::to_string(pos_));
    }

    double eval(const std::array<double, 3>& p) const {
        Env env{p[0], p[1], p[2], std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2])};
        return root_(env);
    }

  private:
    struct Env {
        double x, y, z, r;
    };
    using Node = std::function<double(const Env&)>;

    std::string text_;
    size_t pos_;
    Node root_;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Node parse_expr() {
        Node lhs = parse_term();
        for (;;) {
            if (eat('+')) {
                Node rhs = parse_term();
                lhs = [lhs, rhs](const Env& e) { return lhs(e) + rhs(e); };
            } else if (eat('-')) {
                Node rhs = parse_term();
                lhs = [lhs, rhs](const Env& e) { return lhs(e) - rhs(e); };
            } else {
                return lhs;
            }
        }
    }

    Node parse_term() {
        Node lhs = parse_factor();
        for (;;) {
            if (eat('*')) {
                Node rhs = parse_factor();
                lhs = [lhs, rhs](const Env& e) { return lhs(e) * rhs(e); };
            } else if (eat('/')) {
                Node rhs = parse_factor();
                lhs = [lhs, rhs](const Env& e) { return lhs(e) / rhs(e); };
            } else {
                return lhs;
            }
        }
    }

    Node parse_factor() {
        Node base = parse_unary();
        if (eat('^')) {
            Node expo = parse_factor();  // right associative
            return [base, expo](const Env& e) { return std::pow(base(e), expo(e)); };
        }
        return base;
    }

    Node parse_unary() {
        if (eat('-')) {
            Node inner = parse_unary();
            return [inner](const Env& e) { return -inner(e); };
        }
        return parse_primary();
    }

    Node parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw std::invalid_argument("expr: unexpected end");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t used = 0;
            const double v = std::stod(text_.substr(pos_), &used);
            pos_ += used;
            return [v](const Env&) { return v; };
        }
        if (c == '(') {
            ++pos_;
            Node inner = parse_expr();
            if (!eat(')')) throw std::invalid_argument("expr: missing ')'");
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                    text_[pos_] == '_'))
                ++pos_;
            const std::string name = text_.substr(start, pos_ - start);
            if (eat('(')) {
                std::vector<Node> args;
                if (!eat(')')) {
                    do {
                        args.push_back(parse_expr());
                    } while (eat(','));
                    if (!eat(')')) throw std::invalid_argument("expr: missing ')'");
                }
                return make_call(name, std::move(args));
            }
            if (name == "x") return [](const Env& e) { return e.x; };
            if (name == "y") return [](const Env& e) { return e.y; };
            if (name == "z") return [](const Env& e) { return e.z; };
            if (name == "r") return [](const Env& e) { return e.r; };
            if (name == "pi") return [](const Env&) { return M_PI; };
            throw std::invalid_argument("expr: unknown identifier '" + name + "'");
        }
        throw std::invalid_argument(std::string("expr: unexpected character '") + c + "'");
    }

    static Node make_call(const std::string& name, std::vector<Node> args) {
        auto need = [&](size_t n) {
            if (args.size() != n)
                throw std::invalid_argument("expr: " + name + " expects " +
                                            std::to_string(n) + " argument(s)");
        };
        if (name == "abs") { need(1); return [a = args[0]](const Env& e) { return std::abs(a(e)); }; }
        if (name == "sqrt") { need(1); return [a = args[0]](const Env& e) { return std::sqrt(a(e)); }; }
        if (name == "sin") { need(1); return [a = args[0]](const Env& e) { return std::sin(a(e)); }; }
        if (name == "cos") { need(1); return [a = args[0]](const Env& e) { return std::cos(a(e)); }; }
        if (name == "exp") { need(1); return [a = args[0]](const Env& e) { return std::exp(a(e)); }; }
        if (name == "log") { need(1); return [a = args[0]](const Env& e) { return std::log(a(e)); }; }
        if (name == "hypot") {
            need(2);
            return [a = args[0], b = args[1]](const Env& e) { return std::hypot(a(e), b(e)); };
        }
        if (name == "min") {
            need(2);
            return [a = args[0], b = args[1]](const Env& e) { return std::min(a(e), b(e)); };
        }
        if (name == "max") {
            need(2);
            return [a = args[0], b = args[1]](const Env& e) { return std::max(a(e), b(e)); };
        }
        if (name == "pow") {
            need(2);
            return [a = args[0], b = args[1]](const Env& e) { return std::pow(a(e), b(e)); };
        }
        throw std::invalid_argument("expr: unknown function '" + name + "'");
    }
};

}  // namespace fracfront_cli
