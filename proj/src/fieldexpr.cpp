#include "geoflow/fieldexpr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "geoflow/errors.hpp"

namespace geoflow::fieldexpr {

namespace {

ExprPtr make(Expr::Kind k) {
    auto e = std::make_unique<Expr>();
    e->kind = k;
    return e;
}

ExprPtr make_binary(Expr::Kind k, ExprPtr a, ExprPtr b) {
    auto e = make(k);
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

class Parser {
  public:
    explicit Parser(const std::string& src) : src_(src) {}

    ExprPtr run() {
        auto e = expr();
        skip_ws();
        if (pos_ < src_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

  private:
    ExprPtr expr() {
        auto lhs = term();
        for (;;) {
            skip_ws();
            if (accept('+'))
                lhs = make_binary(Expr::Kind::add, std::move(lhs), term());
            else if (accept('-'))
                lhs = make_binary(Expr::Kind::sub, std::move(lhs), term());
            else
                return lhs;
        }
    }

    ExprPtr term() {
        auto lhs = factor();
        for (;;) {
            skip_ws();
            if (accept('*'))
                lhs = make_binary(Expr::Kind::mul, std::move(lhs), factor());
            else if (accept('/'))
                lhs = make_binary(Expr::Kind::div, std::move(lhs), factor());
            else
                return lhs;
        }
    }

    ExprPtr factor() {
        skip_ws();
        if (accept('-')) {
            auto e = make(Expr::Kind::neg);
            e->lhs = factor();
            return e;
        }
        return power();
    }

    ExprPtr power() {
        auto base = atom();
        skip_ws();
        if (accept('^')) {
            skip_ws();
            const std::size_t at = pos_;
            if (pos_ >= src_.size() || !(std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
                throw ParseError("exponent must be a numeric literal", at);
            auto e = make(Expr::Kind::pow);
            e->value = number();
            e->lhs = std::move(base);
            return e;
        }
        return base;
    }

    ExprPtr atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            auto e = make(Expr::Kind::constant);
            e->value = number();
            return e;
        }
        if (accept('(')) {
            auto e = expr();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    ExprPtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::string name = src_.substr(start, pos_ - start);
        if (name == "x") return make(Expr::Kind::var_x);
        if (name == "y") return make(Expr::Kind::var_y);
        if (name == "pi") {
            auto e = make(Expr::Kind::constant);
            e->value = std::numbers::pi;
            return e;
        }
        UnaryFn fn;
        if (name == "sin") fn = UnaryFn::sin;
        else if (name == "cos") fn = UnaryFn::cos;
        else if (name == "exp") fn = UnaryFn::exp;
        else if (name == "sqrt") fn = UnaryFn::sqrt;
        else if (name == "log") fn = UnaryFn::log;
        else if (name == "abs") fn = UnaryFn::abs;
        else throw ParseError("unknown identifier \"" + name + "\"", start);
        skip_ws();
        expect('(');
        auto e = make(Expr::Kind::call);
        e->fn = fn;
        e->lhs = expr();
        expect(')');
        return e;
    }

    double number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        // optional exponent part: e[+-]digits
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                ++p;
                while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
                pos_ = p;
            }
        }
        double out = 0.0;
        const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, out);
        if (res.ec != std::errc() || res.ptr != src_.data() + pos_)
            throw ParseError("malformed number", start);
        return out;
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        skip_ws();
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    const std::string& src_;
    std::size_t pos_ = 0;
};

const char* fn_name(UnaryFn f) {
    switch (f) {
        case UnaryFn::sin: return "sin";
        case UnaryFn::cos: return "cos";
        case UnaryFn::exp: return "exp";
        case UnaryFn::sqrt: return "sqrt";
        case UnaryFn::log: return "log";
        case UnaryFn::abs: return "abs";
    }
    return "?";
}

void print_rec(const Expr& e, std::ostringstream& out) {
    switch (e.kind) {
        case Expr::Kind::constant: out << e.value; break;
        case Expr::Kind::var_x: out << 'x'; break;
        case Expr::Kind::var_y: out << 'y'; break;
        case Expr::Kind::neg:
            out << "(-";
            print_rec(*e.lhs, out);
            out << ')';
            break;
        case Expr::Kind::add:
        case Expr::Kind::sub:
        case Expr::Kind::mul:
        case Expr::Kind::div: {
            const char op = e.kind == Expr::Kind::add   ? '+'
                            : e.kind == Expr::Kind::sub ? '-'
                            : e.kind == Expr::Kind::mul ? '*'
                                                        : '/';
            out << '(';
            print_rec(*e.lhs, out);
            out << op;
            print_rec(*e.rhs, out);
            out << ')';
            break;
        }
        case Expr::Kind::pow:
            out << '(';
            print_rec(*e.lhs, out);
            out << '^' << e.value << ')';
            break;
        case Expr::Kind::call:
            out << fn_name(e.fn) << '(';
            print_rec(*e.lhs, out);
            out << ')';
            break;
    }
}

struct NodeContext {
    int i, j;
    double x, y;
};

double eval_rec(const Expr& e, double x, double y, const NodeContext* node) {
    auto fail = [&](const char* what) -> double {
        if (node) throw EvalError(what, node->i, node->j, node->x, node->y);
        throw Error(what);
    };
    switch (e.kind) {
        case Expr::Kind::constant: return e.value;
        case Expr::Kind::var_x: return x;
        case Expr::Kind::var_y: return y;
        case Expr::Kind::neg: return -eval_rec(*e.lhs, x, y, node);
        case Expr::Kind::add: return eval_rec(*e.lhs, x, y, node) + eval_rec(*e.rhs, x, y, node);
        case Expr::Kind::sub: return eval_rec(*e.lhs, x, y, node) - eval_rec(*e.rhs, x, y, node);
        case Expr::Kind::mul: return eval_rec(*e.lhs, x, y, node) * eval_rec(*e.rhs, x, y, node);
        case Expr::Kind::div: {
            const double den = eval_rec(*e.rhs, x, y, node);
            if (den == 0.0) return fail("division by zero");
            return eval_rec(*e.lhs, x, y, node) / den;
        }
        case Expr::Kind::pow: return std::pow(eval_rec(*e.lhs, x, y, node), e.value);
        case Expr::Kind::call: {
            const double v = eval_rec(*e.lhs, x, y, node);
            switch (e.fn) {
                case UnaryFn::sin: return std::sin(v);
                case UnaryFn::cos: return std::cos(v);
                case UnaryFn::exp: return std::exp(v);
                case UnaryFn::abs: return std::abs(v);
                case UnaryFn::sqrt:
                    if (v < 0.0) return fail("sqrt of negative value");
                    return std::sqrt(v);
                case UnaryFn::log:
                    if (v <= 0.0) return fail("log of non-positive value");
                    return std::log(v);
            }
            return 0.0;
        }
    }
    return 0.0;
}

} // namespace

ExprPtr parse(const std::string& src) { return Parser(src).run(); }

std::string print(const Expr& e) {
    std::ostringstream out;
    out.precision(17);
    print_rec(e, out);
    return out.str();
}

double evaluate_at(const Expr& e, double x, double y) { return eval_rec(e, x, y, nullptr); }

ScalarField evaluate(const Expr& e, const GridSpec& grid) {
    ScalarField out(grid);
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j) {
            NodeContext node{i, j, grid.x(i), grid.y(j)};
            out.values(i, j) = eval_rec(e, node.x, node.y, &node);
        }
    return out;
}

} // namespace geoflow::fieldexpr
