#pragma once

#include <memory>
#include <string>

#include "geoflow/grid.hpp"

namespace geoflow::fieldexpr {

/// AST for the scalar-field expression language over variables x, y.
///
/// Grammar (whitespace-insensitive):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | power
///   power  := atom ('^' number)?
///   atom   := number | 'x' | 'y' | 'pi' | ident '(' expr ')' | '(' expr ')'
///
/// '^' binds tighter than unary minus, so -x^2 parses as -(x^2). Exponents
/// are numeric literals only.
struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class UnaryFn { sin, cos, exp, sqrt, log, abs };

struct Expr {
    enum class Kind { constant, var_x, var_y, neg, add, sub, mul, div, pow, call };
    Kind kind;
    double value = 0.0;   // constant, or exponent for pow
    UnaryFn fn{};         // call
    ExprPtr lhs, rhs;     // operands (unary ops use lhs only)
};

ExprPtr parse(const std::string& src);

/// Canonical fully parenthesized rendering; parse(print(parse(s))) == parse(s).
std::string print(const Expr& e);

double evaluate_at(const Expr& e, double x, double y);

/// Sample at grid nodes. Throws EvalError on a domain violation (log of a
/// non-positive value, sqrt of a negative value, division by zero) naming the
/// offending node.
ScalarField evaluate(const Expr& e, const GridSpec& grid);

} // namespace geoflow::fieldexpr
