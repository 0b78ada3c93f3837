#pragma once

#include "fracocycle/cochain.hpp"
#include "fracocycle/geom.hpp"

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fracocycle::expr {

using Complex = std::complex<double>;

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(message + " at offset " + std::to_string(position)), message(message), position(position) {}
    std::string message;
    std::size_t position;
};

class EvalError : public Error {
public:
    using Error::Error;
};

enum class Op {
    Number, X, Y, Z, Pi, I,
    Add, Sub, Mul, Div, Neg, Pow,
    Sin, Cos, Exp, Abs, Re, Im, Conj, Weier,
};

struct Node {
    Op op = Op::Number;
    double value = 0.0;   // Number
    int exponent = 0;     // Pow
    // Weier: sum_{k=0}^{K} lambda^(-alpha k) cos(lambda^k t)
    double w_alpha = 0.0;
    double w_lambda = 0.0;
    int w_terms = 0;
    std::vector<double> w_amplitude;  // lambda^(-alpha k)
    std::vector<double> w_frequency;  // lambda^k
    std::vector<std::shared_ptr<const Node>> args;
};

/// Immutable expression tree over x, y, z = x + iy with complex semantics.
class Expr {
public:
    explicit Expr(std::shared_ptr<const Node> root);

    Complex eval(geom::Point2 p) const;
    /// 1 without weier terms, else the smallest weier exponent.
    double declared_alpha() const;
    /// Canonical text that parses back to the same tree.
    std::string print() const;
    const Node& root() const { return *root_; }

    friend bool operator==(const Expr& a, const Expr& b);

private:
    std::shared_ptr<const Node> root_;
};

/// Grammar (whitespace ignored):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' ['-'] integer)*
///   primary := number | x | y | z | pi | i | func '(' args ')' | '(' expr ')'
///   func    := sin | cos | exp | abs | re | im | conj | weier
/// weier(alpha, lambda, K, arg) takes numeric literals for alpha in (0, 1],
/// lambda > 1 and integer K >= 0.
Expr parse(std::string_view text);

/// Wraps an expression as a field; the exponent is declared_alpha() unless overridden.
cochain::ScalarField to_field(const Expr& e, std::optional<double> alpha_override = std::nullopt);

}  // namespace fracocycle::expr
