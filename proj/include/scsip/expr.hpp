#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "scsip/geometry.hpp"

namespace scsip {

/// Immutable arithmetic expression in x and y.
///
/// Grammar (lowest to highest precedence):
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' unary)?          (right-associative)
///   primary := number | 'x' | 'y' | 'pi' | func '(' sum ')' | '(' sum ')'
/// with func one of sin, cos, exp.
class Expr {
public:
    struct Node;

    Expr() = default;
    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

    double eval(Point p) const;
    double operator()(Point p) const { return eval(p); }
    /// Fully parenthesized text that parses back to the same tree.
    std::string to_string() const;
    bool empty() const { return root_ == nullptr; }

private:
    std::shared_ptr<const Node> root_;
};

/// Throws ParseError carrying the offending character offset.
Expr parse_expr(std::string_view src);

} // namespace scsip
