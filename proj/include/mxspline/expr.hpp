#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "mxspline/errors.hpp"

namespace mxspline::expr {

// Scalar expressions in one variable x, used by config documents to define
// the entries of coefficient matrix functions. Grammar (loosest to tightest
// binding): + -, * /, unary -, ^ (right-associative). Atoms are real
// literals, x, pi, e, parenthesized expressions and the calls
// exp log sin cos tan sqrt abs. No implicit multiplication.

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Func { Exp, Log, Sin, Cos, Tan, Sqrt, Abs };
enum class Constant { Pi, E };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    enum class Kind { Number, Variable, Named, Negate, Binary, Call };
    Kind kind;
    double number = 0.0;       // Number
    Constant constant{};       // Named
    BinaryOp op{};             // Binary
    Func func{};               // Call
    NodePtr left, right;       // Binary: both; Negate/Call: left only
};

class Expr {
public:
    Expr() = default;
    explicit Expr(NodePtr root) : root_(std::move(root)) {}

    bool valid() const { return root_ != nullptr; }
    const NodePtr& root() const { return root_; }

    // Evaluates at x. Throws DomainError for log of a non-positive value,
    // sqrt of a negative, division by zero, a negative base raised to a
    // non-integer power, or a non-finite result; the message names the
    // offending subexpression.
    double eval(double x) const;

    // Text form that parses back to an equivalent expression.
    std::string str() const;

private:
    NodePtr root_;
};

// Parses source into an expression. Throws ParseError (with byte offset and
// a description of what was expected) on malformed input.
Expr parse(std::string_view source);

}  // namespace mxspline::expr
