#include "mxspline/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <utility>

namespace mxspline::expr {

namespace {

NodePtr make_number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->number = v;
    return n;
}

NodePtr make_variable() {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Variable;
    return n;
}

NodePtr make_named(Constant c) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Named;
    n->constant = c;
    return n;
}

NodePtr make_negate(NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Negate;
    n->left = std::move(a);
    return n;
}

NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->left = std::move(a);
    n->right = std::move(b);
    return n;
}

NodePtr make_call(Func f, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Call;
    n->func = f;
    n->left = std::move(a);
    return n;
}

// ---- parsing -------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr run() {
        skip_space();
        NodePtr e = sum();
        skip_space();
        if (pos_ != src_.size()) fail("end of input");
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected) {
        std::string got = pos_ < src_.size() ? "'" + std::string(1, src_[pos_]) + "'"
                                             : "end of input";
        throw ParseError("expected " + expected + " at offset " + std::to_string(pos_) +
                             ", found " + got,
                         pos_);
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

    bool accept(char c) {
        skip_space();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr sum() {
        NodePtr e = product();
        for (;;) {
            if (accept('+')) e = make_binary(BinaryOp::Add, e, product());
            else if (accept('-')) e = make_binary(BinaryOp::Sub, e, product());
            else return e;
        }
    }

    NodePtr product() {
        NodePtr e = signed_factor();
        for (;;) {
            if (accept('*')) e = make_binary(BinaryOp::Mul, e, signed_factor());
            else if (accept('/')) e = make_binary(BinaryOp::Div, e, signed_factor());
            else return e;
        }
    }

    // Unary minus binds looser than ^: -x^2 is -(x^2).
    NodePtr signed_factor() {
        if (accept('-')) return make_negate(signed_factor());
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) return make_binary(BinaryOp::Pow, base, signed_factor());
        return base;
    }

    NodePtr atom() {
        skip_space();
        const char c = peek();
        if (c == '(') {
            ++pos_;
            NodePtr e = sum();
            if (!accept(')')) fail("')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return word();
        fail("a number, 'x', a constant, a function call or '('");
    }

    NodePtr number() {
        const char* first = src_.data() + pos_;
        const char* last = src_.data() + src_.size();
        double value = 0.0;
        auto [end, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || end == first) fail("a number");
        // from_chars accepts forms like "1e" greedily rejected; it stops at
        // the longest valid prefix, which is exactly what we want here.
        pos_ = static_cast<std::size_t>(end - src_.data());
        return make_number(value);
    }

    NodePtr word() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               std::isalpha(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name == "x") return make_variable();
        if (name == "pi") return make_named(Constant::Pi);
        if (name == "e") return make_named(Constant::E);

        Func f;
        if (name == "exp") f = Func::Exp;
        else if (name == "log") f = Func::Log;
        else if (name == "sin") f = Func::Sin;
        else if (name == "cos") f = Func::Cos;
        else if (name == "tan") f = Func::Tan;
        else if (name == "sqrt") f = Func::Sqrt;
        else if (name == "abs") f = Func::Abs;
        else {
            pos_ = start;
            fail("'x', 'pi', 'e' or a function name");
        }
        if (!accept('(')) fail("'(' after function name");
        NodePtr arg = sum();
        if (!accept(')')) fail("')'");
        return make_call(f, arg);
    }
};

// ---- printing ------------------------------------------------------------

// Binding strength used to decide where parentheses are required.
int precedence(const Node& n) {
    switch (n.kind) {
        case Node::Kind::Binary:
            switch (n.op) {
                case BinaryOp::Add:
                case BinaryOp::Sub: return 1;
                case BinaryOp::Mul:
                case BinaryOp::Div: return 2;
                case BinaryOp::Pow: return 4;
            }
            return 0;
        case Node::Kind::Negate: return 3;
        default: return 5;
    }
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, int min_prec, std::string& out) {
    const bool parens = precedence(child) < min_prec;
    if (parens) out += '(';
    print_node(child, out);
    if (parens) out += ')';
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case Node::Kind::Number: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", n.number);
            out += buf;
            // Negative literals only arise from internal construction; keep
            // them parenthesizable by printing through Negate instead.
            return;
        }
        case Node::Kind::Variable: out += 'x'; return;
        case Node::Kind::Named: out += n.constant == Constant::Pi ? "pi" : "e"; return;
        case Node::Kind::Negate:
            out += '-';
            print_child(*n.left, precedence(n), out);
            return;
        case Node::Kind::Call: {
            switch (n.func) {
                case Func::Exp: out += "exp"; break;
                case Func::Log: out += "log"; break;
                case Func::Sin: out += "sin"; break;
                case Func::Cos: out += "cos"; break;
                case Func::Tan: out += "tan"; break;
                case Func::Sqrt: out += "sqrt"; break;
                case Func::Abs: out += "abs"; break;
            }
            out += '(';
            print_node(*n.left, out);
            out += ')';
            return;
        }
        case Node::Kind::Binary: {
            const int prec = precedence(n);
            const char* op = nullptr;
            switch (n.op) {
                case BinaryOp::Add: op = " + "; break;
                case BinaryOp::Sub: op = " - "; break;
                case BinaryOp::Mul: op = "*"; break;
                case BinaryOp::Div: op = "/"; break;
                case BinaryOp::Pow: op = "^"; break;
            }
            // Left-associative operators need strictly tighter children on
            // the right; ^ is right-associative so the mirror rule applies.
            if (n.op == BinaryOp::Pow) {
                print_child(*n.left, prec + 1, out);
                out += op;
                print_child(*n.right, prec, out);
            } else {
                print_child(*n.left, prec, out);
                out += op;
                print_child(*n.right, prec + 1, out);
            }
            return;
        }
    }
}

std::string node_str(const Node& n) {
    std::string out;
    print_node(n, out);
    return out;
}

// ---- evaluation ----------------------------------------------------------

[[noreturn]] void domain_fail(const Node& n, const char* what) {
    throw DomainError(std::string(what) + " in '" + node_str(n) + "'");
}

double eval_node(const Node& n, double x) {
    switch (n.kind) {
        case Node::Kind::Number: return n.number;
        case Node::Kind::Variable: return x;
        case Node::Kind::Named:
            return n.constant == Constant::Pi ? std::numbers::pi : std::numbers::e;
        case Node::Kind::Negate: return -eval_node(*n.left, x);
        case Node::Kind::Call: {
            const double a = eval_node(*n.left, x);
            double r = 0.0;
            switch (n.func) {
                case Func::Exp: r = std::exp(a); break;
                case Func::Log:
                    if (a <= 0.0) domain_fail(n, "log of a non-positive value");
                    r = std::log(a);
                    break;
                case Func::Sin: r = std::sin(a); break;
                case Func::Cos: r = std::cos(a); break;
                case Func::Tan: r = std::tan(a); break;
                case Func::Sqrt:
                    if (a < 0.0) domain_fail(n, "sqrt of a negative value");
                    r = std::sqrt(a);
                    break;
                case Func::Abs: r = std::abs(a); break;
            }
            if (!std::isfinite(r)) domain_fail(n, "non-finite result");
            return r;
        }
        case Node::Kind::Binary: {
            const double a = eval_node(*n.left, x);
            const double b = eval_node(*n.right, x);
            double r = 0.0;
            switch (n.op) {
                case BinaryOp::Add: r = a + b; break;
                case BinaryOp::Sub: r = a - b; break;
                case BinaryOp::Mul: r = a * b; break;
                case BinaryOp::Div:
                    if (b == 0.0) domain_fail(n, "division by zero");
                    r = a / b;
                    break;
                case BinaryOp::Pow:
                    if (a < 0.0 && b != std::floor(b))
                        domain_fail(n, "negative base with non-integer exponent");
                    if (a == 0.0 && b < 0.0) domain_fail(n, "zero base with negative exponent");
                    r = std::pow(a, b);
                    break;
            }
            if (!std::isfinite(r)) domain_fail(n, "non-finite result");
            return r;
        }
    }
    domain_fail(n, "corrupt expression node");
}

}  // namespace

double Expr::eval(double x) const {
    if (!root_) throw DomainError("eval of an empty expression");
    return eval_node(*root_, x);
}

std::string Expr::str() const {
    if (!root_) return "";
    return node_str(*root_);
}

Expr parse(std::string_view source) {
    return Expr(Parser(source).run());
}

}  // namespace mxspline::expr
