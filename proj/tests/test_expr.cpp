#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "mxspline/expr.hpp"

using namespace mxspline;

TEST_CASE("parse and evaluate basics") {
    CHECK(expr::parse("x*exp(-x)").eval(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15).scale(0.0));
    CHECK(expr::parse("1/(4 + x^2)").eval(0.0) == doctest::Approx(0.25).epsilon(1e-15).scale(0.0));
    CHECK(expr::parse("x^3").eval(2.0) == 8.0);
    for (double x : {0.0, 0.3, 1.7, -2.5})
        CHECK(expr::parse("sin(x)^2 + cos(x)^2").eval(x) == doctest::Approx(1.0).epsilon(1e-15).scale(0.0));
}

TEST_CASE("precedence and associativity") {
    CHECK(expr::parse("2+3*4").eval(0.0) == 14.0);
    CHECK(expr::parse("2^3^2").eval(0.0) == 512.0);  // right-associative
    CHECK(expr::parse("-x^2").eval(3.0) == -9.0);    // ^ binds tighter than unary -
    CHECK(expr::parse("(-x)^2").eval(3.0) == 9.0);
    CHECK(expr::parse("2^-1").eval(0.0) == 0.5);
    CHECK(expr::parse("6/3/2").eval(0.0) == 1.0);    // left-associative
    CHECK(expr::parse("pi").eval(0.0) == doctest::Approx(3.14159265358979).epsilon(1e-14).scale(0.0));
    CHECK(expr::parse("e").eval(0.0) == doctest::Approx(2.71828182845905).epsilon(1e-14).scale(0.0));
}

TEST_CASE("syntax errors carry offsets") {
    try {
        expr::parse("2*^x");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset == 2);
    }
    CHECK_THROWS_AS(expr::parse("2x"), ParseError);  // no implicit multiplication
    CHECK_THROWS_AS(expr::parse("sin 3"), ParseError);
    CHECK_THROWS_AS(expr::parse("(1+2"), ParseError);
    CHECK_THROWS_AS(expr::parse(""), ParseError);
    CHECK_THROWS_AS(expr::parse("foo(1)"), ParseError);
    CHECK_THROWS_AS(expr::parse("1 2"), ParseError);
}

TEST_CASE("domain errors name the offending subexpression") {
    CHECK_THROWS_AS(expr::parse("log(x)").eval(0.0), DomainError);
    CHECK_THROWS_AS(expr::parse("sqrt(x)").eval(-1.0), DomainError);
    CHECK_THROWS_AS(expr::parse("(-2)^0.5").eval(0.0), DomainError);
    CHECK(expr::parse("(-2)^3").eval(0.0) == -8.0);
    try {
        expr::parse("1/(x-1)").eval(1.0);
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("x - 1") != std::string::npos);
    }
}

TEST_CASE("scientific literals lex as one number") {
    CHECK(expr::parse("2e-3").eval(0.0) == 2e-3);
    CHECK(expr::parse("1.5e2").eval(0.0) == 150.0);
    CHECK(expr::parse("2*e").eval(0.0) == doctest::Approx(2.0 * std::exp(1.0)));
}

namespace {

// Test-side AST and direct recursive interpreter, independent of the
// library's printer/parser/evaluator.
struct RefNode {
    char op = 0;  // 'n' number, 'x', binary + - * / ^, 'f' call
    double value = 0.0;
    int func = 0;  // 0 exp, 1 sin, 2 cos, 3 abs
    std::shared_ptr<RefNode> left, right;
};

using RefPtr = std::shared_ptr<RefNode>;

RefPtr gen(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 7);
    auto node = std::make_shared<RefNode>();
    switch (pick(rng)) {
        case 0: {
            std::uniform_real_distribution<double> num(-4.0, 4.0);
            node->op = 'n';
            node->value = num(rng);
            return node;
        }
        case 1: node->op = 'x'; return node;
        case 2: case 3: case 4: {
            const char ops[] = {'+', '-', '*'};
            node->op = ops[pick(rng) % 3];
            node->left = gen(rng, depth - 1);
            node->right = gen(rng, depth - 1);
            return node;
        }
        case 5: {
            node->op = '/';
            node->left = gen(rng, depth - 1);
            node->right = gen(rng, depth - 1);
            return node;
        }
        default: {
            node->op = 'f';
            std::uniform_int_distribution<int> f(0, 3);
            node->func = f(rng);
            node->left = gen(rng, depth - 1);
            return node;
        }
    }
}

double ref_eval(const RefNode& n, double x, bool& bad) {
    switch (n.op) {
        case 'n': return n.value;
        case 'x': return x;
        case 'f': {
            const double a = ref_eval(*n.left, x, bad);
            switch (n.func) {
                case 0: return std::exp(a);
                case 1: return std::sin(a);
                case 2: return std::cos(a);
                default: return std::abs(a);
            }
        }
        default: {
            const double a = ref_eval(*n.left, x, bad);
            const double b = ref_eval(*n.right, x, bad);
            switch (n.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                default:
                    if (b == 0.0) bad = true;
                    return b == 0.0 ? 0.0 : a / b;
            }
        }
    }
}

std::string ref_print(const RefNode& n) {
    switch (n.op) {
        case 'n': {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", n.value);
            // Fold the sign into an explicit unary minus so the literal
            // itself stays non-negative.
            return n.value < 0 ? "(-" + std::string(buf).substr(1) + ")" : std::string(buf);
        }
        case 'x': return "x";
        case 'f': {
            const char* names[] = {"exp", "sin", "cos", "abs"};
            return std::string(names[n.func]) + "(" + ref_print(*n.left) + ")";
        }
        default:
            return "(" + ref_print(*n.left) + ")" + n.op + "(" + ref_print(*n.right) + ")";
    }
}

}  // namespace

TEST_CASE("differential test against a direct recursive interpreter") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> xs(-2.0, 2.0);
    int checked = 0;
    while (checked < 200) {
        const RefPtr tree = gen(rng, 5);
        const std::string source = ref_print(*tree);
        const expr::Expr parsed = expr::parse(source);
        for (int i = 0; i < 5; ++i) {
            const double x = xs(rng);
            bool bad = false;
            const double want = ref_eval(*tree, x, bad);
            if (bad || !std::isfinite(want) || std::abs(want) > 1e12) continue;
            const double got = parsed.eval(x);
            CHECK(std::abs(got - want) <= 1e-12 * (1.0 + std::abs(want)));
        }
        ++checked;
    }
}

TEST_CASE("print/parse round trip evaluates identically") {
    const std::vector<std::string> sources = {
        "x*exp(-x)", "sin(x)^2 + cos(x)^2", "1/(4+x^2)", "2^3^2", "-x^2+3*x-1",
        "sqrt(abs(x))", "x*(2+x+2*x^2)", "1 + (3-2*x)*x^2 + exp(x)*(x - x^4)",
        "-(x+1)/(x-10)", "2e-3*x + pi",
    };
    for (const auto& source : sources) {
        const expr::Expr original = expr::parse(source);
        const expr::Expr reparsed = expr::parse(original.str());
        for (int i = 0; i <= 100; ++i) {
            const double x = -3.0 + 6.0 * i / 100.0;
            double want = 0.0, got = 0.0;
            bool want_threw = false, got_threw = false;
            try {
                want = original.eval(x);
            } catch (const DomainError&) {
                want_threw = true;
            }
            try {
                got = reparsed.eval(x);
            } catch (const DomainError&) {
                got_threw = true;
            }
            REQUIRE(want_threw == got_threw);
            if (!want_threw) CHECK(std::abs(got - want) <= 1e-12 * (1.0 + std::abs(want)));
        }
    }
}
