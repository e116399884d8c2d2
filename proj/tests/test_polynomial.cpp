#include <catch2/catch_amalgamated.hpp>

#include "witten/polynomial.hpp"

using namespace witten;

namespace {
RatPoly P(const char* s, int nv) { return parse_polynomial(s, nv); }
}  // namespace

TEST_CASE("parse and print") {
    RatPoly p = P("1/8*x1^8 - 1/4*x1^4", 1);
    CHECK(p.degree() == 8);
    CHECK(p.coeff(Monomial({8})) == Rational(1, 8));
    CHECK(p.coeff(Monomial({4})) == Rational(-1, 4));
    CHECK(poly_to_string(p) == "-1/4*x1^4 + 1/8*x1^8");

    RatPoly q = P("2*x1*x2^3 + x2 - 5", 2);
    CHECK(q.coeff(Monomial({1, 3})) == 2);
    CHECK(q.coeff(Monomial({0, 1})) == 1);
    CHECK(q.coeff(Monomial({0, 0})) == -5);

    CHECK_THROWS_AS(P("x3", 2), std::invalid_argument);
    CHECK_THROWS_AS(P("1 + + 2", 1), std::invalid_argument);
    CHECK_THROWS_AS(P("y1", 1), std::invalid_argument);
}

TEST_CASE("arithmetic") {
    RatPoly a = P("x1 + x2", 2), b = P("x1 - x2", 2);
    CHECK(poly_to_string(a * b) == "-x2^2 + x1^2");  // graded-lex term order
    CHECK((a - a).is_zero());
    CHECK(mul_truncated(P("x1", 1), P("x1", 1), 1).is_zero());
    RatPoly s = a.scaled(Rational(1, 2));
    CHECK(s.coeff(Monomial({1, 0})) == Rational(1, 2));
}

TEST_CASE("compose with truncation") {
    // x1^2 with x1 -> x1 + x1*x2 at cap 3: x1^2 + 2 x1^2 x2
    RatPoly outer = P("x1^2", 2);
    std::vector<RatPoly> inner{P("x1 + x1*x2", 2), P("x2", 2)};
    RatPoly c = outer.compose(inner, 3);
    CHECK(c.coeff(Monomial({2, 0})) == 1);
    CHECK(c.coeff(Monomial({2, 1})) == 2);
    CHECK(c.coeff(Monomial({2, 2})) == 0);
}

TEST_CASE("gradient, shift, evaluate") {
    RatPoly v = P("x1^4 - 2*x1^2 + 1", 1);  // (x^2-1)^2
    auto g = v.gradient();
    CHECK(g[0].evaluate<Rational>({Rational(1)}) == 0);
    CHECK(g[0].evaluate<Rational>({Rational(2)}) == 4 * 8 - 4 * 2);
    RatPoly sh = v.shifted({Rational(1)});  // expansion around x=1: 4 xi^2 + 4 xi^3 + xi^4
    CHECK(sh.coeff(Monomial({0})) == 0);
    CHECK(sh.coeff(Monomial({1})) == 0);
    CHECK(sh.coeff(Monomial({2})) == 4);
    CHECK(sh.coeff(Monomial({3})) == 4);
    CHECK(v.evaluate<double>({0.5}) == Catch::Approx(0.5625));
}

TEST_CASE("graded-lex ordering is canonical") {
    RatPoly p = P("x2^2 + x1*x2 + x1 + 1", 2);
    std::vector<Monomial> order;
    for (auto& [m, c] : p.terms()) order.push_back(m);
    REQUIRE(order.size() == 4);
    CHECK(order[0] == Monomial({0, 0}));
    CHECK(order[1] == Monomial({1, 0}));
    CHECK(order[2] == Monomial({0, 2}));
    CHECK(order[3] == Monomial({1, 1}));
}
