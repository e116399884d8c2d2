#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "witten/polynomial.hpp"
#include "witten/qring.hpp"

using namespace witten;

TEST_CASE("radicand reduction") {
    // c^2 = 4 collapses to the rational 2
    auto ctx = std::make_shared<RingContext>(2, Rational(4));
    CHECK(ctx->nu == 1);
    CHECK(ctx->q == 2);
    CHECK(RingElem::rho(ctx).is_rational());
    CHECK(RingElem::rho(ctx).rational_part() == 2);

    // c^4 = 2 stays quartic
    auto ctx2 = std::make_shared<RingContext>(4, Rational(2));
    CHECK(ctx2->nu == 4);
    CHECK(ctx2->q == 2);

    // c^4 = 4 = 2^2 reduces to c^2 = 2
    auto ctx3 = std::make_shared<RingContext>(4, Rational(4));
    CHECK(ctx3->nu == 2);
    CHECK(ctx3->q == 2);

    // c^6 = 64 reduces fully: 64 = 2^6
    auto ctx4 = std::make_shared<RingContext>(6, Rational(64));
    CHECK(ctx4->nu == 1);
    CHECK(ctx4->q == 2);
}

TEST_CASE("ring arithmetic is exact") {
    auto ctx = std::make_shared<RingContext>(4, Rational(2));  // rho = 2^(1/4)
    RingElem r = RingElem::rho(ctx);
    RingElem r2 = r * r, r4 = r2 * r2;
    CHECK(r4.is_rational());
    CHECK(r4.rational_part() == 2);
    CHECK((r2 * r2 - RingElem(Rational(2))).is_zero());
    CHECK(std::abs(r.to_double() - std::pow(2.0, 0.25)) < 1e-15);

    RingElem a = r + RingElem(Rational(1, 3));
    RingElem inv = a.inverse();
    CHECK((a * inv - RingElem(1)).is_zero());
    CHECK((a / a - RingElem(1)).is_zero());
    CHECK_THROWS_AS(RingElem().inverse(), std::domain_error);
}

TEST_CASE("polynomials over the ring") {
    auto ctx = std::make_shared<RingContext>(4, Rational(2));
    RingElem c = RingElem::rho(ctx);
    using RPoly = Polynomial<RingElem>;
    RPoly ell = RPoly::variable(2, 0, c);  // c * x1
    RPoly p = mul_truncated(ell, ell, 8);
    CHECK(p.coeff(Monomial({2, 0})) == c * c);
    RPoly q = mul_truncated(p, p, 8);  // c^4 x1^4 = 2 x1^4
    CHECK(q.coeff(Monomial({4, 0})) == RingElem(Rational(2)));
    CHECK(q.coeff(Monomial({4, 0})).is_rational());
}

TEST_CASE("rendering") {
    auto ctx = std::make_shared<RingContext>(4, Rational(2));
    RingElem e = RingElem(Rational(3, 4)) + RingElem::rho(ctx).inverse().operator-();
    // -rho^{-1} = -rho^3/2
    CHECK(e.str() == "3/4-1/2*c^3");
    CHECK(RingElem().str() == "0");
}
