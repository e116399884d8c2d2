#include <catch2/catch_amalgamated.hpp>

#include "witten/rational.hpp"

using namespace witten;

TEST_CASE("rational parsing") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-7") == Rational(-7));
    CHECK(parse_rational("-2/6") == Rational(-1, 3));
    CHECK_THROWS_AS(parse_rational("a/b"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("rational powers and roots") {
    CHECK(rat_pow(Rational(2, 3), 3) == Rational(8, 27));
    CHECK(rat_pow(Rational(2), -2) == Rational(1, 4));
    CHECK(exact_root(Rational(8, 27), 3) == Rational(2, 3));
    CHECK(exact_root(Rational(4), 2) == Rational(2));
    CHECK_FALSE(exact_root(Rational(2), 2).has_value());
    CHECK_FALSE(exact_root(Rational(8, 26), 3).has_value());
}

TEST_CASE("extended rational min conventions") {
    ExtRational a(Rational(1, 2)), inf = ExtRational::inf();
    CHECK(min(a, inf) == a);
    CHECK(max(a, inf) == inf);
    CHECK(inf == ExtRational::inf());
    CHECK(a < inf);
    CHECK((a + inf).infinite);
    CHECK(ExtRational(Rational(1, 3)).str() == "1/3");
    CHECK(inf.str() == "inf");
}

TEST_CASE("extended integers") {
    ExtInt a(4), inf = ExtInt::inf();
    CHECK(min(inf, a) == a);
    CHECK(max(inf, a) == inf);
    CHECK(min(ExtInt::inf(), ExtInt::inf()).infinite);
}
