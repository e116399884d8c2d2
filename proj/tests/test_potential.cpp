#include <catch2/catch_amalgamated.hpp>

#include "witten/potential.hpp"

using namespace witten;

namespace {
const char* kOct =
    "dim 1\n"
    "box -2 2\n"
    "V = 1/8*x1^8 - 1/4*x1^4\n"
    "cp at 0 value 0 nu 4 t -1/4\n";
}

TEST_CASE("parse a valid spec") {
    PotentialSpec s = parse_spec(kOct);
    CHECK(s.dim == 1);
    REQUIRE(s.critical_points.size() == 1);
    const auto& cp = s.critical_points[0];
    CHECK(cp.parity() == Parity::Even);
    CHECK(cp.index() == 1);
    CHECK(cp.is_saddle());
    CHECK(cp.identity_map());
}

TEST_CASE("invariant violations are reported") {
    // gradient nonzero at declared point
    CHECK_THROWS_MATCHES(parse_spec("dim 1\nbox -2 2\nV = x1^2\ncp at 1 value 1 nu 2 t 1\n"),
                         SpecError, Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring(
                                        "gradient nonzero")));
    // order below 2
    CHECK_THROWS_MATCHES(parse_spec("dim 1\nbox -2 2\nV = x1^2\ncp at 0 value 0 nu 1 t 1\n"),
                         SpecError,
                         Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("order below 2")));
    // declared value wrong
    CHECK_THROWS_MATCHES(parse_spec("dim 1\nbox -2 2\nV = x1^2\ncp at 0 value 1 nu 2 t 1\n"),
                         SpecError,
                         Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("value")));
    // normal-form coefficient mismatch
    CHECK_THROWS_MATCHES(parse_spec("dim 1\nbox -2 2\nV = x1^2\ncp at 0 value 0 nu 2 t 2\n"),
                         SpecError, Catch::Matchers::MessageMatches(
                                        Catch::Matchers::ContainsSubstring("normal form")));
    // syntax error carries the line number
    try {
        parse_spec("dim 1\nbox -2 2\nV = x1^2\ncp at 0 value\n");
        FAIL("expected throw");
    } catch (const SpecError& e) {
        CHECK(e.cls == ErrorClass::Parse);
        CHECK(e.line == 4);
    }
}

TEST_CASE("unitary differential is enforced") {
    // U = (2 x1) fixes 0 but is not unitary
    CHECK_THROWS_MATCHES(
        parse_spec("dim 1\nbox -2 2\nV = x1^2\ncp at 0 value 0 nu 2 t 1 U = 2*x1\n"), SpecError,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("unitary")));
    // rotation by a rational orthogonal matrix (3/5, 4/5) passes
    PotentialSpec s = parse_spec(
        "dim 2\n"
        "box -2 2\nbox -2 2\n"
        "V = x1^2 + x2^2\n"
        "cp at 0 0 value 0 nu 2 2 t 1 1 U = 3/5*x1 - 4/5*x2, 4/5*x1 + 3/5*x2\n");
    CHECK(s.critical_points[0].linear_map());
}

TEST_CASE("nu statistics") {
    auto mk = [](std::vector<int> nu, std::vector<Rational> t) {
        CriticalPoint cp;
        cp.location.assign(nu.size(), Rational(0));
        cp.orders = std::move(nu);
        cp.coeffs = std::move(t);
        return cp;
    };
    // homogeneous Morse point: nu_hat = inf
    auto st = nu_stats({mk({2, 2}, {Rational(1), Rational(1)})});
    CHECK(st.nu_bar == 2);
    CHECK(st.nu_under == 2);
    CHECK(st.nu_under_star == ExtInt(2));
    CHECK(st.nu_hat.infinite);

    st = nu_stats({mk({4, 2, 8}, {Rational(-1), Rational(1), Rational(1)})});
    CHECK(st.nu_bar == 8);
    CHECK(st.nu_under == 2);
    CHECK(st.nu_under_star == ExtInt(2));
    CHECK(st.nu_hat == ExtInt(4));

    st = nu_stats({mk({4, 4}, {Rational(1), Rational(1)}), mk({2, 6}, {Rational(1), Rational(1)})});
    CHECK(st.nu_bar == 6);
    CHECK(st.nu_under == 4);

    CHECK_THROWS_AS(nu_stats(std::vector<CriticalPoint>{}), std::invalid_argument);
}

TEST_CASE("nu_stats is monotone under set enlargement") {
    auto mk = [](std::vector<int> nu, std::vector<Rational> t) {
        CriticalPoint cp;
        cp.location.assign(nu.size(), Rational(0));
        cp.orders = std::move(nu);
        cp.coeffs = std::move(t);
        return cp;
    };
    std::vector<CriticalPoint> pool = {
        mk({2, 2}, {Rational(1), Rational(1)}),
        mk({4, 2}, {Rational(-1), Rational(1)}),
        mk({6, 4}, {Rational(1), Rational(-2)}),
        mk({2, 8}, {Rational(3), Rational(1)}),
    };
    for (size_t n = 1; n < pool.size(); ++n) {
        auto small = nu_stats(pool.begin(), pool.begin() + n);
        auto big = nu_stats(pool.begin(), pool.begin() + n + 1);
        CHECK(small.nu_bar <= big.nu_bar);
        CHECK(small.nu_under <= big.nu_under);
        CHECK(!(big.nu_under_star < small.nu_under_star));
        CHECK(!(big.nu_hat < small.nu_hat));
    }
}

TEST_CASE("confinement report on the parabola") {
    // V = x^2 on [-5,5] with margin 2: min |V'| on |x| in [2, 6] is 4, |V''|/|V'|^2 = 2/16
    PotentialSpec s = parse_spec("dim 1\nbox -5 5\nV = x1^2\ncp at 0 value 0 nu 2 t 1\n");
    auto rep = check_confinement(s, Rational(2));
    CHECK(rep.min_grad == Catch::Approx(4.0).margin(0.02));
    CHECK(rep.C == Catch::Approx(0.25).margin(0.002));
    CHECK(rep.C0 == Catch::Approx(8.0).margin(0.2));
    CHECK(rep.C0 == Catch::Approx(1.0 / (2 * rep.C * rep.C)));

    // undeclared critical points on the shell are caught exactly
    PotentialSpec bad =
        parse_spec("dim 1\nbox -2 2\nV = 1/4*x1^4 - 1/2*x1^2\ncp at 0 value 0 nu 2 t -1/2\n");
    CHECK_THROWS_MATCHES(check_confinement(bad, Rational(1, 2)), SpecError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("gradient vanishes")));
}

TEST_CASE("confinement is dimension-symmetric for the radial parabola") {
    PotentialSpec s2 = parse_spec(
        "dim 2\nbox -5 5\nbox -5 5\nV = x1^2 + x2^2\ncp at 0 0 value 0 nu 2 2 t 1 1\n");
    auto rep = check_confinement(s2, Rational(2));
    // inner shell radius 2 -> min |grad| = 4 as in 1D
    CHECK(rep.min_grad == Catch::Approx(4.0).margin(0.2));
}

TEST_CASE("local sublevel component counts (saddle splitting)") {
    // Morse saddle of x^2 - y^2: two components below the critical value
    PotentialSpec s = parse_spec(
        "dim 2\nbox -2 2\nbox -2 2\nV = x1^2 - x2^2\ncp at 0 0 value 0 nu 2 2 t 1 -1\n");
    CHECK(local_component_count(s, s.critical_points[0], 0.5, 64) == 2);

    // minimum: nothing below
    PotentialSpec m = parse_spec(
        "dim 2\nbox -2 2\nbox -2 2\nV = x1^2 + x2^2\ncp at 0 0 value 0 nu 2 2 t 1 1\n");
    CHECK(local_component_count(m, m.critical_points[0], 0.5, 64) == 0);

    // degenerate index-1 point of -x^4 + y^4: still two components
    PotentialSpec dg = parse_spec(
        "dim 2\nbox -2 2\nbox -2 2\nV = 0 - x1^4 + x2^4\ncp at 0 0 value 0 nu 4 4 t -1 1\n");
    CHECK(local_component_count(dg, dg.critical_points[0], 0.5, 128) == 2);
}
