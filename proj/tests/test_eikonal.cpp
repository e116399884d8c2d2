#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "witten/eikonal.hpp"

using namespace witten;

namespace {

// Saddle fixture in normal-form data with an optional shear map U (unitary at 0).
CriticalPoint saddle(std::vector<int> nu, std::vector<Rational> t,
                     std::vector<RatPoly> umap = {}) {
    CriticalPoint cp;
    cp.location.assign(nu.size(), Rational(0));
    cp.orders = std::move(nu);
    cp.coeffs = std::move(t);
    cp.change_of_vars = std::move(umap);
    return cp;
}

// U(x,y) = (x, y(1+x)) from the unsolvable example.
std::vector<RatPoly> shear_map() {
    RatPoly u1 = parse_polynomial("x1", 2);
    RatPoly u2 = parse_polynomial("x2 + x1*x2", 2);
    return {u1, u2};
}

}  // namespace

TEST_CASE("polynomial plumbing over the ring") {
    auto ctx = std::make_shared<RingContext>(2, Rational(4));
    RPoly a = RPoly::variable(2, 0, RingElem(1)) + RPoly::variable(2, 1, RingElem(1));
    RPoly b = RPoly::variable(2, 0, RingElem(1)) - RPoly::variable(2, 1, RingElem(1));
    RPoly prod = mul_truncated(a, b, 2);
    CHECK(prod.coeff(Monomial({2, 0})) == RingElem(1));
    CHECK(prod.coeff(Monomial({0, 2})) == RingElem(-1));
    CHECK(mul_truncated(RPoly::variable(1, 0, RingElem(1)), RPoly::variable(1, 0, RingElem(1)), 1)
              .is_zero());
}

TEST_CASE("omega expansion") {
    // identity map: Omega = Id at every order
    {
        EikonalContext ctx(saddle({4, 4}, {Rational(-1, 4), Rational(1, 4)}), 6);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                RatPoly expect(2);
                if (i == j) expect.add_term(Monomial(2), Rational(1));
                CHECK((ctx.omega_entry(i, j) - expect).is_zero());
            }
    }
    // shear: Omega_1 = [[0, -y], [-y, -2x]]
    {
        EikonalContext ctx(saddle({4, 4}, {Rational(-1, 4), Rational(1, 4)}, shear_map()), 6);
        CHECK(ctx.omega_entry(0, 0).homogeneous_part(1).is_zero());
        CHECK(ctx.omega_entry(0, 1).coeff(Monomial({0, 1})) == Rational(-1));
        CHECK(ctx.omega_entry(1, 0).coeff(Monomial({0, 1})) == Rational(-1));
        CHECK(ctx.omega_entry(1, 1).coeff(Monomial({1, 0})) == Rational(-2));
        // defining property: Omega * (dU^T dU) = Id through the truncation order
        // (dU^T dU = Id - (Omega_1 + ...) expansion inverse); verified via E = Omega^{-1} - Id
        // by re-multiplying:
        RatPoly e00(2), e01(2), e10(2), e11(2);
        // dU = [[1,0],[y,1+x]]; dU^T dU = [[1+y^2, y(1+x)],[y(1+x), (1+x)^2]]
        RatPoly g00 = parse_polynomial("1 + x2^2", 2), g01 = parse_polynomial("x2 + x1*x2", 2);
        RatPoly g11 = parse_polynomial("1 + 2*x1 + x1^2", 2);
        auto T = [&](const RatPoly& a, const RatPoly& b) { return mul_truncated(a, b, 5); };
        RatPoly p00 = T(ctx.omega_entry(0, 0), g00) + T(ctx.omega_entry(0, 1), g01);
        RatPoly p01 = T(ctx.omega_entry(0, 0), g01) + T(ctx.omega_entry(0, 1), g11);
        RatPoly id(2);
        id.add_term(Monomial(2), Rational(1));
        CHECK((p00 - id).truncated(5).is_zero());
        CHECK(p01.truncated(5).is_zero());
    }
}

TEST_CASE("leading ell and ring reduction") {
    // nu1 = 2, t1 = -1: c^2 = 4 reduces to c = 2
    {
        EikonalContext ctx(saddle({2, 2}, {Rational(-1), Rational(1)}), 6);
        auto sol = leading_ell(ctx);
        CHECK(sol.ell.coeff(Monomial({1, 0})) == RingElem(Rational(2)));
    }
    // nu1 = 4, t1 = -1/4: c^4 = 2 stays irrational
    {
        EikonalContext ctx(saddle({4, 4}, {Rational(-1, 4), Rational(1, 4)}), 6);
        CHECK(ctx.ring()->nu == 4);
        CHECK(ctx.ring()->q == 2);
        auto sol = leading_ell(ctx);
        CHECK(sol.ell.coeff(Monomial({1, 0})) == RingElem::rho(ctx.ring()));
    }
}

TEST_CASE("identity map solves the eikonal equation exactly") {
    EikonalContext ctx(saddle({4, 2, 6}, {Rational(-2), Rational(3), Rational(1)}), 10);
    auto sol = solve_eikonal(ctx);
    CHECK_FALSE(sol.obstruction.has_value());
    CHECK(sol.solved_to == ctx.truncation());
    // ell stayed linear
    CHECK(sol.ell.degree() == 1);
    CHECK(ctx.eikonal_residual(sol.ell).is_zero());
}

TEST_CASE("d = 1 leading term is an exact solution") {
    // nonlinear 1D reparametrization u = x + x^2
    RatPoly u = parse_polynomial("x1 + x1^2", 1);
    EikonalContext ctx(saddle({4}, {Rational(-1, 4)}, {u}), 8);
    auto sol = solve_eikonal(ctx);
    CHECK_FALSE(sol.obstruction.has_value());
    CHECK(ctx.eikonal_residual(sol.ell).is_zero());
}

TEST_CASE("nu1 = 2 with a shear solves to every order") {
    // residual of degree <= 3 vanishes identically with the leading ell:
    // w_{0,0} = w_{0,1} = w_{0,2} = 0 and the degree-3 term cancels
    std::vector<RatPoly> u = shear_map();
    EikonalContext ctx(saddle({2, 4}, {Rational(-1), Rational(1, 4)}, u), 10);
    auto sol = solve_eikonal(ctx);
    CHECK_FALSE(sol.obstruction.has_value());
    CHECK(sol.solved_to == 10);
    // exactness: rerunning yields bit-identical coefficients
    auto sol2 = solve_eikonal(ctx);
    CHECK((sol.ell - sol2.ell).is_zero());
    // (eq:borneR0): every higher ell monomial is divisible by x_j^{nu_j - 1} times one
    // more variable
    for (auto& [m, c] : sol.ell.terms()) {
        if (m.degree() <= 1) continue;
        bool ok = false;
        for (int j = 0; j < 2; ++j)
            ok |= m.e[j] >= ctx.nu()[j] - 1 && m.degree() >= ctx.nu()[j];
        CHECK(ok);
    }
}

TEST_CASE("L0 is diagonal on homogeneous monomials for nu1 = 2") {
    EikonalContext ctx(saddle({2, 2, 4}, {Rational(-1), Rational(2), Rational(1)}), 8);
    for (int deg = 1; deg <= 8; ++deg) {
        for (auto& m : detail_eik::homogeneous_basis(3, deg)) {
            RPoly u(3);
            u.add_term(m, RingElem(1));
            RPoly img = detail_eik::apply_l0(ctx, u);
            // image is a multiple of the same monomial
            for (auto& [mm, cc] : img.terms()) CHECK(mm == m);
        }
    }
}

TEST_CASE("case with quadratic directions keeps Q_X = 0") {
    // nu = (4, 2, 2): solvable orders choose no monomial purely in the degenerate variable
    std::vector<RatPoly> u;
    u.push_back(parse_polynomial("x1 + x2*x3", 3));
    u.push_back(parse_polynomial("x2 - x1*x3", 3));
    u.push_back(parse_polynomial("x3 + 1/2*x1^2", 3));
    // make dU unitary at 0: all shears are quadratic or mixed, differential is Id
    EikonalContext ctx(saddle({4, 2, 2}, {Rational(-1), Rational(1), Rational(2)}, u), 8);
    auto sol = solve_eikonal(ctx);
    for (auto& [m, c] : sol.ell.terms()) {
        if (m.degree() <= 1) continue;
        CHECK(m.e[1] + m.e[2] > 0);  // never purely in the non-quadratic variable x1
    }
}

TEST_CASE("the unsolvable shear records an obstruction at degree 2") {
    EikonalContext ctx(saddle({4, 4}, {Rational(-1, 4), Rational(1, 4)}, shear_map()), 8);
    auto sol = solve_eikonal(ctx);
    REQUIRE(sol.obstruction.has_value());
    CHECK(sol.obstruction->ell_degree == 2);
    CHECK(sol.obstruction->residual_degree == 4);
    // the residual contains the -2^{5/4} y^4 term: coefficient is -2c with c^4 = 2
    RingElem expect = RingElem(Rational(-2)) * RingElem::rho(ctx.ring());
    CHECK(sol.obstruction->residual.coeff(Monomial({0, 4})) == expect);
    // soundness: the dense exact solve confirms rank deficiency
    auto dense = detail_eik::solve_l0_dense(ctx, 2, sol.obstruction->residual);
    CHECK_FALSE(dense.consistent);
}

TEST_CASE("elliptization certificate") {
    std::vector<RatPoly> u = shear_map();
    EikonalContext ctx(saddle({2, 4}, {Rational(-3), Rational(1, 2)}, u), 10);
    auto sol = solve_eikonal(ctx);
    auto rep = residual_report(ctx, sol);
    CHECK(rep.lowest_residual_degree == -1);
    CHECK(rep.diagonal_exact);
    CHECK(rep.cross_terms_bounded);
}

TEST_CASE("transport hierarchy under nu1 = 2") {
    std::vector<RatPoly> u = shear_map();
    EikonalContext ctx(saddle({2, 2}, {Rational(-1), Rational(1)}, u), 8);
    auto sol = solve_eikonal(ctx);
    solve_transports(ctx, sol, 2);
    REQUIRE(sol.ell_h.size() == 3);
    // each transport order leaves no residual below the truncation window
    for (int jh = 1; jh <= 2; ++jh) {
        RPoly w = transport_residual(ctx, sol, jh);
        CHECK((w.is_zero() || w.lowest_degree() > ctx.truncation() - 2));
    }
    CHECK_FALSE(sol.ell_h[1].is_zero());  // the Laplacian pullback genuinely feeds order 1
    EikonalContext ctx4(saddle({4, 4}, {Rational(-1), Rational(1)}, u), 6);
    auto sol4 = solve_eikonal(ctx4);
    CHECK_THROWS_AS(solve_transports(ctx4, sol4, 1), SpecError);
}

TEST_CASE("random nu1 = 2 shears in 2D solve to degree 8 (exact residual check)") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> coef(-2, 2), nu2_pick(1, 3);
    for (int trial = 0; trial < 8; ++trial) {
        int nu2 = 2 * nu2_pick(rng);
        Rational t1(-(1 + trial % 3), 2), t2(1 + trial % 4, 3);
        RatPoly u1 = parse_polynomial("x1", 2), u2 = parse_polynomial("x2", 2);
        Monomial m11({2, 0}), m12({1, 1}), m02({0, 2});
        u1.add_term(m12, Rational(coef(rng)));
        u2.add_term(m11, Rational(coef(rng)));
        u2.add_term(m02, Rational(coef(rng)));
        EikonalContext ctx(saddle({2, nu2}, {t1, t2}, {u1, u2}), 8);
        auto sol = solve_eikonal(ctx);
        CHECK_FALSE(sol.obstruction.has_value());
        CHECK(sol.solved_to == 8);
        RPoly res = ctx.eikonal_residual(sol.ell);
        CHECK((res.is_zero() || res.lowest_degree() > 8));
    }
}

TEST_CASE("dump format is canonical") {
    EikonalContext ctx(saddle({4, 4}, {Rational(-1, 4), Rational(1, 4)}), 6);
    auto sol = leading_ell(ctx);
    CHECK(dump_polynomial(sol.ell) == "1*c 1 0\n");
}
