#pragma once

// Shared exact test potentials. Everything here is constructed with rational
// arithmetic so declared critical data matches the polynomials identically.

#include <string>

#include "witten/potential.hpp"

namespace witten::fixtures {

inline RatPoly var1() { return RatPoly::variable(1, 0, Rational(1)); }

inline RatPoly lin1(const Rational& root) {  // (x - root)
    RatPoly p = var1();
    p.add_term(Monomial({0}), -root);
    return p;
}

inline RatPoly quad1(const Rational& b, const Rational& c) {  // x^2 + b x + c
    RatPoly p = var1() * var1();
    p = p + var1().scaled(b);
    p.add_term(Monomial({0}), c);
    return p;
}

// Asymmetric degenerate double well used throughout: quartic saddle at 0,
// Morse wells at -3/2 (deep) and +1 (tracked).
//   V' = (41/40) x^3 (x+3/2)(x-1)(x^2 - 19/10 x + 13/10)(x^2 + 2730/4003 x + 1521/4003)
inline PotentialSpec dwell_spec() {
    RatPoly x = var1();
    RatPoly vp = x * x * x;
    vp = vp * lin1(Rational(-3, 2));
    vp = vp * lin1(Rational(1));
    vp = vp * quad1(Rational(-19, 10), Rational(13, 10));
    vp = vp * quad1(Rational(2730, 4003), Rational(1521, 4003));
    vp = vp.scaled(Rational(41, 40));
    PotentialSpec s;
    s.dim = 1;
    s.V = vp.antiderivative(0);
    s.box = {{Rational(-27, 10), Rational(11, 5)}};
    RatPoly vpp = vp.derivative(0);
    auto cp_at = [&](const Rational& loc, int nu) {
        CriticalPoint cp;
        cp.location = {loc};
        cp.value = s.V.evaluate<Rational>({loc});
        cp.orders = {nu};
        if (nu == 2) {
            cp.coeffs = {vpp.evaluate<Rational>({loc}) / 2};
        } else {
            // quartic saddle: t = V''''(0)/24, and the x^5, x^6 jets vanish by construction
            RatPoly v4 = vpp.derivative(0).derivative(0);
            cp.coeffs = {v4.evaluate<Rational>({loc}) / 24};
        }
        return cp;
    };
    s.critical_points.push_back(cp_at(Rational(-3, 2), 2));
    s.critical_points.push_back(cp_at(Rational(0), 4));
    s.critical_points.push_back(cp_at(Rational(1), 2));
    check_spec(s);
    return s;
}

// d = 3 triple well with equal well values and equal saddle values (Gener fails):
// backbone F on x1 with minima at -2, 0, 2 and saddles at -1 (quartic-flat, the
// deep barrier) and +1 (Morse), tensored with y/z confinement
//   V = F(x1) + x2^4 + x3^4 + 1/2 (x1+1)^4 (x2^2 + x3^2).
// F' = (x+2)(x+1)^3 x (x-1)(x-2) G(x)/24 with G > 0 the degree-8 factor that makes
// F(-2) = F(0) = F(2) and F(-1) = F(1) exact.
inline PotentialSpec triple3d_spec() {
    const char* gcoeffs[9] = {
        "2145063754222/39955196281", "-4809807294328/39955196281", "6158671953295/79910392562",
        "1824/83",                   "-1121/23",                    "19",
        "171/58",                    "-456/103",                    "1"};
    RatPoly G(1);
    for (int k = 0; k <= 8; ++k) {
        Monomial m({k});
        G.add_term(m, parse_rational(gcoeffs[k]));
    }
    RatPoly x = var1();
    RatPoly base = lin1(Rational(-2)) * lin1(Rational(-1)) * lin1(Rational(-1)) * lin1(Rational(-1)) *
                   x * lin1(Rational(1)) * lin1(Rational(2));
    RatPoly fp = (base * G).scaled(Rational(1, 24));
    RatPoly F1 = fp.antiderivative(0);

    // lift to 3 variables
    auto lift = [](const RatPoly& p) {
        RatPoly out(3);
        for (auto& [m, c] : p.terms()) out.add_term(Monomial({m.e[0], 0, 0}), c);
        return out;
    };
    RatPoly V = lift(F1);
    RatPoly y = RatPoly::variable(3, 1, Rational(1)), z = RatPoly::variable(3, 2, Rational(1));
    V = V + y * y * y * y + z * z * z * z;
    RatPoly xp1(3);
    xp1.add_term(Monomial({1, 0, 0}), Rational(1));
    xp1.add_term(Monomial({0, 0, 0}), Rational(1));
    RatPoly shear = (xp1 * xp1 * xp1 * xp1 * (y * y + z * z)).scaled(Rational(1, 2));
    V = V + shear;

    PotentialSpec s;
    s.dim = 3;
    s.V = V;
    s.box = {{Rational(-3), Rational(3)}, {Rational(-3, 2), Rational(3, 2)}, {Rational(-3, 2), Rational(3, 2)}};

    RatPoly fpp = fp.derivative(0);
    RatPoly f4 = fpp.derivative(0).derivative(0);
    auto eta_at = [&](const Rational& loc) {  // H(x) = (x+1)^4 / 2 coefficient on y^2+z^2
        return rat_pow(loc + 1, 4) / 2;
    };
    auto add_cp = [&](const Rational& loc, std::vector<int> nu, std::vector<Rational> t) {
        CriticalPoint cp;
        cp.location = {loc, Rational(0), Rational(0)};
        cp.value = F1.evaluate<Rational>({loc});
        cp.orders = std::move(nu);
        cp.coeffs = std::move(t);
        s.critical_points.push_back(std::move(cp));
    };
    for (Rational loc : {Rational(-2), Rational(0), Rational(2)})
        add_cp(loc, {2, 2, 2}, {fpp.evaluate<Rational>({loc}) / 2, eta_at(loc), eta_at(loc)});
    add_cp(Rational(-1), {4, 4, 4}, {f4.evaluate<Rational>({Rational(-1)}) / 24, Rational(1), Rational(1)});
    add_cp(Rational(1), {2, 2, 2},
           {fpp.evaluate<Rational>({Rational(1)}) / 2, eta_at(Rational(1)), eta_at(Rational(1))});
    check_spec(s);
    return s;
}

inline Rational spec_loc(const PotentialSpec& s, int idx) { return s.critical_points[idx].location[0]; }

}  // namespace witten::fixtures
