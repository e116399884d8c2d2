#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "witten/polynomial.hpp"
#include "witten/potential.hpp"

namespace witten {

// Laplace-method problem: integral of a(x) exp(-(phi - phi(x0))/h) with the phase
// in even-order normal form t_i > 0, nu_i even at its unique interior minimum.
struct LaplaceProblem {
    int d = 0;
    RatPoly phase;                    // phi
    std::vector<Rational> minimizer;  // x0
    std::vector<int> orders;          // nu_i, even >= 2
    std::vector<Rational> coeffs;     // t_i > 0
    double det_d0U = 1.0;             // |det d_0 U|
    RatPoly amplitude;                // a (a_0 of the h-expansion)
    std::vector<int> vanishing;       // optional: a = O((x-x0)^{2 alpha}) declared as 2*alpha
    std::vector<std::pair<Rational, Rational>> box;
    double h = 0.1;

    void validate() const {
        if (d < 1) throw std::invalid_argument("dimension");
        for (int nu : orders)
            if (nu < 2 || nu % 2) throw std::invalid_argument("orders must be even >= 2");
        for (auto& t : coeffs)
            if (t <= 0) throw std::invalid_argument("phase coefficients must be positive");
        for (int i = 0; i < d; ++i)
            if (!(box[i].first < minimizer[i] && minimizer[i] < box[i].second))
                throw std::invalid_argument("minimizer must be interior to the box");
    }
};

// Leading term: a0(x0) |det d0U| h^{sum 1/nu_i} prod 2 Gamma(1/nu_i) / (nu_i t_i^{1/nu_i}).
inline double laplace_leading(const LaplaceProblem& p) {
    p.validate();
    double a0 = p.amplitude.evaluate<double>([&] {
        std::vector<double> x(p.d);
        for (int i = 0; i < p.d; ++i) x[i] = to_double(p.minimizer[i]);
        return x;
    }());
    double hexp = 0, prod = 1;
    for (int i = 0; i < p.d; ++i) {
        double nu = p.orders[i], t = to_double(p.coeffs[i]);
        hexp += 1.0 / nu;
        prod *= 2.0 * std::tgamma(1.0 / nu) / (nu * std::pow(t, 1.0 / nu));
    }
    return a0 * p.det_d0U * std::pow(p.h, hexp) * prod;
}

// Declared-vanishing bound exponent: sum (2 alpha_i + 1)/nu_i.
inline double laplace_vanishing_exponent(const LaplaceProblem& p) {
    if (p.vanishing.empty()) throw std::invalid_argument("no declared vanishing order");
    double e = 0;
    for (int i = 0; i < p.d; ++i) {
        int two_alpha = p.vanishing[i];
        // odd declared orders round up to the next even one (parity of the Gaussian moments)
        int rounded = two_alpha % 2 == 0 ? two_alpha : two_alpha + 1;
        e += (rounded + 1.0) / p.orders[i];
    }
    return e;
}

// Relative correction exponent of the leading term: min_i 2/nu_i.
inline double laplace_correction_exponent(const LaplaceProblem& p) {
    double e = 2.0;
    for (int nu : p.orders) e = std::min(e, 2.0 / nu);
    return e;
}

// --- adaptive Gauss-Kronrod quadrature, tensorized over axes ----------------------

namespace quad {

// 7-point Gauss, 15-point Kronrod nodes/weights on [-1, 1].
inline const double kKronrodNodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
inline const double kKronrodWeights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
inline const double kGaussWeights[7] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                                        0.417959183673469, 0.381830050505119, 0.279705391489277,
                                        0.129484966168870};

struct Budget {
    long remaining;
};

// Adaptive 1D integration; throws when the node budget runs out before reaching tol.
inline double gk_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          Budget& budget, int depth = 0) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double kron = 0, gauss = 0;
    budget.remaining -= 15;
    if (budget.remaining < 0) throw SpecError(ErrorClass::Convergence, 0, "quadrature node budget exceeded");
    for (int i = 0; i < 15; ++i) {
        double v = f(mid + half * kKronrodNodes[i]);
        kron += kKronrodWeights[i] * v;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * v;
    }
    kron *= half;
    gauss *= half;
    double err = std::abs(kron - gauss);
    if (err <= tol || depth > 48) return kron;
    double left = gk_adaptive(f, a, mid, tol / 2, budget, depth + 1);
    double right = gk_adaptive(f, mid, b, tol / 2, budget, depth + 1);
    return left + right;
}

}  // namespace quad

struct QuadratureResult {
    double value = 0;
    double tail_bound = 0;  // exp(-delta/h) with delta the boundary phase gap
    long nodes_used = 0;
};

// Tensor quadrature of the full integrand over the box to a relative tolerance.
inline QuadratureResult laplace_quadrature(const LaplaceProblem& p, double rel_tol,
                                           long node_budget = 1000000) {
    p.validate();
    if (p.d > 3) throw SpecError(ErrorClass::Dimension, 0, "quadrature limited to d <= 3");
    double phi0;
    {
        std::vector<double> x0(p.d);
        for (int i = 0; i < p.d; ++i) x0[i] = to_double(p.minimizer[i]);
        phi0 = p.phase.evaluate<double>(x0);
    }
    double scale = std::abs(laplace_leading(p));
    if (scale == 0) scale = 1;
    quad::Budget budget{node_budget};
    std::vector<double> x(p.d);
    // recursive tensorization: integrate axis 0 of a function of the remaining axes
    std::function<double(int, double)> level = [&](int axis, double tol) -> double {
        double a = to_double(p.box[axis].first), b = to_double(p.box[axis].second);
        if (axis == p.d - 1) {
            auto f = [&](double v) {
                x[axis] = v;
                return p.amplitude.evaluate<double>(x) *
                       std::exp(-(p.phase.evaluate<double>(x) - phi0) / p.h);
            };
            return quad::gk_adaptive(f, a, b, tol, budget);
        }
        auto f = [&](double v) {
            x[axis] = v;
            return level(axis + 1, tol / (b - a));
        };
        return quad::gk_adaptive(f, a, b, tol, budget);
    };
    QuadratureResult out;
    out.value = level(0, rel_tol * scale);
    out.nodes_used = node_budget - budget.remaining;

    // boundary phase gap: minimum of phi - phi0 over sampled boundary facets
    double delta = std::numeric_limits<double>::infinity();
    const int nb = 64;
    std::vector<int> idx(p.d, 0);
    for (int facet_axis = 0; facet_axis < p.d; ++facet_axis)
        for (int side = 0; side < 2; ++side) {
            std::fill(idx.begin(), idx.end(), 0);
            while (true) {
                for (int i = 0; i < p.d; ++i) {
                    double lo = to_double(p.box[i].first), hi = to_double(p.box[i].second);
                    x[i] = i == facet_axis ? (side ? hi : lo) : lo + (hi - lo) * idx[i] / (nb - 1);
                }
                delta = std::min(delta, p.phase.evaluate<double>(x) - phi0);
                int ax = 0;
                while (ax < p.d && (ax == facet_axis || ++idx[ax] == nb)) {
                    if (ax != facet_axis) idx[ax] = 0;
                    ++ax;
                }
                if (ax == p.d) break;
            }
        }
    out.tail_bound = std::exp(-std::max(delta, 0.0) / p.h);
    return out;
}

// --- problem file format -----------------------------------------------------------
// dim <d> / box <lo> <hi> (d lines) / phase = <poly> / min at <coords> /
// nu <nu_1..nu_d> / t <t_1..t_d> / [detU <val>] / a = <poly> / [vanish <2a_1..2a_d>] / h <val>

inline LaplaceProblem parse_laplace(std::string_view text) {
    LaplaceProblem p;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    p.amplitude = RatPoly(0);
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        try {
            if (tok == "dim") {
                ls >> p.d;
                p.amplitude = RatPoly::constant(p.d, Rational(1));
            } else if (tok == "box") {
                std::string lo, hi;
                ls >> lo >> hi;
                p.box.emplace_back(parse_rational(lo), parse_rational(hi));
            } else if (tok == "phase") {
                std::string eq, rest;
                ls >> eq;
                std::getline(ls, rest);
                p.phase = parse_polynomial(rest, p.d);
            } else if (tok == "min") {
                std::string at, w;
                ls >> at;
                for (int i = 0; i < p.d; ++i) {
                    ls >> w;
                    p.minimizer.push_back(parse_rational(w));
                }
            } else if (tok == "nu") {
                int nu;
                while (ls >> nu) p.orders.push_back(nu);
            } else if (tok == "t") {
                std::string w;
                while (ls >> w) p.coeffs.push_back(parse_rational(w));
            } else if (tok == "detU") {
                ls >> p.det_d0U;
            } else if (tok == "a") {
                std::string eq, rest;
                ls >> eq;
                std::getline(ls, rest);
                p.amplitude = parse_polynomial(rest, p.d);
            } else if (tok == "vanish") {
                int v;
                while (ls >> v) p.vanishing.push_back(v);
            } else if (tok == "h") {
                ls >> p.h;
            } else {
                throw SpecError(ErrorClass::Parse, lineno, "unknown directive '" + tok + "'");
            }
        } catch (const std::invalid_argument& e) {
            throw SpecError(ErrorClass::Parse, lineno, e.what());
        }
    }
    p.validate();
    return p;
}

}  // namespace witten
