#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "witten/polynomial.hpp"
#include "witten/rational.hpp"

namespace witten {

enum class ErrorClass { Parse, Invariant, Dimension, Convergence, Assumption, Io };

struct SpecError : std::runtime_error {
    ErrorClass cls;
    int line;
    SpecError(ErrorClass c, int ln, const std::string& msg)
        : std::runtime_error(ln > 0 ? "line " + std::to_string(ln) + ": " + msg : msg), cls(c), line(ln) {}
};

enum class Parity { Even, Odd };

struct CriticalPoint {
    std::vector<Rational> location;
    Rational value;
    std::vector<int> orders;       // nu_i >= 2
    std::vector<Rational> coeffs;  // t_i != 0
    std::vector<RatPoly> change_of_vars;  // U, one expression per output coordinate; empty = identity

    int dim() const { return static_cast<int>(location.size()); }
    Parity parity() const {
        for (int nu : orders)
            if (nu % 2 != 0) return Parity::Odd;
        return Parity::Even;
    }
    // Count of negative t_i; meaningful for even points only.
    int index() const {
        int k = 0;
        for (auto& t : coeffs) k += (t < 0);
        return k;
    }
    bool is_minimum() const { return parity() == Parity::Even && index() == 0; }
    bool is_saddle() const { return parity() == Parity::Even && index() == 1; }
    int max_order() const { return *std::max_element(orders.begin(), orders.end()); }
    int min_order() const { return *std::min_element(orders.begin(), orders.end()); }

    bool identity_map() const { return change_of_vars.empty(); }
    bool linear_map() const {
        if (identity_map()) return true;
        for (auto& u : change_of_vars)
            if (u.degree() > 1) return false;
        return true;
    }
};

struct PotentialSpec {
    int dim = 0;
    RatPoly V;
    std::vector<std::pair<Rational, Rational>> box;
    std::vector<CriticalPoint> critical_points;

    std::vector<int> minima() const {
        std::vector<int> out;
        for (size_t i = 0; i < critical_points.size(); ++i)
            if (critical_points[i].is_minimum()) out.push_back(static_cast<int>(i));
        return out;
    }
    std::vector<int> saddles() const {
        std::vector<int> out;
        for (size_t i = 0; i < critical_points.size(); ++i)
            if (critical_points[i].is_saddle()) out.push_back(static_cast<int>(i));
        return out;
    }
};

// --- invariant checks ---------------------------------------------------------

// Jacobian of the map U at a point, exact.
inline std::vector<std::vector<Rational>> jacobian_at(const std::vector<RatPoly>& U,
                                                      const std::vector<Rational>& x) {
    int d = static_cast<int>(U.size());
    std::vector<std::vector<Rational>> J(d, std::vector<Rational>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) J[i][j] = U[i].derivative(j).template evaluate<Rational>(x);
    return J;
}

inline void check_critical_point(const RatPoly& V, const CriticalPoint& cp, int idx) {
    int d = cp.dim();
    auto fail = [&](const std::string& msg) {
        throw SpecError(ErrorClass::Invariant, 0,
                        "critical point #" + std::to_string(idx) + ": " + msg);
    };
    if (static_cast<int>(cp.orders.size()) != d || static_cast<int>(cp.coeffs.size()) != d)
        fail("nu/t arity does not match dimension");
    for (int nu : cp.orders)
        if (nu < 2) fail("order below 2");
    for (auto& t : cp.coeffs)
        if (t == 0) fail("coefficient t_i is zero");

    for (int i = 0; i < d; ++i)
        if (V.derivative(i).evaluate<Rational>(cp.location) != 0)
            fail("gradient nonzero at declared critical point");
    if (V.evaluate<Rational>(cp.location) != cp.value) fail("declared value differs from V at location");

    if (!cp.identity_map()) {
        if (static_cast<int>(cp.change_of_vars.size()) != d) fail("U arity does not match dimension");
        // U(x*) = x*
        for (int i = 0; i < d; ++i)
            if (cp.change_of_vars[i].evaluate<Rational>(cp.location) != cp.location[i])
                fail("U does not fix the critical point");
        // d_{x*}U unitary: J^T J = Id exactly
        auto J = jacobian_at(cp.change_of_vars, cp.location);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                Rational dot = 0;
                for (int k = 0; k < d; ++k) dot += J[k][i] * J[k][j];
                if (dot != Rational(i == j ? 1 : 0)) fail("d_{x*}U is not unitary");
            }
    }

    // Normal form jet: coefficients of (V o U)(x* + xi) - value - sum t_i xi^nu_i
    // vanish through total degree max(nu_i).
    int cap = cp.max_order();
    RatPoly residual(d);
    {
        std::vector<RatPoly> inner;  // xi -> U(x* + xi) - x*, then V shifted to x*
        RatPoly Vs = V.shifted(cp.location);
        if (cp.identity_map()) {
            residual = Vs.truncated(cap);
        } else {
            for (int i = 0; i < d; ++i) {
                RatPoly ui = cp.change_of_vars[i].shifted(cp.location);
                ui.add_term(Monomial(d), -cp.location[i]);
                inner.push_back(ui.truncated(cap));
            }
            residual = Vs.compose(inner, cap);
        }
        residual.add_term(Monomial(d), -cp.value);
        RatPoly expect(d);
        for (int i = 0; i < d; ++i) {
            Monomial m(d);
            m.e[i] = cp.orders[i];
            expect.add_term(m, cp.coeffs[i]);
        }
        residual = residual - expect;
    }
    for (auto& [m, c] : residual.terms())
        if (m.degree() <= cap && c != 0)
            fail("normal form mismatch at degree " + std::to_string(m.degree()));
}

inline void check_spec(const PotentialSpec& spec) {
    if (spec.dim < 1) throw SpecError(ErrorClass::Invariant, 0, "dimension must be >= 1");
    if (static_cast<int>(spec.box.size()) != spec.dim)
        throw SpecError(ErrorClass::Invariant, 0, "box arity does not match dimension");
    for (auto& [lo, hi] : spec.box)
        if (!(lo < hi)) throw SpecError(ErrorClass::Invariant, 0, "empty box interval");
    for (size_t i = 0; i < spec.critical_points.size(); ++i) {
        if (spec.critical_points[i].dim() != spec.dim)
            throw SpecError(ErrorClass::Invariant, 0, "critical point arity mismatch");
        check_critical_point(spec.V, spec.critical_points[i], static_cast<int>(i));
        for (size_t j = 0; j < i; ++j)
            if (spec.critical_points[i].location == spec.critical_points[j].location)
                throw SpecError(ErrorClass::Invariant, 0, "duplicate critical point locations");
    }
}

// --- file format ----------------------------------------------------------------
// dim <d>
// box <lo> <hi>            (d lines, axis order)
// V = <polynomial>
// cp at <coords> value <q> nu <nu_1..nu_d> t <t_1..t_d> [U = <expr1, ..., exprd>]

inline PotentialSpec parse_spec(std::string_view text) {
    PotentialSpec spec;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    bool have_dim = false, have_v = false;
    int boxes = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        try {
            if (tok == "dim") {
                if (!(ls >> spec.dim) || spec.dim < 1)
                    throw SpecError(ErrorClass::Parse, lineno, "bad dimension");
                have_dim = true;
            } else if (tok == "box") {
                if (!have_dim) throw SpecError(ErrorClass::Parse, lineno, "box before dim");
                std::string lo, hi;
                if (!(ls >> lo >> hi)) throw SpecError(ErrorClass::Parse, lineno, "box wants <lo> <hi>");
                spec.box.emplace_back(parse_rational(lo), parse_rational(hi));
                ++boxes;
            } else if (tok == "V") {
                if (!have_dim) throw SpecError(ErrorClass::Parse, lineno, "V before dim");
                std::string eq;
                ls >> eq;
                if (eq != "=") throw SpecError(ErrorClass::Parse, lineno, "expected '='");
                std::string rest;
                std::getline(ls, rest);
                spec.V = parse_polynomial(rest, spec.dim);
                have_v = true;
            } else if (tok == "cp") {
                if (!have_dim || !have_v)
                    throw SpecError(ErrorClass::Parse, lineno, "cp before dim/V");
                std::string at;
                ls >> at;
                if (at != "at") throw SpecError(ErrorClass::Parse, lineno, "expected 'at'");
                CriticalPoint cp;
                for (int i = 0; i < spec.dim; ++i) {
                    std::string w;
                    if (!(ls >> w)) throw SpecError(ErrorClass::Parse, lineno, "missing coordinate");
                    cp.location.push_back(parse_rational(w));
                }
                std::string kw;
                ls >> kw;
                if (kw != "value") throw SpecError(ErrorClass::Parse, lineno, "expected 'value'");
                std::string vv;
                ls >> vv;
                cp.value = parse_rational(vv);
                ls >> kw;
                if (kw != "nu") throw SpecError(ErrorClass::Parse, lineno, "expected 'nu'");
                for (int i = 0; i < spec.dim; ++i) {
                    int nu;
                    if (!(ls >> nu)) throw SpecError(ErrorClass::Parse, lineno, "missing order");
                    cp.orders.push_back(nu);
                }
                ls >> kw;
                if (kw != "t") throw SpecError(ErrorClass::Parse, lineno, "expected 't'");
                for (int i = 0; i < spec.dim; ++i) {
                    std::string w;
                    if (!(ls >> w)) throw SpecError(ErrorClass::Parse, lineno, "missing coefficient");
                    cp.coeffs.push_back(parse_rational(w));
                }
                if (ls >> kw) {
                    if (kw != "U") throw SpecError(ErrorClass::Parse, lineno, "unexpected token " + kw);
                    std::string eq;
                    ls >> eq;
                    if (eq != "=") throw SpecError(ErrorClass::Parse, lineno, "expected '='");
                    std::string rest;
                    std::getline(ls, rest);
                    std::vector<std::string> parts;
                    size_t start = 0;
                    while (true) {
                        auto comma = rest.find(',', start);
                        parts.push_back(rest.substr(start, comma - start));
                        if (comma == std::string::npos) break;
                        start = comma + 1;
                    }
                    if (static_cast<int>(parts.size()) != spec.dim)
                        throw SpecError(ErrorClass::Parse, lineno, "U wants one expression per coordinate");
                    for (auto& p : parts) cp.change_of_vars.push_back(parse_polynomial(p, spec.dim));
                }
                spec.critical_points.push_back(std::move(cp));
            } else {
                throw SpecError(ErrorClass::Parse, lineno, "unknown directive '" + tok + "'");
            }
        } catch (const std::invalid_argument& e) {
            throw SpecError(ErrorClass::Parse, lineno, e.what());
        }
    }
    if (!have_dim) throw SpecError(ErrorClass::Parse, 0, "missing dim directive");
    if (!have_v) throw SpecError(ErrorClass::Parse, 0, "missing V directive");
    if (boxes != spec.dim) throw SpecError(ErrorClass::Parse, 0, "expected one box line per axis");
    check_spec(spec);
    return spec;
}

// --- degeneracy-order statistics -------------------------------------------------

struct NuStats {
    int nu_bar = 2;            // sup_A sup_i nu_i
    int nu_under = 2;          // sup_A inf_i nu_i
    ExtInt nu_under_star;      // sup_A inf{nu_i : t_i > 0}
    ExtInt nu_hat;             // sup_A inf{nu_i : nu_i > inf nu}
};

template <typename Iter>
NuStats nu_stats(Iter first, Iter last) {
    if (first == last) throw std::invalid_argument("nu_stats: empty set");
    NuStats st;
    st.nu_bar = 0;
    st.nu_under = 0;
    st.nu_under_star = 0;
    st.nu_hat = 0;
    for (auto it = first; it != last; ++it) {
        const CriticalPoint& p = *it;
        int hi = p.max_order(), lo = p.min_order();
        st.nu_bar = std::max(st.nu_bar, hi);
        st.nu_under = std::max(st.nu_under, lo);
        ExtInt star = ExtInt::inf();
        for (size_t i = 0; i < p.orders.size(); ++i)
            if (p.coeffs[i] > 0) star = min(star, ExtInt(p.orders[i]));
        st.nu_under_star = max(st.nu_under_star, star);
        ExtInt hat = ExtInt::inf();
        for (int nu : p.orders)
            if (nu > lo) hat = min(hat, ExtInt(nu));
        st.nu_hat = max(st.nu_hat, hat);
    }
    return st;
}

inline NuStats nu_stats(const std::vector<CriticalPoint>& pts) {
    return nu_stats(pts.begin(), pts.end());
}

// --- confinement check (sampled, advisory) --------------------------------------

struct ConfinementReport {
    double C = 0;            // max(1/min|grad V|, max |lap V| / |grad V|^2) on the shell
    double C0 = 0;           // 1/(2 C^2), essential-spectrum floor
    double min_grad = 0;
    double max_lap_ratio = 0;
    double affine_offset = 0;  // best b with V >= |x|/C + b on the samples
    long samples = 0;
    std::vector<double> enlarged_box_lo, enlarged_box_hi;
};

// Samples a deterministic lattice on a box enlarged by 20%, skipping points closer
// than `margin` to a declared critical point. Gradient zeros are detected exactly.
inline ConfinementReport check_confinement(const PotentialSpec& spec, const Rational& margin) {
    int d = spec.dim;
    if (d > 3) throw SpecError(ErrorClass::Dimension, 0, "confinement sampling limited to d <= 3");
    for (auto& cp : spec.critical_points)
        for (int i = 0; i < d; ++i) {
            if (!(cp.location[i] - margin > spec.box[i].first &&
                  cp.location[i] + margin < spec.box[i].second))
                throw SpecError(ErrorClass::Invariant, 0,
                                "box does not contain critical points with the given margin");
        }
    RatPoly grad2(d), lap(d);
    std::vector<RatPoly> hess_abs_terms;
    for (int i = 0; i < d; ++i) {
        RatPoly gi = spec.V.derivative(i);
        grad2 = grad2 + gi * gi;
        lap = lap + gi.derivative(i);
        for (int j = 0; j < d; ++j) hess_abs_terms.push_back(gi.derivative(j));
    }
    int n = d == 1 ? 2048 : (d == 2 ? 96 : 24);
    ConfinementReport rep;
    Rational enlarge(1, 5);
    std::vector<Rational> lo(d), step(d);
    for (int i = 0; i < d; ++i) {
        Rational width = spec.box[i].second - spec.box[i].first;
        lo[i] = spec.box[i].first - enlarge * width / 2;
        step[i] = width * (1 + enlarge) / (n - 1);
        rep.enlarged_box_lo.push_back(to_double(lo[i]));
        rep.enlarged_box_hi.push_back(to_double(lo[i] + step[i] * (n - 1)));
    }
    Rational margin2 = margin * margin;
    double min_grad2 = std::numeric_limits<double>::infinity();
    double max_ratio = 0;
    std::vector<std::pair<double, double>> vx_xnorm;  // (V, |x|) pairs for the affine minorant
    std::vector<int> idx(d, 0);
    std::vector<Rational> x(d);
    std::vector<double> xd(d);
    while (true) {
        for (int i = 0; i < d; ++i) x[i] = lo[i] + step[i] * idx[i];
        bool inside_core = false;
        for (auto& cp : spec.critical_points) {
            Rational dist2 = 0;
            for (int i = 0; i < d; ++i) dist2 += (x[i] - cp.location[i]) * (x[i] - cp.location[i]);
            if (dist2 < margin2) {
                inside_core = true;
                break;
            }
        }
        if (!inside_core) {
            Rational g2 = grad2.evaluate<Rational>(x);
            if (g2 == 0)
                throw SpecError(ErrorClass::Invariant, 0,
                                "gradient vanishes at an exterior sample point (confinement violated)");
            for (int i = 0; i < d; ++i) xd[i] = to_double(x[i]);
            double g2d = to_double(g2);
            // A zero could hide between lattice points: flag when |grad V| is below what
            // the local Hessian could bridge over two steps.
            double hess_sum = 0;
            for (auto& hij : hess_abs_terms) hess_sum += std::abs(hij.evaluate<double>(xd));
            double step_max = 0;
            for (int i = 0; i < d; ++i) step_max = std::max(step_max, to_double(step[i]));
            double bridge = 2.0 * step_max * hess_sum;
            if (g2d < bridge * bridge)
                throw SpecError(ErrorClass::Invariant, 0,
                                "gradient vanishes near an exterior sample point (undeclared "
                                "critical point on the shell?)");
            double lapd = std::abs(lap.evaluate<double>(xd));
            min_grad2 = std::min(min_grad2, g2d);
            max_ratio = std::max(max_ratio, lapd / g2d);
            double xnorm = 0;
            for (int i = 0; i < d; ++i) xnorm += xd[i] * xd[i];
            vx_xnorm.emplace_back(spec.V.evaluate<double>(xd), std::sqrt(xnorm));
            rep.samples++;
        }
        int ax = 0;
        while (ax < d && ++idx[ax] == n) idx[ax++] = 0;
        if (ax == d) break;
    }
    if (rep.samples == 0) throw SpecError(ErrorClass::Invariant, 0, "empty sample shell");
    rep.min_grad = std::sqrt(min_grad2);
    rep.max_lap_ratio = max_ratio;
    rep.C = std::max(1.0 / rep.min_grad, rep.max_lap_ratio);
    rep.C0 = 1.0 / (2.0 * rep.C * rep.C);
    rep.affine_offset = std::numeric_limits<double>::infinity();
    for (auto& [v, xn] : vx_xnorm) rep.affine_offset = std::min(rep.affine_offset, v - xn / rep.C);
    return rep;
}

// --- local sublevel component count (flood fill on a ball) -----------------------

// Number of connected components of B(s, r) intersect {V < V(s)} on an n^d grid.
// Counts at n and 2n must agree, otherwise a Convergence error is thrown.
inline int local_component_count(const PotentialSpec& spec, const CriticalPoint& s, double r, int n);

namespace detail {
inline int flood_count(const PotentialSpec& spec, const CriticalPoint& s, double r, int n) {
    int d = spec.dim;
    std::vector<double> c(d);
    for (int i = 0; i < d; ++i) c[i] = to_double(s.location[i]);
    double vs = to_double(s.value);
    long total = 1;
    for (int i = 0; i < d; ++i) total *= n;
    std::vector<char> mask(total, 0);
    std::vector<double> x(d);
    auto coord = [&](long id, int ax) {
        long p = id;
        for (int i = 0; i < ax; ++i) p /= n;
        return p % n;
    };
    for (long id = 0; id < total; ++id) {
        double dist2 = 0;
        for (int i = 0; i < d; ++i) {
            x[i] = c[i] - r + 2.0 * r * coord(id, i) / (n - 1);
            dist2 += (x[i] - c[i]) * (x[i] - c[i]);
        }
        if (dist2 <= r * r && spec.V.evaluate<double>(x) < vs) mask[id] = 1;
    }
    std::vector<long> parent(total, -1);
    std::function<long(long)> find = [&](long a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (long id = 0; id < total; ++id)
        if (mask[id]) parent[id] = id;
    long stride = 1;
    for (int ax = 0; ax < d; ++ax) {
        for (long id = 0; id < total; ++id) {
            if (!mask[id]) continue;
            if (coord(id, ax) + 1 < n && mask[id + stride]) {
                long ra = find(id), rb = find(id + stride);
                if (ra != rb) parent[ra] = rb;
            }
        }
        stride *= n;
    }
    std::set<long> roots;
    for (long id = 0; id < total; ++id)
        if (mask[id]) roots.insert(find(id));
    return static_cast<int>(roots.size());
}
}  // namespace detail

inline int local_component_count(const PotentialSpec& spec, const CriticalPoint& s, double r, int n) {
    if (spec.dim > 3) throw SpecError(ErrorClass::Dimension, 0, "component count limited to d <= 3");
    int a = detail::flood_count(spec, s, r, n);
    int b = detail::flood_count(spec, s, r, 2 * n);
    if (a != b)
        throw SpecError(ErrorClass::Convergence, 0,
                        "component count unstable between n and 2n (" + std::to_string(a) + " vs " +
                            std::to_string(b) + ")");
    return a;
}

}  // namespace witten
