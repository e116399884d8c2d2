#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "witten/rational.hpp"

namespace witten {

// Exponent multi-index with graded-lex ordering (total degree first).
struct Monomial {
    std::vector<int> e;

    explicit Monomial(int nvars = 0) : e(nvars, 0) {}
    Monomial(std::initializer_list<int> exps) : e(exps) {}
    explicit Monomial(std::vector<int> exps) : e(std::move(exps)) {}

    int degree() const { return std::accumulate(e.begin(), e.end(), 0); }
    int nvars() const { return static_cast<int>(e.size()); }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
    friend bool operator<(const Monomial& a, const Monomial& b) {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a.e < b.e;
    }
    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial m(a);
        for (size_t i = 0; i < m.e.size(); ++i) m.e[i] += b.e[i];
        return m;
    }
};

// Sparse multivariate polynomial over an exact coefficient type.
// Coeff must support +,-,*,== and zero-testing via is_zero_coeff.
inline bool is_zero_coeff(const Rational& c) { return c == 0; }

template <typename T, typename C>
struct CoeffCast {
    static T to(const C& c) { return static_cast<T>(c); }
};
template <typename C>
struct CoeffCast<C, C> {
    static const C& to(const C& c) { return c; }
};
template <>
struct CoeffCast<double, Rational> {
    static double to(const Rational& c) { return to_double(c); }
};

template <typename Coeff>
class Polynomial {
  public:
    using Terms = std::map<Monomial, Coeff>;

    explicit Polynomial(int nvars = 0) : nvars_(nvars) {}

    static Polynomial constant(int nvars, const Coeff& c) {
        Polynomial p(nvars);
        p.add_term(Monomial(nvars), c);
        return p;
    }
    static Polynomial variable(int nvars, int i, const Coeff& one) {
        Polynomial p(nvars);
        Monomial m(nvars);
        m.e[i] = 1;
        p.add_term(m, one);
        return p;
    }

    int nvars() const { return nvars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const {
        int d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }
    int lowest_degree() const {  // degree of the lowest nonzero homogeneous part; -1 if zero
        if (terms_.empty()) return -1;
        return terms_.begin()->first.degree();
    }

    void add_term(const Monomial& m, const Coeff& c) {
        if (is_zero_coeff(c)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second = it->second + c;
            if (is_zero_coeff(it->second)) terms_.erase(it);
        }
    }

    Coeff coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Coeff{} : it->second;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        check_vars(a, b);
        Polynomial out(a);
        for (auto& [m, c] : b.terms_) out.add_term(m, c);
        return out;
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        check_vars(a, b);
        Polynomial out(a);
        for (auto& [m, c] : b.terms_) out.add_term(m, Coeff{} - c);
        return out;
    }
    Polynomial operator-() const {
        Polynomial out(nvars_);
        for (auto& [m, c] : terms_) out.terms_.emplace(m, Coeff{} - c);
        return out;
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        return mul_truncated(a, b, -1);
    }
    Polynomial scaled(const Coeff& s) const {
        Polynomial out(nvars_);
        if (is_zero_coeff(s)) return out;
        for (auto& [m, c] : terms_) out.add_term(m, c * s);
        return out;
    }

    // Product with all terms of total degree > cap dropped (cap < 0: no cap).
    friend Polynomial mul_truncated(const Polynomial& a, const Polynomial& b, int cap) {
        check_vars(a, b);
        Polynomial out(a.nvars_);
        for (auto& [ma, ca] : a.terms_) {
            if (cap >= 0 && ma.degree() > cap) continue;
            for (auto& [mb, cb] : b.terms_) {
                if (cap >= 0 && ma.degree() + mb.degree() > cap) continue;
                out.add_term(ma * mb, ca * cb);
            }
        }
        return out;
    }

    Polynomial truncated(int cap) const {
        Polynomial out(nvars_);
        for (auto& [m, c] : terms_)
            if (m.degree() <= cap) out.terms_.emplace(m, c);
        return out;
    }

    Polynomial homogeneous_part(int deg) const {
        Polynomial out(nvars_);
        for (auto& [m, c] : terms_)
            if (m.degree() == deg) out.terms_.emplace(m, c);
        return out;
    }

    Polynomial derivative(int var) const {
        Polynomial out(nvars_);
        for (auto& [m, c] : terms_) {
            if (m.e[var] == 0) continue;
            Monomial d(m);
            int k = d.e[var]--;
            out.add_term(d, c * Coeff(k));
        }
        return out;
    }

    std::vector<Polynomial> gradient() const {
        std::vector<Polynomial> g;
        g.reserve(nvars_);
        for (int i = 0; i < nvars_; ++i) g.push_back(derivative(i));
        return g;
    }

    // Antiderivative in one variable, zero constant of integration.
    // Requires Coeff division by integers (exact field coefficients).
    Polynomial antiderivative(int var) const {
        Polynomial out(nvars_);
        for (auto& [m, c] : terms_) {
            Monomial d(m);
            int k = ++d.e[var];
            out.add_term(d, c / Coeff(k));
        }
        return out;
    }

    // Substitutes x_i -> inner[i]; truncates at total degree cap when cap >= 0.
    // Inner maps with nonzero constant term are allowed only with cap < 0.
    Polynomial compose(const std::vector<Polynomial>& inner, int cap = -1) const {
        if (static_cast<int>(inner.size()) != nvars_)
            throw std::invalid_argument("compose: variable count mismatch");
        int nv = inner.empty() ? nvars_ : inner.front().nvars();
        Polynomial out(nv);
        // Cache powers of each inner polynomial as needed.
        std::vector<std::vector<Polynomial>> pows(nvars_);
        for (int i = 0; i < nvars_; ++i) pows[i].push_back(Polynomial::constant(nv, unit()));
        auto power = [&](int i, int k) -> const Polynomial& {
            while (static_cast<int>(pows[i].size()) <= k)
                pows[i].push_back(mul_truncated(pows[i].back(), inner[i], cap));
            return pows[i][k];
        };
        for (auto& [m, c] : terms_) {
            Polynomial t = Polynomial::constant(nv, c);
            for (int i = 0; i < nvars_ && !t.is_zero(); ++i)
                if (m.e[i] > 0) t = mul_truncated(t, power(i, m.e[i]), cap);
            out = out + t;
        }
        return out;
    }

    // Shifts the origin: result(xi) = this(x0 + xi).
    Polynomial shifted(const std::vector<Coeff>& x0) const {
        std::vector<Polynomial> inner;
        inner.reserve(nvars_);
        for (int i = 0; i < nvars_; ++i) {
            Polynomial p = Polynomial::constant(nvars_, x0[i]);
            p.add_term(unit_mono(i), unit());
            inner.push_back(p);
        }
        return compose(inner);
    }

    template <typename T>
    T evaluate(const std::vector<T>& x) const {
        T acc{};
        for (auto& [m, c] : terms_) {
            T t = CoeffCast<T, Coeff>::to(c);
            for (int i = 0; i < nvars_; ++i)
                for (int k = 0; k < m.e[i]; ++k) t = t * x[i];
            acc = acc + t;
        }
        return acc;
    }

  private:
    static void check_vars(const Polynomial& a, const Polynomial& b) {
        if (a.nvars_ != b.nvars_) throw std::invalid_argument("variable count mismatch");
    }
    Monomial unit_mono(int i) const {
        Monomial m(nvars_);
        m.e[i] = 1;
        return m;
    }
    static Coeff unit() { return Coeff(1); }

    int nvars_;
    Terms terms_;
};

using RatPoly = Polynomial<Rational>;

// --- parsing: signed sums of monomials  q * x<i>^<k> * ...  -------------------

namespace detail {
inline void skip_ws(std::string_view s, size_t& i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}
}  // namespace detail

// Grammar: term ([+-] term)* ; term: factor (* factor)* ; factor: rational | x<i>[^<k>].
// Throws std::invalid_argument with a column hint.
inline RatPoly parse_polynomial(std::string_view s, int nvars) {
    using detail::skip_ws;
    RatPoly out(nvars);
    size_t i = 0;
    skip_ws(s, i);
    bool first = true;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            throw std::invalid_argument("expected '+' or '-' at column " + std::to_string(i + 1));
        }
        first = false;
        skip_ws(s, i);
        Rational coeff = sign;
        Monomial mono(nvars);
        bool saw_factor = false;
        while (true) {
            skip_ws(s, i);
            if (i >= s.size()) break;
            if (s[i] == 'x') {
                size_t j = ++i;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                if (j == i) throw std::invalid_argument("expected variable index at column " + std::to_string(i + 1));
                int vi = std::stoi(std::string(s.substr(i, j - i)));
                if (vi < 1 || vi > nvars)
                    throw std::invalid_argument("variable x" + std::to_string(vi) + " out of range (dim " +
                                                std::to_string(nvars) + ")");
                i = j;
                int k = 1;
                skip_ws(s, i);
                if (i < s.size() && s[i] == '^') {
                    ++i;
                    skip_ws(s, i);
                    size_t j2 = i;
                    while (j2 < s.size() && std::isdigit(static_cast<unsigned char>(s[j2]))) ++j2;
                    if (j2 == i) throw std::invalid_argument("expected exponent at column " + std::to_string(i + 1));
                    k = std::stoi(std::string(s.substr(i, j2 - i)));
                    i = j2;
                }
                mono.e[vi - 1] += k;
                saw_factor = true;
            } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
                size_t j = i;
                while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) ++j;
                coeff *= parse_rational(s.substr(i, j - i));
                i = j;
                saw_factor = true;
            } else {
                throw std::invalid_argument(std::string("unexpected character '") + s[i] + "' at column " +
                                            std::to_string(i + 1));
            }
            skip_ws(s, i);
            if (i < s.size() && s[i] == '*') {
                ++i;
                continue;
            }
            break;
        }
        if (!saw_factor) throw std::invalid_argument("empty term at column " + std::to_string(i + 1));
        out.add_term(mono, coeff);
        skip_ws(s, i);
    }
    return out;
}

inline std::string poly_to_string(const RatPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (auto& [m, c] : p.terms()) {
        std::string vars;
        for (int i = 0; i < m.nvars(); ++i) {
            if (m.e[i] == 0) continue;
            if (!vars.empty()) vars += "*";
            vars += "x" + std::to_string(i + 1);
            if (m.e[i] > 1) vars += "^" + std::to_string(m.e[i]);
        }
        std::string t;
        if (vars.empty())
            t = to_string(c);
        else if (c == 1)
            t = vars;
        else if (c == -1)
            t = "-" + vars;
        else
            t = to_string(c) + "*" + vars;
        if (out.empty())
            out = t;
        else if (!t.empty() && t[0] == '-')
            out += " - " + t.substr(1);
        else
            out += " + " + t;
    }
    return out;
}

}  // namespace witten
