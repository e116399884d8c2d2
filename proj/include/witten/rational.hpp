#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace witten {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Parses "a/b" or "a" (optionally signed). Throws std::invalid_argument on junk.
inline Rational parse_rational(std::string_view s) {
    std::string t(s);
    if (t.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = t.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(t));
        Int num(t.substr(0, slash));
        Int den(t.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("bad rational literal: " + t);
    }
}

inline Rational rat_pow(Rational base, long e) {
    if (e < 0) {
        if (base == 0) throw std::domain_error("0^negative");
        base = Rational(denominator(base), numerator(base));
        e = -e;
    }
    Rational out = 1;
    while (e > 0) {
        if (e & 1) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

// Integer n-th root if exact.
inline std::optional<Int> exact_iroot(const Int& v, long n) {
    if (v < 0) return std::nullopt;
    if (v == 0 || v == 1) return v;
    Int lo = 1, hi = 1;
    while (boost::multiprecision::pow(hi, static_cast<unsigned>(n)) < v) hi <<= 1;
    while (lo < hi) {
        Int mid = (lo + hi) / 2;
        if (boost::multiprecision::pow(mid, static_cast<unsigned>(n)) < v)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (boost::multiprecision::pow(lo, static_cast<unsigned>(n)) == v) return lo;
    return std::nullopt;
}

// Rational p-th root if exact (q > 0).
inline std::optional<Rational> exact_root(const Rational& q, long p) {
    if (q <= 0) return std::nullopt;
    auto rn = exact_iroot(numerator(q), p);
    if (!rn) return std::nullopt;
    auto rd = exact_iroot(denominator(q), p);
    if (!rd) return std::nullopt;
    return Rational(*rn, *rd);
}

// Rational extended with +infinity; enough for the min/max bookkeeping where
// the convention inf(empty) = +infinity applies.
struct ExtRational {
    bool infinite = false;
    Rational value = 0;

    ExtRational() = default;
    ExtRational(const Rational& v) : infinite(false), value(v) {}  // NOLINT
    ExtRational(long v) : infinite(false), value(v) {}             // NOLINT
    static ExtRational inf() {
        ExtRational e;
        e.infinite = true;
        return e;
    }
    bool finite() const { return !infinite; }

    friend bool operator==(const ExtRational& a, const ExtRational& b) {
        if (a.infinite || b.infinite) return a.infinite == b.infinite;
        return a.value == b.value;
    }
    friend bool operator<(const ExtRational& a, const ExtRational& b) {
        if (a.infinite) return false;
        if (b.infinite) return true;
        return a.value < b.value;
    }
    friend bool operator<=(const ExtRational& a, const ExtRational& b) { return a < b || a == b; }
    friend bool operator>(const ExtRational& a, const ExtRational& b) { return b < a; }
    friend bool operator>=(const ExtRational& a, const ExtRational& b) { return b <= a; }

    friend ExtRational operator+(const ExtRational& a, const ExtRational& b) {
        if (a.infinite || b.infinite) return inf();
        return ExtRational(a.value + b.value);
    }

    friend ExtRational min(const ExtRational& a, const ExtRational& b) { return a < b ? a : b; }
    friend ExtRational max(const ExtRational& a, const ExtRational& b) { return a < b ? b : a; }

    double as_double() const {
        return infinite ? std::numeric_limits<double>::infinity() : to_double(value);
    }
    std::string str() const { return infinite ? "inf" : to_string(value); }
};

// Integer extended with +infinity (degeneracy-order statistics).
struct ExtInt {
    bool infinite = false;
    long value = 0;

    ExtInt() = default;
    ExtInt(long v) : infinite(false), value(v) {}  // NOLINT
    static ExtInt inf() {
        ExtInt e;
        e.infinite = true;
        return e;
    }
    bool finite() const { return !infinite; }

    friend bool operator==(const ExtInt& a, const ExtInt& b) {
        if (a.infinite || b.infinite) return a.infinite == b.infinite;
        return a.value == b.value;
    }
    friend bool operator<(const ExtInt& a, const ExtInt& b) {
        if (a.infinite) return false;
        if (b.infinite) return true;
        return a.value < b.value;
    }
    friend bool operator>(const ExtInt& a, const ExtInt& b) { return b < a; }
    friend ExtInt min(const ExtInt& a, const ExtInt& b) { return a < b ? a : b; }
    friend ExtInt max(const ExtInt& a, const ExtInt& b) { return a < b ? b : a; }
    std::string str() const { return infinite ? "inf" : std::to_string(value); }
};

}  // namespace witten
