#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "witten/rational.hpp"

namespace witten {

// Coefficient field Q(rho) with rho the positive real root q^(1/nu), q > 0 rational.
// The requested (nu, q) is reduced until q is p-th-power-free for every prime p | nu,
// after which x^nu - q is irreducible over Q and arithmetic mod it is a field.
struct RingContext {
    long nu = 1;        // reduced radical index
    Rational q = 1;     // reduced radicand; rho = q^(1/nu)
    long nu_requested;  // as declared (c in dumps still denotes the same real number)
    Rational q_requested;

    RingContext(long nu0, const Rational& q0) : nu_requested(nu0), q_requested(q0) {
        if (q0 <= 0 || nu0 < 1) throw std::invalid_argument("ring wants q > 0, nu >= 1");
        nu = nu0;
        q = q0;
        bool progress = true;
        while (progress && nu > 1) {
            progress = false;
            for (long p = 2; p <= nu; ++p) {
                if (nu % p != 0) continue;
                bool prime = true;
                for (long f = 2; f * f <= p; ++f)
                    if (p % f == 0) prime = false;
                if (!prime) continue;
                if (auto r = exact_root(q, p)) {
                    q = *r;
                    nu = nu / p;
                    progress = true;
                    break;
                }
            }
        }
    }

    double rho() const { return std::pow(to_double(q), 1.0 / static_cast<double>(nu)); }
};

using RingCtxPtr = std::shared_ptr<const RingContext>;

// Element of Q(rho), stored in the basis 1, rho, ..., rho^(nu-1).
class RingElem {
  public:
    RingElem() = default;  // rational zero; context-free until combined
    RingElem(long v) : c_{Rational(v)} { trim(); }                 // NOLINT
    RingElem(const Rational& v) : c_{v} { trim(); }                // NOLINT
    RingElem(RingCtxPtr ctx, std::vector<Rational> c) : ctx_(std::move(ctx)), c_(std::move(c)) { trim(); }

    static RingElem rho(const RingCtxPtr& ctx) {
        if (ctx->nu == 1) return RingElem(ctx->q);
        std::vector<Rational> c(2);
        c[1] = 1;
        return RingElem(ctx, std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    bool is_rational() const { return c_.size() <= 1; }
    Rational rational_part() const { return c_.empty() ? Rational(0) : c_[0]; }
    const RingCtxPtr& ctx() const { return ctx_; }

    friend RingElem operator+(const RingElem& a, const RingElem& b) {
        RingCtxPtr ctx = merged_ctx(a, b);
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
        for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return RingElem(std::move(ctx), std::move(c));
    }
    friend RingElem operator-(const RingElem& a, const RingElem& b) {
        RingCtxPtr ctx = merged_ctx(a, b);
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
        for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
        return RingElem(std::move(ctx), std::move(c));
    }
    RingElem operator-() const {
        RingElem out(*this);
        for (auto& x : out.c_) x = -x;
        return out;
    }
    friend RingElem operator*(const RingElem& a, const RingElem& b) {
        if (a.is_zero() || b.is_zero()) return RingElem();
        RingCtxPtr ctx = merged_ctx(a, b);
        long nu = ctx ? ctx->nu : 1;
        std::vector<Rational> prod(a.c_.size() + b.c_.size() - 1);
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) prod[i + j] += a.c_[i] * b.c_[j];
        // reduce rho^k for k >= nu via rho^nu = q
        for (size_t k = prod.size(); k-- > static_cast<size_t>(nu);) {
            if (prod[k] == 0) continue;
            prod[k - nu] += prod[k] * ctx->q;
            prod[k] = 0;
        }
        prod.resize(std::max<size_t>(1, std::min(prod.size(), static_cast<size_t>(nu))));
        return RingElem(std::move(ctx), std::move(prod));
    }

    // Field inverse via the extended Euclidean algorithm on Q[x]/(x^nu - q).
    RingElem inverse() const {
        if (is_zero()) throw std::domain_error("ring inverse of zero");
        if (is_rational()) return RingElem(Rational(1) / c_[0]);
        // r0 = x^nu - q, r1 = this; maintain s with s*this == r (mod r0).
        long nu = ctx_->nu;
        std::vector<Rational> r0(nu + 1);
        r0[0] = -ctx_->q;
        r0[nu] = 1;
        std::vector<Rational> r1 = c_;
        std::vector<Rational> s0(1, Rational(0)), s1(1, Rational(1));
        auto deg = [](const std::vector<Rational>& p) {
            for (size_t i = p.size(); i-- > 0;)
                if (p[i] != 0) return static_cast<long>(i);
            return -1L;
        };
        while (deg(r1) > 0) {
            // divide r0 by r1
            std::vector<Rational> quo(std::max<long>(deg(r0) - deg(r1) + 1, 1));
            std::vector<Rational> rem = r0;
            long d1 = deg(r1);
            for (long d = deg(rem); d >= d1; d = deg(rem)) {
                if (d < 0) break;
                Rational f = rem[d] / r1[d1];
                quo[d - d1] += f;
                for (long i = 0; i <= d1; ++i) rem[d - d1 + i] -= f * r1[i];
                rem[d] = 0;
            }
            // s_new = s0 - quo * s1
            std::vector<Rational> snew(std::max(s0.size(), quo.size() + s1.size()));
            for (size_t i = 0; i < s0.size(); ++i) snew[i] += s0[i];
            for (size_t i = 0; i < quo.size(); ++i)
                for (size_t j = 0; j < s1.size(); ++j) snew[i + j] -= quo[i] * s1[j];
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(snew);
        }
        long d = deg(r1);
        if (d != 0) throw std::domain_error("ring modulus not coprime (unreduced radicand?)");
        Rational lead = r1[0];
        std::vector<Rational> out(nu);
        for (size_t i = 0; i < s1.size() && i < static_cast<size_t>(nu); ++i) out[i] = s1[i] / lead;
        return RingElem(ctx_, std::move(out));
    }
    friend RingElem operator/(const RingElem& a, const RingElem& b) { return a * b.inverse(); }

    friend bool operator==(const RingElem& a, const RingElem& b) {
        size_t n = std::max(a.c_.size(), b.c_.size());
        for (size_t i = 0; i < n; ++i) {
            Rational xa = i < a.c_.size() ? a.c_[i] : Rational(0);
            Rational xb = i < b.c_.size() ? b.c_[i] : Rational(0);
            if (xa != xb) return false;
        }
        return true;
    }

    double to_double() const {
        if (c_.empty()) return 0.0;
        double rho = ctx_ ? ctx_->rho() : 1.0;
        double acc = 0.0, p = 1.0;
        for (auto& x : c_) {
            acc += witten::to_double(x) * p;
            p *= rho;
        }
        return acc;
    }

    // Rendered as "a/b" or "a/b+a'/b'*c^k+..." with c the ring generator.
    std::string str() const {
        if (c_.empty()) return "0";
        std::string out;
        for (size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] == 0) continue;
            std::string t = to_string(c_[k]);
            if (k >= 1) t += "*c" + (k > 1 ? "^" + std::to_string(k) : "");
            if (out.empty())
                out = t;
            else
                out += (t[0] == '-' ? t : "+" + t);
        }
        return out.empty() ? "0" : out;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
        if (c_.size() <= 1) ctx_ = nullptr;  // rational values carry no context
    }
    static RingCtxPtr merged_ctx(const RingElem& a, const RingElem& b) {
        if (a.ctx_ && b.ctx_ && a.ctx_ != b.ctx_ &&
            (a.ctx_->nu != b.ctx_->nu || a.ctx_->q != b.ctx_->q))
            throw std::invalid_argument("mixing elements of different rings");
        return a.ctx_ ? a.ctx_ : b.ctx_;
    }

    RingCtxPtr ctx_;
    std::vector<Rational> c_;  // c_[k] multiplies rho^k
};

inline bool is_zero_coeff(const RingElem& c) { return c.is_zero(); }

template <>
struct CoeffCast<double, RingElem> {
    static double to(const RingElem& c) { return c.to_double(); }
};

}  // namespace witten
