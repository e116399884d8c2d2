#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "witten/asymptotics.hpp"
#include "witten/polynomial.hpp"
#include "witten/potential.hpp"
#include "witten/qring.hpp"

namespace witten {

using RPoly = Polynomial<RingElem>;

inline RPoly lift(const RatPoly& p, int nvars) {
    RPoly out(nvars);
    for (auto& [m, c] : p.terms()) out.add_term(m, RingElem(c));
    return out;
}

// Symbolic setting at one saddle: coordinates recentred at s and permuted so the
// drop direction (t_1 < 0) comes first; all data truncated at total degree N.
// Coefficients live in Q(c) with c^{nu_1} = 2 nu_1 |t_1|.
class EikonalContext {
  public:
    EikonalContext(const CriticalPoint& s, int truncation = -1) {
        if (!s.is_saddle()) throw std::invalid_argument("eikonal wants an index-1 even point");
        d_ = s.dim();
        int drop = -1;
        for (int i = 0; i < d_; ++i)
            if (s.coeffs[i] < 0) drop = i;
        perm_.push_back(drop);
        for (int i = 0; i < d_; ++i)
            if (i != drop) perm_.push_back(i);
        for (int i : perm_) {
            nu_.push_back(s.orders[i]);
            t_.push_back(s.coeffs[i]);
        }
        nu_under_ = *std::min_element(nu_.begin(), nu_.end());
        N_ = truncation > 0 ? truncation : 2 * s.max_order() + 2;
        ring_ = std::make_shared<RingContext>(nu_[0], Rational(2) * nu_[0] * (-t_[0]));

        // U in the recentred, permuted coordinates
        if (s.identity_map()) {
            for (int i = 0; i < d_; ++i) umap_.push_back(RatPoly::variable(d_, i, Rational(1)));
        } else {
            // xi -> P (U(x* + P^{-1} xi) - x*)
            std::vector<RatPoly> inner;
            for (int i = 0; i < d_; ++i) {
                // original coordinate i in terms of the permuted variables
                int pos = 0;
                while (perm_[pos] != i) ++pos;
                RatPoly e = RatPoly::variable(d_, pos, Rational(1));
                e.add_term(Monomial(d_), s.location[i]);
                inner.push_back(e);
            }
            for (int i : perm_) {
                RatPoly u = s.change_of_vars[i].compose(inner, N_ + 1);
                u.add_term(Monomial(d_), -s.location[i]);
                umap_.push_back(u);
            }
        }

        // tilde V = sum t_i xi_i^{nu_i} exactly (the normal form is the assumption)
        vt_ = RatPoly(d_);
        for (int i = 0; i < d_; ++i) {
            Monomial m(d_);
            m.e[i] = nu_[i];
            vt_.add_term(m, t_[i]);
        }

        build_omega();
        build_inv_jacobian();
    }

    int dim() const { return d_; }
    int nu1() const { return nu_[0]; }
    int nu_under() const { return nu_under_; }
    int truncation() const { return N_; }
    const std::vector<int>& nu() const { return nu_; }
    const std::vector<Rational>& t() const { return t_; }
    const RingCtxPtr& ring() const { return ring_; }
    const RatPoly& tilde_v() const { return vt_; }
    const std::vector<std::vector<RatPoly>>& omega() const { return omega_; }

    RingElem leading_coefficient() const { return RingElem::rho(ring_); }

    // Omega = (dU^T dU)^{-1} as a Neumann series, truncated; Omega_0 = Id.
    const RatPoly& omega_entry(int i, int j) const { return omega_[i][j]; }

    // w0(ell) = 2 Omega grad(V) . grad(ell) + ell^{nu1-1} Omega grad(ell) . grad(ell)
    RPoly eikonal_residual(const RPoly& ell) const {
        auto ge = ell.gradient();
        std::vector<RPoly> gv;
        for (auto& g : vt_.gradient()) gv.push_back(lift(g, d_));
        RPoly out(d_);
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) {
                RPoly oij = lift(omega_[i][j], d_);
                out = out + mul_truncated(oij, mul_truncated(gv[j], ge[i], N_), N_).scaled(RingElem(2));
            }
        RPoly quad(d_);
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) {
                RPoly oij = lift(omega_[i][j], d_);
                quad = quad + mul_truncated(oij, mul_truncated(ge[j], ge[i], N_), N_);
            }
        RPoly pw = RPoly::constant(d_, RingElem(1));
        for (int k = 0; k < nu_[0] - 1; ++k) pw = mul_truncated(pw, ell, N_);
        out = out + mul_truncated(pw, quad, N_);
        return out;
    }

    // Laplacian of ell in the original coordinates, composed with U: needed by the
    // transport hierarchy. Uses dU^{-T} (Neumann series around the unitary d0U).
    RPoly laplacian_pullback(const RPoly& ell) const {
        auto ge = ell.gradient();
        std::vector<RPoly> G(d_, RPoly(d_));  // (grad ell in original coords) o U
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j)
                G[i] = G[i] + mul_truncated(lift(inv_jt_[i][j], d_), ge[j], N_);
        RPoly lap(d_);
        for (int i = 0; i < d_; ++i) {
            auto gg = G[i].gradient();
            for (int j = 0; j < d_; ++j)
                lap = lap + mul_truncated(lift(inv_jt_[i][j], d_), gg[j], N_);
        }
        return lap;
    }

  private:
    void build_omega() {
        // E = dU^T dU - Id, Omega = sum (-E)^k truncated
        std::vector<std::vector<RatPoly>> jac(d_, std::vector<RatPoly>(d_, RatPoly(d_)));
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) jac[i][j] = umap_[i].derivative(j).truncated(N_);
        std::vector<std::vector<RatPoly>> E(d_, std::vector<RatPoly>(d_, RatPoly(d_)));
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) {
                for (int k = 0; k < d_; ++k) E[i][j] = E[i][j] + mul_truncated(jac[k][i], jac[k][j], N_);
                if (i == j) E[i][j].add_term(Monomial(d_), Rational(-1));
                if (E[i][j].lowest_degree() == 0)
                    throw SpecError(ErrorClass::Invariant, 0,
                                    "d0U not unitary: Neumann series for Omega not applicable");
            }
        omega_.assign(d_, std::vector<RatPoly>(d_, RatPoly(d_)));
        std::vector<std::vector<RatPoly>> power(d_, std::vector<RatPoly>(d_, RatPoly(d_)));
        for (int i = 0; i < d_; ++i) {
            omega_[i][i] = RatPoly::constant(d_, Rational(1));
            power[i][i] = RatPoly::constant(d_, Rational(1));
        }
        for (int k = 1; k <= N_; ++k) {
            std::vector<std::vector<RatPoly>> next(d_, std::vector<RatPoly>(d_, RatPoly(d_)));
            bool all_zero = true;
            for (int i = 0; i < d_; ++i)
                for (int j = 0; j < d_; ++j) {
                    for (int l = 0; l < d_; ++l)
                        next[i][j] = next[i][j] - mul_truncated(power[i][l], E[l][j], N_);
                    all_zero &= next[i][j].is_zero();
                }
            power = next;
            for (int i = 0; i < d_; ++i)
                for (int j = 0; j < d_; ++j) omega_[i][j] = omega_[i][j] + power[i][j];
            if (all_zero) break;
        }
    }

    void build_inv_jacobian() {
        // dU^{-T} = J0 sum (-F^T)^k with dU = J0 (Id + F); J0 orthogonal rational
        std::vector<std::vector<RatPoly>> jac(d_, std::vector<RatPoly>(d_, RatPoly(d_)));
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) jac[i][j] = umap_[i].derivative(j).truncated(N_);
        std::vector<std::vector<Rational>> j0(d_, std::vector<Rational>(d_));
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) j0[i][j] = jac[i][j].coeff(Monomial(d_));
        // F = J0^T dU - Id (J0^{-1} = J0^T by unitarity)
        std::vector<std::vector<RatPoly>> F(d_, std::vector<RatPoly>(d_, RatPoly(d_)));
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) {
                for (int k = 0; k < d_; ++k) F[i][j] = F[i][j] + jac[k][j].scaled(j0[k][i]);
                if (i == j) F[i][j].add_term(Monomial(d_), Rational(-1));
            }
        // S = sum (-F^T)^k
        std::vector<std::vector<RatPoly>> S(d_, std::vector<RatPoly>(d_, RatPoly(d_)));
        std::vector<std::vector<RatPoly>> power(d_, std::vector<RatPoly>(d_, RatPoly(d_)));
        for (int i = 0; i < d_; ++i) {
            S[i][i] = RatPoly::constant(d_, Rational(1));
            power[i][i] = RatPoly::constant(d_, Rational(1));
        }
        for (int k = 1; k <= N_; ++k) {
            std::vector<std::vector<RatPoly>> next(d_, std::vector<RatPoly>(d_, RatPoly(d_)));
            bool all_zero = true;
            for (int i = 0; i < d_; ++i)
                for (int j = 0; j < d_; ++j) {
                    for (int l = 0; l < d_; ++l)
                        next[i][j] = next[i][j] - mul_truncated(power[i][l], F[j][l], N_);
                    all_zero &= next[i][j].is_zero();
                }
            power = next;
            for (int i = 0; i < d_; ++i)
                for (int j = 0; j < d_; ++j) S[i][j] = S[i][j] + power[i][j];
            if (all_zero) break;
        }
        // inv_jt = J0 * S
        inv_jt_.assign(d_, std::vector<RatPoly>(d_, RatPoly(d_)));
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j)
                for (int k = 0; k < d_; ++k) inv_jt_[i][j] = inv_jt_[i][j] + S[k][j].scaled(j0[i][k]);
    }

    int d_, N_, nu_under_;
    std::vector<int> perm_, nu_;
    std::vector<Rational> t_;
    RingCtxPtr ring_;
    std::vector<RatPoly> umap_;
    RatPoly vt_;
    std::vector<std::vector<RatPoly>> omega_;
    std::vector<std::vector<RatPoly>> inv_jt_;
};

// Obstruction record with the exact residual that is provably outside Im L0.
struct Obstruction {
    int ell_degree;       // homogeneous degree of the unresolved ell coefficient
    int residual_degree;  // degree of the residual component
    RPoly residual;
};

struct EikonalSolution {
    RPoly ell;                 // h-independent part (ell_0)
    std::vector<RPoly> ell_h;  // transport corrections, index = h-order (ell_h[0] unused)
    int solved_to = 0;         // all w0 components of degree <= solved_to vanish
    std::optional<Obstruction> obstruction;
};

namespace detail_eik {

// L0 applied to a homogeneous polynomial, per the split nu_under == nu1 or not.
inline RPoly apply_l0(const EikonalContext& ctx, const RPoly& u) {
    int d = ctx.dim();
    RPoly out(d);
    auto gu = u.gradient();
    if (ctx.nu_under() == ctx.nu1()) {
        // 2 grad(V_{nu1}) . grad(u) + 2 l01^{nu1-1} grad(l01) . grad(u)
        //   + (nu1-1) l01^{nu1-2} |grad l01|^2 u
        RatPoly vpart(d);
        for (int i = 0; i < d; ++i)
            if (ctx.nu()[i] == ctx.nu1()) {
                Monomial m(d);
                m.e[i] = ctx.nu()[i];
                vpart.add_term(m, ctx.t()[i]);
            }
        auto gv = vpart.gradient();
        for (int i = 0; i < d; ++i)
            out = out + mul_truncated(lift(gv[i], d), gu[i], ctx.truncation()).scaled(RingElem(2));
        RingElem c = ctx.leading_coefficient();
        RPoly x1pow = RPoly::constant(d, RingElem(1));
        for (int k = 0; k < ctx.nu1() - 2; ++k)
            x1pow = mul_truncated(x1pow, RPoly::variable(d, 0, RingElem(1)), ctx.truncation());
        // 2 c^{nu1-1} x1^{nu1-1} c du/dx1 = 2 c^{nu1} x1^{nu1-1} du/dx1
        RingElem cnu = RingElem(1);
        for (int k = 0; k < ctx.nu1(); ++k) cnu = cnu * c;
        RPoly term = mul_truncated(mul_truncated(x1pow, RPoly::variable(d, 0, RingElem(1)), ctx.truncation()),
                                   gu[0], ctx.truncation());
        out = out + term.scaled(cnu * RingElem(2));
        // (nu1-1) c^{nu1-2} x1^{nu1-2} c^2 u = (nu1-1) c^{nu1} x1^{nu1-2} u
        out = out + mul_truncated(x1pow, u, ctx.truncation()).scaled(cnu * RingElem(ctx.nu1() - 1));
    } else {
        RatPoly vpart(d);
        for (int i = 0; i < d; ++i)
            if (ctx.nu()[i] == ctx.nu_under()) {
                Monomial m(d);
                m.e[i] = ctx.nu()[i];
                vpart.add_term(m, ctx.t()[i]);
            }
        auto gv = vpart.gradient();
        for (int i = 0; i < d; ++i)
            out = out + mul_truncated(lift(gv[i], d), gu[i], ctx.truncation()).scaled(RingElem(2));
    }
    return out;
}

inline std::vector<Monomial> homogeneous_basis(int d, int deg) {
    std::vector<Monomial> out;
    Monomial m(d);
    std::function<void(int, int)> rec = [&](int var, int left) {
        if (var == d - 1) {
            m.e[var] = left;
            out.push_back(m);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            m.e[var] = k;
            rec(var + 1, left - k);
        }
    };
    rec(0, deg);
    return out;
}

// Exact Gaussian elimination over the coefficient field; returns a solution of
// L0 u = -r on P^j when consistent, or confirms rank deficiency.
struct DenseSolve {
    bool consistent;
    RPoly solution;  // valid when consistent
};

inline DenseSolve solve_l0_dense(const EikonalContext& ctx, int j, const RPoly& residual) {
    int d = ctx.dim();
    auto dom = homogeneous_basis(d, j);
    auto ran = homogeneous_basis(d, j + ctx.nu_under() - 2);
    std::map<Monomial, int> ran_index;
    for (size_t i = 0; i < ran.size(); ++i) ran_index[ran[i]] = static_cast<int>(i);
    size_t R = ran.size(), C = dom.size();
    std::vector<std::vector<RingElem>> A(R, std::vector<RingElem>(C + 1));
    for (size_t c = 0; c < C; ++c) {
        RPoly u(d);
        u.add_term(dom[c], RingElem(1));
        RPoly img = apply_l0(ctx, u);
        for (auto& [m, coef] : img.terms()) {
            auto it = ran_index.find(m);
            if (it == ran_index.end()) throw std::logic_error("L0 image leaves the homogeneous range");
            A[it->second][c] = coef;
        }
    }
    for (auto& [m, coef] : residual.terms()) {
        auto it = ran_index.find(m);
        if (it == ran_index.end()) throw std::logic_error("residual outside the homogeneous range");
        A[it->second][C] = RingElem() - coef;
    }
    // row-reduce
    size_t row = 0;
    std::vector<int> pivot_col;
    for (size_t col = 0; col < C && row < R; ++col) {
        size_t piv = row;
        while (piv < R && A[piv][col].is_zero()) ++piv;
        if (piv == R) continue;
        std::swap(A[row], A[piv]);
        RingElem inv = A[row][col].inverse();
        for (size_t c2 = col; c2 <= C; ++c2) A[row][c2] = A[row][c2] * inv;
        for (size_t r2 = 0; r2 < R; ++r2) {
            if (r2 == row || A[r2][col].is_zero()) continue;
            RingElem f = A[r2][col];
            for (size_t c2 = col; c2 <= C; ++c2) A[r2][c2] = A[r2][c2] - f * A[row][c2];
        }
        pivot_col.push_back(static_cast<int>(col));
        ++row;
    }
    for (size_t r2 = row; r2 < R; ++r2)
        if (!A[r2][C].is_zero()) return {false, RPoly(d)};
    DenseSolve out{true, RPoly(d)};
    for (size_t r2 = 0; r2 < row; ++r2)
        out.solution.add_term(dom[pivot_col[r2]], A[r2][C]);
    return out;
}

}  // namespace detail_eik

// Leading linear solution ell_0 = c xi_1 with c the ring generator.
inline EikonalSolution leading_ell(const EikonalContext& ctx) {
    EikonalSolution sol;
    sol.ell = RPoly::variable(ctx.dim(), 0, ctx.leading_coefficient());
    sol.solved_to = ctx.nu1() - 1;  // the degree-(nu1 - 1) residual cancels exactly
    return sol;
}

// One step: find the lowest nonvanishing residual degree and try to remove it.
// Returns false when nothing was solved (done, or an obstruction was recorded).
inline bool solve_order(const EikonalContext& ctx, EikonalSolution& state) {
    if (state.obstruction) return false;
    RPoly w0 = ctx.eikonal_residual(state.ell);
    int solve_cap = ctx.truncation();  // residual components up to N are exact
    int D = w0.lowest_degree();
    if (D < 0 || D > solve_cap) {
        state.solved_to = solve_cap;
        return false;
    }
    int j = D - ctx.nu_under() + 2;
    RPoly comp = w0.homogeneous_part(D);
    int d = ctx.dim();

    bool diag_full = ctx.nu1() == 2;     // L0 positive diagonal on every monomial
    bool diag_quad = ctx.nu1() > 2 && ctx.nu_under() == 2;  // case with quadratic directions
    bool shift_single = false;
    int single_dir = -1;
    {
        int count_min = 0;
        for (int i = 0; i < d; ++i)
            if (ctx.nu()[i] == ctx.nu_under()) {
                ++count_min;
                single_dir = i;
            }
        shift_single = !diag_full && !diag_quad && count_min == 1 && single_dir != 0 &&
                       ctx.nu()[0] == *std::max_element(ctx.nu().begin(), ctx.nu().end());
    }

    RPoly u(d);
    bool solved = true;
    if (diag_full || diag_quad) {
        for (auto& [m, coef] : comp.terms()) {
            Rational lam = 0;
            for (int i = 0; i < d; ++i)
                if (ctx.nu()[i] == 2) lam += 4 * (ctx.t()[i] < 0 ? -ctx.t()[i] : ctx.t()[i]) * m.e[i];
            if (diag_full) lam += 4 * (-ctx.t()[0]);
            if (lam == 0) {
                solved = false;  // pure monomial in the non-quadratic variables
                break;
            }
            u.add_term(m, (RingElem() - coef) * RingElem(Rational(1) / lam));
        }
    } else if (shift_single) {
        // L0 = 2 nu_i t_i x_i^{nu_i - 1} d/dx_i on the unique least-degenerate direction
        int nu_i = ctx.nu()[single_dir];
        Rational t_i = ctx.t()[single_dir];
        for (auto& [m, coef] : comp.terms()) {
            if (m.e[single_dir] < nu_i - 1) {
                solved = false;
                break;
            }
            Monomial pre(m);
            pre.e[single_dir] -= nu_i - 2;
            Rational lam = 2 * nu_i * t_i * pre.e[single_dir];
            u.add_term(pre, (RingElem() - coef) * RingElem(Rational(1) / lam));
        }
    } else {
        auto dense = detail_eik::solve_l0_dense(ctx, j, comp);
        solved = dense.consistent;
        u = dense.solution;
    }

    if (!solved) {
        // confirm by exact rank computation over the full homogeneous basis
        auto dense = detail_eik::solve_l0_dense(ctx, j, comp);
        if (dense.consistent) {
            // structured path was too conservative; accept the dense solution
            u = dense.solution;
        } else {
            state.solved_to = D - 1;
            state.obstruction = Obstruction{j, D, comp};
            return false;
        }
    }
    state.ell = state.ell + u;
    state.solved_to = D;
    return true;
}

// Solve the eikonal equation as far as the hierarchy admits.
inline EikonalSolution solve_eikonal(const EikonalContext& ctx) {
    EikonalSolution sol = leading_ell(ctx);
    while (solve_order(ctx, sol)) {
    }
    return sol;
}

// Full residual of the h-graded hierarchy at h-order jh, given ell = sum_k h^k ell_h[k]:
//   w_j = [2 Omega grad V . grad ell + ell^{nu1-1} (Omega grad ell . grad ell)]_j
//         - lap(ell_{j-1}) o U            (nu1 = 2 form of the cubic term)
inline RPoly transport_residual(const EikonalContext& ctx, const EikonalSolution& sol, int jh) {
    int d = ctx.dim();
    RPoly out(d);
    std::vector<std::vector<RPoly>> grads;
    for (int k = 0; k <= jh; ++k)
        grads.push_back((k < static_cast<int>(sol.ell_h.size()) ? sol.ell_h[k] : RPoly(d)).gradient());
    std::vector<RPoly> gv;
    for (auto& g : ctx.tilde_v().gradient()) gv.push_back(lift(g, d));
    for (int i = 0; i < d; ++i)
        for (int l = 0; l < d; ++l)
            out = out + mul_truncated(lift(ctx.omega_entry(i, l), d),
                                      mul_truncated(gv[l], grads[jh][i], ctx.truncation()),
                                      ctx.truncation())
                            .scaled(RingElem(2));
    for (int a = 0; a <= jh; ++a)
        for (int b = 0; a + b <= jh; ++b) {
            int c = jh - a - b;
            RPoly inner(d);
            for (int i = 0; i < d; ++i)
                for (int l = 0; l < d; ++l)
                    inner = inner + mul_truncated(lift(ctx.omega_entry(i, l), d),
                                                  mul_truncated(grads[b][l], grads[c][i],
                                                                ctx.truncation()),
                                                  ctx.truncation());
            out = out + mul_truncated(a < static_cast<int>(sol.ell_h.size()) ? sol.ell_h[a] : RPoly(d),
                                      inner, ctx.truncation());
        }
    if (jh >= 1) out = out - ctx.laplacian_pullback(sol.ell_h[jh - 1]);
    return out;
}

// Transport corrections in powers of h, implemented for nu_1 = 2 where L0 is
// invertible on every homogeneous space. ell_h[j] solves the j-th transport equation.
inline void solve_transports(const EikonalContext& ctx, EikonalSolution& sol, int h_orders) {
    if (ctx.nu1() != 2)
        throw SpecError(ErrorClass::Assumption, 0, "transport hierarchy implemented for nu1 = 2 only");
    int d = ctx.dim();
    sol.ell_h.assign(h_orders + 1, RPoly(d));
    sol.ell_h[0] = sol.ell;
    auto residual_at = [&](int jh) { return transport_residual(ctx, sol, jh); };

    for (int jh = 1; jh <= h_orders; ++jh) {
        int guard = 0;
        while (true) {
            RPoly w = residual_at(jh);
            int D = w.lowest_degree();
            if (D < 0 || D > ctx.truncation() - 2) break;
            RPoly comp = w.homogeneous_part(D);
            RPoly u(d);
            for (auto& [m, coef] : comp.terms()) {
                Rational lam = 4 * (-ctx.t()[0]);
                for (int i = 0; i < d; ++i)
                    if (ctx.nu()[i] == 2) lam += 4 * (ctx.t()[i] < 0 ? -ctx.t()[i] : ctx.t()[i]) * m.e[i];
                u.add_term(m, (RingElem() - coef) * RingElem(Rational(1) / lam));
            }
            sol.ell_h[jh] = sol.ell_h[jh] + u;
            if (++guard > ctx.truncation() + 4)
                throw std::logic_error("transport solve failed to terminate");
        }
    }
}

// --- residual and elliptization report --------------------------------------------

struct ResidualReport {
    int lowest_residual_degree = -1;  // -1: residual vanishes within the truncation window
    bool diagonal_exact = false;      // xi_i^{nu_i} coefficients of V + l^{nu1}/nu1 equal |t_i|
    bool cross_terms_bounded = false;  // every remainder monomial has anisotropic weight > 1
    int checked_to = 0;
};

inline ResidualReport residual_report(const EikonalContext& ctx, const EikonalSolution& sol) {
    ResidualReport rep;
    RPoly w0 = ctx.eikonal_residual(sol.ell);
    int solve_cap = ctx.truncation();
    int D = w0.lowest_degree();
    rep.lowest_residual_degree = (D < 0 || D > solve_cap) ? -1 : D;
    rep.checked_to = solve_cap;

    // elliptization: V + ell^{nu1}/nu1 = sum |t_i| xi^{nu_i} (1 + O(x))
    RPoly phase = lift(ctx.tilde_v(), ctx.dim());
    RPoly pw = RPoly::constant(ctx.dim(), RingElem(1));
    for (int k = 0; k < ctx.nu1(); ++k) pw = mul_truncated(pw, sol.ell, ctx.truncation());
    phase = phase + pw.scaled(RingElem(Rational(1, ctx.nu1())));
    rep.diagonal_exact = true;
    for (int i = 0; i < ctx.dim(); ++i) {
        Monomial m(ctx.dim());
        m.e[i] = ctx.nu()[i];
        Rational expect = ctx.t()[i] < 0 ? -ctx.t()[i] : ctx.t()[i];
        if (!(phase.coeff(m) == RingElem(expect))) rep.diagonal_exact = false;
        phase.add_term(m, RingElem() - phase.coeff(m));
    }
    rep.cross_terms_bounded = true;
    for (auto& [m, c] : phase.terms()) {
        Rational w = 0;
        for (int i = 0; i < ctx.dim(); ++i) w += Rational(m.e[i], ctx.nu()[i]);
        if (!(w > 1)) rep.cross_terms_bounded = false;
    }
    return rep;
}

// Canonical dump: one line per term, "<coeff> <e1> ... <ed>", graded-lex order.
inline std::string dump_polynomial(const RPoly& p) {
    std::ostringstream os;
    for (auto& [m, c] : p.terms()) {
        os << c.str();
        for (int e : m.e) os << " " << e;
        os << "\n";
    }
    return os.str();
}

}  // namespace witten
