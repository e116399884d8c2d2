#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "witten/asymptotics.hpp"
#include "witten/labeling.hpp"
#include "witten/potential.hpp"

namespace witten {

// Triple well with equal well values and equal saddle values (Gener fails):
// interaction matrix assembly and its closed-form spectrum split.
//
// Chain geometry: underline_m -- s1 -- m1 -- s2 -- m2 with V(s1) = V(s2) and the
// three well values equal; s1, s2 homogeneous, nu^{s2} < nu^{s1} = nu_bar, d > 2,
// nu^{s2}/nu^{s1} > 1 - 2/d.
struct TripleWellModel {
    int d = 0;
    int nu_s1 = 0, nu_s2 = 0;
    int m_under = -1, m1 = -1, m2 = -1, s1 = -1, s2 = -1;  // indices into the spec
    Rational S;          // common barrier sigma - V_m
    Rational mu;         // 2 - 2k(m) + (d-2)/nu^{s1}
    Rational beta;       // (d-2)(1/nu^{s2} - 1/nu^{s1})
    bool split = true;   // false when nu_s1 == nu_s2 (Morse-like interaction regime)

    double c_under = 0, c_m1 = 0, c_m2 = 0;  // c_0 at the minima
    double z1_s1 = 0, z1_s2 = 0;
    double chat = 0, chat1 = 0, chat2 = 0, eta_gamma = 0;
    double alpha = 0;
    Eigen::Matrix2d M1;
    double m3 = 0;

    // Reduced interaction matrix M(h): the full matrix is h^mu exp(-2S/h) times
    // diag(0, M(h)) in the (underline, m1, m2) quasimode basis.
    Eigen::Matrix2d reduced(double h) const {
        Eigen::Matrix2d out;
        double hb = std::pow(h, to_double(beta));
        out(0, 0) = alpha + hb * M1(0, 0);
        out(0, 1) = hb * M1(0, 1);
        out(1, 0) = hb * M1(1, 0);
        out(1, 1) = hb * M1(1, 1);
        return out;
    }

    std::vector<double> predicted_spectrum(double h) const {
        double hb = std::pow(h, to_double(beta));
        return {0.0, m3 * hb, alpha};
    }
};

// c_0(x*)^{-2} = 4 prod_i 2 Gamma(1/nu_i) / (nu_i (2|t_i|)^{1/nu_i})
inline double c0_constant(const CriticalPoint& cp) {
    double inv2 = 4.0;
    for (size_t i = 0; i < cp.orders.size(); ++i) {
        double nu = cp.orders[i], t = std::abs(to_double(cp.coeffs[i]));
        inv2 *= 2.0 * std::tgamma(1.0 / nu) / (nu * std::pow(2.0 * t, 1.0 / nu));
    }
    return 1.0 / std::sqrt(inv2);
}

// z_1(s) = (nu_1 (2|t_1|)^{1/nu_1} / (2 Gamma(1/nu_1)))^2 c_0(s)^{-2}
inline double z1_constant(const CriticalPoint& s) {
    DropView v = drop_first(s);
    double nu1 = v.nu1(), t1 = std::abs(to_double(v.t[0]));
    double head = nu1 * std::pow(2.0 * t1, 1.0 / nu1) / (2.0 * std::tgamma(1.0 / nu1));
    double c0 = c0_constant(s);
    return head * head / (c0 * c0);
}

inline TripleWellModel triple_well_matrix(const PotentialSpec& spec, const LabelingResult& labeling,
                                          const std::vector<MatchedEvent>& events) {
    auto fail = [](const std::string& clause) {
        throw SpecError(ErrorClass::Assumption, 0, "triple-well assumption violated: " + clause);
    };
    auto minima = spec.minima();
    auto saddles = spec.saddles();
    if (minima.size() != 3 || saddles.size() != 2) fail("geometry (need 3 minima, 2 saddles)");
    TripleWellModel mw;
    mw.d = spec.dim;

    // equal well values and equal saddle values
    const Rational vm = spec.critical_points[minima[0]].value;
    for (int mi : minima)
        if (spec.critical_points[mi].value != vm) fail("equal well values");
    const Rational sigma = spec.critical_points[saddles[0]].value;
    for (int si : saddles)
        if (spec.critical_points[si].value != sigma) fail("equal saddle values");

    // homogeneous saddles
    for (int si : saddles) {
        const auto& s = spec.critical_points[si];
        for (int nu : s.orders)
            if (nu != s.orders[0]) fail("homogeneous saddles");
    }
    // chain structure from the adjacency: one saddle links two wells, the other links
    // one of those to the third
    std::map<int, std::set<int>> links;  // saddle -> minima
    for (auto& e : events) {
        links[e.saddle].insert(e.min_a);
        links[e.saddle].insert(e.min_b);
    }
    if (links.size() != 2) fail("each saddle must separate a pair of wells");
    for (auto& [s, ms] : links)
        if (ms.size() != 2) fail("each saddle must separate exactly two wells");
    // middle minimum belongs to both links
    int middle = -1;
    for (int mi : minima) {
        bool in_all = true;
        for (auto& [s, ms] : links) in_all &= ms.count(mi) > 0;
        if (in_all) middle = mi;
    }
    if (middle < 0) fail("chain structure (no shared middle well)");
    mw.m1 = middle;

    int nu_a = spec.critical_points[saddles[0]].orders[0];
    int nu_b = spec.critical_points[saddles[1]].orders[0];
    if (nu_a == nu_b) {
        mw.split = false;  // interaction not split; report the regime instead of a law
        mw.nu_s1 = nu_a;
        mw.nu_s2 = nu_b;
        return mw;
    }
    mw.s1 = nu_a > nu_b ? saddles[0] : saddles[1];
    mw.s2 = nu_a > nu_b ? saddles[1] : saddles[0];
    mw.nu_s1 = spec.critical_points[mw.s1].orders[0];
    mw.nu_s2 = spec.critical_points[mw.s2].orders[0];

    // underline_m sits across s1 from the middle; m2 across s2
    for (int mi : links[mw.s1])
        if (mi != middle) mw.m_under = mi;
    for (int mi : links[mw.s2])
        if (mi != middle) mw.m2 = mi;
    if (mw.m_under < 0 || mw.m2 < 0 || mw.m_under == mw.m2) fail("chain structure");

    // equal k at the minima
    Rational k = k_index(spec.critical_points[mw.m_under]);
    if (k_index(spec.critical_points[mw.m1]) != k || k_index(spec.critical_points[mw.m2]) != k)
        fail("equal k at minima");
    // nu^{s1} must be the global nu_bar, d > 2 and the ratio condition
    int nu_bar = nu_stats(spec.critical_points).nu_bar;
    if (mw.nu_s1 != nu_bar) fail("nu^{s1} = nu_bar");
    if (!(spec.dim > 2)) fail("d > 2");
    if (!(Rational(mw.nu_s2, mw.nu_s1) > Rational(spec.dim - 2, spec.dim)))
        fail("nu^{s2}/nu^{s1} > 1 - 2/d");

    mw.S = sigma - vm;
    mw.mu = 2 - 2 * k + Rational(spec.dim - 2, mw.nu_s1);
    mw.beta = Rational(spec.dim - 2) * (Rational(1, mw.nu_s2) - Rational(1, mw.nu_s1));

    mw.c_under = c0_constant(spec.critical_points[mw.m_under]);
    mw.c_m1 = c0_constant(spec.critical_points[mw.m1]);
    mw.c_m2 = c0_constant(spec.critical_points[mw.m2]);
    mw.z1_s1 = z1_constant(spec.critical_points[mw.s1]);
    mw.z1_s2 = z1_constant(spec.critical_points[mw.s2]);

    double cu = mw.c_under, c1 = mw.c_m1, c2 = mw.c_m2;
    mw.chat = 1.0 / std::sqrt(1 / (cu * cu) + 1 / (c1 * c1) + 1 / (c2 * c2));
    mw.chat1 = 1.0 / std::sqrt(1 / (c1 * c1) + 1 / (cu * cu));
    mw.eta_gamma = c2 * c2 / (cu * cu) + c2 * c2 / (c1 * c1);
    mw.chat2 = 1.0 / std::sqrt(1 / (cu * cu) + 1 / (c1 * c1) +
                               mw.eta_gamma * mw.eta_gamma / (c2 * c2));

    mw.alpha = mw.chat1 * mw.chat1 * mw.z1_s1 * std::pow(cu / c1 + c1 / cu, 2.0);
    double g1 = mw.chat1 * c1 / cu;
    mw.M1(0, 0) = mw.z1_s2 * g1 * g1;
    mw.M1(0, 1) = mw.M1(1, 0) = -mw.z1_s2 * mw.chat1 * mw.chat2 * (c1 / cu) * (1 + mw.eta_gamma);
    mw.M1(1, 1) = mw.z1_s2 * mw.chat2 * mw.chat2 * std::pow(1 + mw.eta_gamma, 2.0);
    mw.m3 = mw.M1(1, 1);
    (void)labeling;
    return mw;
}

// Dense assembly of the reduced interaction matrix directly from the eta basis and
// the N entries; the closed forms above must match its spectrum. Kept separate from
// the closed-form path so the two can cross-check each other.
inline Eigen::Matrix2d triple_well_assembled(const TripleWellModel& mw, double h) {
    double cu = mw.c_under, c1 = mw.c_m1, c2 = mw.c_m2;
    // eta basis over (underline, m1, m2)
    Eigen::Vector3d eta1(mw.chat1 / c1, -mw.chat1 / cu, 0.0);
    Eigen::Vector3d eta2(mw.chat2 / cu, mw.chat2 / c1, -mw.chat2 * mw.eta_gamma / c2);
    double ha = std::pow(h, (mw.d - 2) / static_cast<double>(mw.nu_s1));
    double hb = std::pow(h, (mw.d - 2) / static_cast<double>(mw.nu_s2));
    // Ntilde_{a,b} = c(a) c(b) (-1)^{1-delta} sum_{s in j(a) cap j(b)} h^{(d-2)/nu^s} z1(s),
    // with j(under) = {s1}, j(m1) = {s1, s2}, j(m2) = {s2}
    auto c_of = [&](int i) { return i == 0 ? cu : (i == 1 ? c1 : c2); };
    auto common = [&](int a, int b) {
        auto j = [&](int i) {
            return i == 0 ? std::set<int>{1} : (i == 1 ? std::set<int>{1, 2} : std::set<int>{2});
        };
        std::set<int> ja = j(a), out;
        for (int s : j(b))
            if (ja.count(s)) out.insert(s);
        return out;
    };
    Eigen::Matrix3d N = Eigen::Matrix3d::Zero();
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            double acc = 0;
            for (int s : common(a, b)) acc += (s == 1 ? ha * mw.z1_s1 : hb * mw.z1_s2);
            N(a, b) = c_of(a) * c_of(b) * (a == b ? 1.0 : -1.0) * acc;
        }
    Eigen::Matrix2d M;
    M(0, 0) = eta1.dot(N * eta1);
    M(0, 1) = eta1.dot(N * eta2);
    M(1, 0) = eta2.dot(N * eta1);
    M(1, 1) = eta2.dot(N * eta2);
    return M / ha;
}

}  // namespace witten
