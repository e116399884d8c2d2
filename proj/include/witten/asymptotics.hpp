#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "witten/labeling.hpp"
#include "witten/potential.hpp"

namespace witten {

// k(x*) = sum_i 1/(2 nu_i), the degeneracy weight.
inline Rational k_index(const CriticalPoint& cp) {
    Rational k = 0;
    for (int nu : cp.orders) k += Rational(1, 2 * nu);
    return k;
}

// View of a saddle with the drop direction (t_1 < 0) moved first.
struct DropView {
    std::vector<int> nu;
    std::vector<Rational> t;
    int nu1() const { return nu[0]; }
};

inline DropView drop_first(const CriticalPoint& s) {
    if (!s.is_saddle()) throw std::invalid_argument("not an index-1 even critical point");
    int drop = -1;
    for (size_t i = 0; i < s.coeffs.size(); ++i)
        if (s.coeffs[i] < 0) drop = static_cast<int>(i);
    DropView v;
    v.nu.push_back(s.orders[drop]);
    v.t.push_back(s.coeffs[drop]);
    for (size_t i = 0; i < s.coeffs.size(); ++i)
        if (static_cast<int>(i) != drop) {
            v.nu.push_back(s.orders[i]);
            v.t.push_back(s.coeffs[i]);
        }
    return v;
}

// Partition j(m) = j_inf ⊔ j_1 ⊔ j_2 by which quasimode construction applies.
enum class SaddleCase {
    JInfUnitaryLinear,  // U linear with unitary differential
    JInfNu1Eq2,         // drop direction quadratic
    JInfDim1,           // one-dimensional
    J1Case3,            // quadratic directions exist, drop is not among them
    J1Case5,            // unique minimal order, attained off-drop, nu_1 maximal
    J2,                 // everything else
};

struct SaddleClass {
    SaddleCase cls;
    ExtRational gamma;
    bool in_j_inf() const {
        return cls == SaddleCase::JInfUnitaryLinear || cls == SaddleCase::JInfNu1Eq2 ||
               cls == SaddleCase::JInfDim1;
    }
};

inline const char* saddle_case_name(SaddleCase c) {
    switch (c) {
        case SaddleCase::JInfUnitaryLinear: return "j_inf:unitary-linear";
        case SaddleCase::JInfNu1Eq2: return "j_inf:nu1=2";
        case SaddleCase::JInfDim1: return "j_inf:d=1";
        case SaddleCase::J1Case3: return "j_1:quadratic-directions";
        case SaddleCase::J1Case5: return "j_1:unique-minimal";
        case SaddleCase::J2: return "j_2";
    }
    return "?";
}

// gamma(s): +inf on j_inf; otherwise finite, computed from the nu statistics of s
// and the global nu_bar. The inner min collapses to -2/nu_hat exactly when
// nu_hat * nu_under >= nu_bar^s.
inline SaddleClass classify_saddle(const CriticalPoint& s, int global_nu_bar) {
    DropView v = drop_first(s);
    int d = static_cast<int>(v.nu.size());
    SaddleClass out;

    auto single_stats = [&] { return nu_stats({s}); };

    if (s.linear_map()) {
        out.cls = SaddleCase::JInfUnitaryLinear;
        out.gamma = ExtRational::inf();
        return out;
    }
    if (v.nu1() == 2) {
        out.cls = SaddleCase::JInfNu1Eq2;
        out.gamma = ExtRational::inf();
        return out;
    }
    if (d == 1) {
        out.cls = SaddleCase::JInfDim1;
        out.gamma = ExtRational::inf();
        return out;
    }
    NuStats st = single_stats();
    int nu_under = st.nu_under;    // min_i nu_i at s
    int nu_bar_s = st.nu_bar;      // max_i nu_i at s
    bool case3 = v.nu1() > 2 && nu_under == 2;
    bool case5 = false;
    {
        int count_min = 0;
        bool min_off_drop = false;
        for (size_t i = 0; i < v.nu.size(); ++i)
            if (v.nu[i] == nu_under) {
                ++count_min;
                if (i != 0) min_off_drop = true;
            }
        case5 = count_min == 1 && min_off_drop && v.nu1() == nu_bar_s;
    }
    if (case3 || case5) {
        out.cls = case3 ? SaddleCase::J1Case3 : SaddleCase::J1Case5;
        if (!st.nu_hat.finite())
            throw SpecError(ErrorClass::Assumption, 0,
                            "nu_hat infinite inside j_1 (cannot evaluate gamma)");
        Rational nu_hat(st.nu_hat.value);
        Rational lhs = Rational(-2) / nu_hat;
        Rational rhs = Rational(2) * (nu_hat - nu_under) / nu_bar_s - Rational(2) / nu_under;
        Rational inner = lhs < rhs ? lhs : rhs;
        if (!st.nu_under_star.finite())
            throw SpecError(ErrorClass::Assumption, 0, "nu_under_star infinite at an index-1 point");
        Rational star = Rational(-2) / Rational(st.nu_under_star.value);
        Rational outer = star > inner ? star : inner;
        out.gamma = ExtRational(outer + Rational(2) / nu_bar_s + Rational(2) / global_nu_bar);
        return out;
    }
    out.cls = SaddleCase::J2;
    if (!st.nu_under_star.finite())
        throw SpecError(ErrorClass::Assumption, 0, "nu_under_star infinite at an index-1 point");
    out.gamma = ExtRational(Rational(2) / nu_bar_s - Rational(2) / Rational(st.nu_under_star.value) +
                            Rational(2) / global_nu_bar);
    return out;
}

// mu(m) = min over s in j(m) of (2 + 2k(s) - 2k(m) - 2/nu_1^s); tilde_j = argmin set.
struct MuResult {
    Rational mu;
    std::vector<int> tilde_j;  // positions within the passed j_m vector
};

inline Rational saddle_weight(const CriticalPoint& s) {  // 2k(s) - 2/nu_1^s
    DropView v = drop_first(s);
    return 2 * k_index(s) - Rational(2, v.nu1());
}

inline MuResult mu_exponent(const CriticalPoint& m, const std::vector<CriticalPoint>& j_m) {
    if (j_m.empty()) throw std::invalid_argument("mu_exponent: empty j(m)");
    MuResult out;
    Rational best;
    for (size_t i = 0; i < j_m.size(); ++i) {
        Rational w = saddle_weight(j_m[i]);
        if (i == 0 || w < best) best = w;
    }
    for (size_t i = 0; i < j_m.size(); ++i)
        if (saddle_weight(j_m[i]) == best) out.tilde_j.push_back(static_cast<int>(i));
    out.mu = 2 + best - 2 * k_index(m);
    return out;
}

// z(m,s): the Gamma-function prefactor of the Eyring-Kramers law.
inline double z_prefactor(const CriticalPoint& m, const CriticalPoint& s) {
    for (auto& t : m.coeffs)
        if (t <= 0) throw std::invalid_argument("z_prefactor: m is not a minimum");
    DropView vs = drop_first(s);
    int d = m.dim();
    auto g = [](double x) { return std::tgamma(x); };
    double nu1 = vs.nu1();
    double t1 = std::abs(to_double(vs.t[0]));
    double z = std::pow(nu1 * std::pow(2 * t1, 1.0 / nu1) / (2 * g(1.0 / nu1)), 2.0);
    for (int i = 0; i < d; ++i) {
        double nus = vs.nu[i], ts = std::abs(to_double(vs.t[i]));
        double num = m.orders[i], tm = to_double(m.coeffs[i]);
        z *= g(1.0 / nus) / g(1.0 / num);
        z *= num * std::pow(2 * tm, 1.0 / num) / (nus * std::pow(2 * ts, 1.0 / nus));
    }
    return z;
}

// Per-minimum law entry of the sharp expansion lambda = v h^mu exp(-2S/h)(1+O(h^beta)).
struct LawEntry {
    int minimum = -1;
    bool is_underline = false;
    ExtRational S;
    Rational mu;          // meaningless for underline
    double v = 0;         // sum of z over tilde_j
    ExtRational beta;     // error exponent
    ExtRational alpha;    // min over j(m) of gamma(s)
    std::vector<int> j_set;
    std::vector<int> tilde_j;  // subset of j_set
    std::vector<SaddleClass> classes;  // aligned with j_set
};

inline LawEntry law_for_minimum(const PotentialSpec& spec, const LabelingResult& labeling,
                                int minimum) {
    const auto& entry = labeling.entry_for(minimum);
    LawEntry law;
    law.minimum = minimum;
    law.S = entry.S;
    if (entry.is_underline) {
        law.is_underline = true;
        law.alpha = ExtRational::inf();
        law.beta = ExtRational::inf();
        return law;
    }
    law.j_set = entry.j_set;
    int global_nu_bar = nu_stats(spec.critical_points).nu_bar;
    const CriticalPoint& m = spec.critical_points[minimum];
    std::vector<CriticalPoint> saddles;
    for (int si : entry.j_set) saddles.push_back(spec.critical_points[si]);
    MuResult mu = mu_exponent(m, saddles);
    law.mu = mu.mu;
    for (int i : mu.tilde_j) law.tilde_j.push_back(entry.j_set[i]);
    for (int i : mu.tilde_j) law.v += z_prefactor(m, saddles[i]);

    // beta = min(2/nu_bar^{j(m)}, beta', 2/nu_bar^m), beta' the spectral gap of the weights
    int nu_bar_j = 0;
    for (auto& s : saddles) nu_bar_j = std::max(nu_bar_j, s.max_order());
    ExtRational beta1(Rational(2, nu_bar_j));
    ExtRational beta_prime = ExtRational::inf();  // min over non-minimizing s (min empty = +inf)
    Rational best = saddle_weight(saddles[mu.tilde_j[0]]);
    for (auto& s : saddles) {
        Rational w = saddle_weight(s);
        if (w != best) beta_prime = min(beta_prime, ExtRational(w - best));
    }
    law.beta = min(min(beta1, beta_prime), ExtRational(Rational(2, m.max_order())));

    law.alpha = ExtRational::inf();
    for (auto& s : saddles) {
        law.classes.push_back(classify_saddle(s, global_nu_bar));
        law.alpha = min(law.alpha, law.classes.back().gamma);
    }
    return law;
}

inline std::vector<LawEntry> laws_for_spec(const PotentialSpec& spec, const LabelingResult& labeling) {
    std::vector<LawEntry> out;
    for (auto& e : labeling.entries) out.push_back(law_for_minimum(spec, labeling, e.minimum));
    return out;
}

// Leading Eyring-Kramers evaluation; exactly 0 for the ground state.
inline double eyring_kramers(const LawEntry& law, double h) {
    if (law.is_underline) return 0.0;
    return law.v * std::pow(h, to_double(law.mu)) * std::exp(-2.0 * law.S.as_double() / h);
}

// Leading term of C_{s,h}^{-1} = nu1 (nu1 h)^{-1/nu1} Gamma(1/nu1)^{-1}.
inline double normalizing_constant_leading(int nu1, double h) {
    if (nu1 < 2 || nu1 % 2 != 0) throw std::invalid_argument("nu1 must be even and >= 2");
    return nu1 * std::pow(nu1 * h, -1.0 / nu1) / std::tgamma(1.0 / nu1);
}

// alpha_0 = min over minima of alpha(m), and which sufficient criterion certifies
// each saddle's positivity (the survey order of the admissibility discussion).
struct AlphaCertificate {
    int saddle;
    std::string criterion;
    ExtRational gamma;
};

struct AlphaReport {
    ExtRational alpha0 = ExtRational::inf();
    bool ok = true;  // alpha0 > 0
    std::vector<AlphaCertificate> certificates;
};

inline std::string certify_saddle(const CriticalPoint& s, int global_nu_bar) {
    DropView v = drop_first(s);
    NuStats st = nu_stats({s});
    int d = static_cast<int>(v.nu.size());
    if (s.linear_map()) return "unitary-linear U";
    if (v.nu1() == 2) return "nu1 = 2";
    if (d == 1) return "d = 1";
    if (st.nu_under_star.finite() && 2 * st.nu_under_star.value > global_nu_bar)
        return "nu_under_star > nu_bar/2";
    if (d == 2) return "d = 2";
    {
        // all orders share the top value except a unique smaller one
        int count_min = 0;
        bool two_level = true;
        for (int nu : v.nu) {
            if (nu == st.nu_under)
                ++count_min;
            else if (nu != st.nu_bar)
                two_level = false;
        }
        if (two_level && count_min == 1 && st.nu_under != st.nu_bar) return "unique lower order";
        if (two_level && st.nu_under == 2 && st.nu_bar > 2) return "two degrees with 2";
        if (st.nu_under == st.nu_bar) return "homogeneous";
    }
    return "direct gamma computation";
}

inline AlphaReport alpha_zero(const PotentialSpec& spec, const std::vector<LawEntry>& laws) {
    AlphaReport rep;
    int global_nu_bar = nu_stats(spec.critical_points).nu_bar;
    std::set<int> seen;
    for (auto& law : laws) {
        if (law.is_underline) continue;
        rep.alpha0 = min(rep.alpha0, law.alpha);
        for (int si : law.j_set)
            if (seen.insert(si).second)
                rep.certificates.push_back({si, certify_saddle(spec.critical_points[si], global_nu_bar),
                                            classify_saddle(spec.critical_points[si], global_nu_bar).gamma});
    }
    rep.ok = rep.alpha0 > ExtRational(Rational(0));
    return rep;
}

// --- reports ---------------------------------------------------------------------

inline std::string asymptotics_report(const std::vector<LawEntry>& laws, const PotentialSpec& spec) {
    std::ostringstream os;
    os << "minimum | S | mu | v | beta | alpha | tilde_j\n";
    for (auto& law : laws) {
        os << "#" << law.minimum << " | " << law.S.str() << " | ";
        if (law.is_underline) {
            os << "- | 0 | - | inf | {}\n";
            continue;
        }
        os << to_string(law.mu) << " | ";
        os.precision(17);
        os << law.v << " | " << law.beta.str() << " | " << law.alpha.str() << " | {";
        for (size_t i = 0; i < law.tilde_j.size(); ++i) os << (i ? "," : "") << "#" << law.tilde_j[i];
        os << "}\n";
    }
    (void)spec;
    return os.str();
}

inline std::string asymptotics_csv(const std::vector<LawEntry>& laws) {
    std::ostringstream os;
    os << "minimum,S,mu,v,beta,alpha\n";
    os.precision(17);
    for (auto& law : laws) {
        os << law.minimum << "," << law.S.str() << ",";
        if (law.is_underline)
            os << ",0,,inf\n";
        else
            os << to_string(law.mu) << "," << law.v << "," << law.beta.str() << "," << law.alpha.str()
               << "\n";
    }
    return os.str();
}

}  // namespace witten
