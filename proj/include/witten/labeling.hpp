#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "witten/potential.hpp"

namespace witten {

// Rectangular sampling grid over the spec box, d <= 3, values in double.
struct LabelGrid {
    int dim = 0;
    std::array<long, 3> n{1, 1, 1};
    std::array<double, 3> lo{0, 0, 0}, step{0, 0, 0};
    std::vector<double> value;

    long size() const { return static_cast<long>(value.size()); }
    long index(const std::array<long, 3>& c) const {
        return (c[2] * n[1] + c[1]) * n[0] + c[0];
    }
    std::array<long, 3> coords(long id) const {
        std::array<long, 3> c{0, 0, 0};
        c[0] = id % n[0];
        c[1] = (id / n[0]) % n[1];
        c[2] = id / (n[0] * n[1]);
        return c;
    }
    std::array<double, 3> point(long id) const {
        auto c = coords(id);
        return {lo[0] + step[0] * c[0], lo[1] + step[1] * c[1], lo[2] + step[2] * c[2]};
    }
    double max_step() const { return *std::max_element(step.begin(), step.begin() + dim); }
};

inline LabelGrid sample_grid(const PotentialSpec& spec, long npts) {
    if (spec.dim > 3) throw SpecError(ErrorClass::Dimension, 0, "grid labeling limited to d <= 3");
    if (npts < 64) throw SpecError(ErrorClass::Invariant, 0, "grid resolution below 64 per axis");
    LabelGrid g;
    g.dim = spec.dim;
    long total = 1;
    for (int i = 0; i < spec.dim; ++i) {
        g.n[i] = npts;
        g.lo[i] = to_double(spec.box[i].first);
        g.step[i] = (to_double(spec.box[i].second) - g.lo[i]) / static_cast<double>(npts - 1);
        total *= npts;
    }
    g.value.resize(total);
    std::vector<double> x(spec.dim);
    for (long id = 0; id < total; ++id) {
        auto p = g.point(id);
        for (int i = 0; i < spec.dim; ++i) x[i] = p[i];
        g.value[id] = spec.V.evaluate<double>(x);
    }
    return g;
}

// Sublevel-set merge tree by a union-find sweep in ascending value order.
struct MergeTree {
    struct Birth {
        long cell;
        double value;
    };
    struct Merge {
        double value;
        long cell;          // where the two components met
        long rep_a, rep_b;  // birth cells of the two merging components (rep_a keeps the lower birth)
        long side_a, side_b;  // adjacent cells on either side of the junction (local lakes)
    };
    LabelGrid grid;
    std::vector<Birth> births;
    std::vector<Merge> merges;
};

inline MergeTree build_merge_tree(const PotentialSpec& spec, long npts) {
    MergeTree tree;
    tree.grid = sample_grid(spec, npts);
    const LabelGrid& g = tree.grid;
    long total = g.size();

    std::vector<long> order(total);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](long a, long b) {
        if (g.value[a] != g.value[b]) return g.value[a] < g.value[b];
        return a < b;  // deterministic tie-break in lexicographic cell order
    });

    std::vector<long> parent(total, -1);   // -1: not yet activated
    std::vector<long> comp_birth(total, -1);  // root -> birth cell
    std::function<long(long)> find = [&](long a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };

    std::vector<std::pair<long, long>> nbroots;  // (root, neighbor cell on that side)
    for (long id : order) {
        nbroots.clear();
        auto c = g.coords(id);
        for (int ax = 0; ax < g.dim; ++ax) {
            for (int dir = -1; dir <= 1; dir += 2) {
                auto cc = c;
                cc[ax] += dir;
                if (cc[ax] < 0 || cc[ax] >= g.n[ax]) continue;
                long nb = g.index(cc);
                if (parent[nb] < 0) continue;  // not active yet
                long r = find(nb);
                bool known = false;
                for (auto& [rr, side] : nbroots) known |= rr == r;
                if (!known) nbroots.emplace_back(r, nb);
            }
        }
        if (nbroots.empty()) {
            parent[id] = id;
            comp_birth[id] = id;
            tree.births.push_back({id, g.value[id]});
            continue;
        }
        // attach to the component with the lowest (value, cell) birth; others merge into it
        auto older = [&](long ra, long rb) {
            long ba = comp_birth[ra], bb = comp_birth[rb];
            return g.value[ba] < g.value[bb] || (g.value[ba] == g.value[bb] && ba < bb);
        };
        size_t keep = 0;
        for (size_t i = 1; i < nbroots.size(); ++i)
            if (older(nbroots[i].first, nbroots[keep].first)) keep = i;
        parent[id] = nbroots[keep].first;
        for (size_t i = 0; i < nbroots.size(); ++i) {
            if (i == keep) continue;
            tree.merges.push_back({g.value[id], id, comp_birth[nbroots[keep].first],
                                   comp_birth[nbroots[i].first], nbroots[keep].second,
                                   nbroots[i].second});
            parent[nbroots[i].first] = nbroots[keep].first;
        }
    }
    // sanity: everything drains to a single root (box is connected)
    std::set<long> roots;
    for (long id = 0; id < total; ++id) roots.insert(find(id));
    if (roots.size() != 1) throw SpecError(ErrorClass::Invariant, 0, "merge tree has multiple roots");
    return tree;
}

// --- labeling against the declared critical set -----------------------------------

struct LabelingResult {
    std::vector<int> separating_saddles;         // indices into spec.critical_points
    struct Entry {
        int minimum;                             // index into spec.critical_points
        std::vector<int> j_set;                  // separating saddles (empty for underline_m)
        ExtRational sigma;                       // V(j(m)), +inf for underline_m
        ExtRational S;                           // sigma - V(m)
        bool is_underline = false;
    };
    std::vector<Entry> entries;                  // one per declared minimum
    int underline = -1;

    const Entry& entry_for(int minimum) const {
        for (auto& e : entries)
            if (e.minimum == minimum) return e;
        throw std::out_of_range("no labeling entry for minimum");
    }
};

// A matched merge event: grid event identified with a declared saddle, linking two
// declared minima (transitively across equal-value levels the linkage is by component).
struct MatchedEvent {
    int saddle;  // index into spec.critical_points
    int min_a, min_b;
};

namespace detail {

inline double default_value_tol(const PotentialSpec& spec, const LabelGrid& g) {
    // 4 * (max |grad V| on box) * grid spacing
    double max_grad = 0;
    std::vector<double> x(spec.dim);
    std::vector<RatPoly> grad = spec.V.gradient();
    for (long id = 0; id < g.size(); id += std::max<long>(1, g.size() / 100000)) {
        auto p = g.point(id);
        for (int i = 0; i < spec.dim; ++i) x[i] = p[i];
        double s = 0;
        for (int i = 0; i < spec.dim; ++i) {
            double gi = grad[i].evaluate<double>(x);
            s += gi * gi;
        }
        max_grad = std::max(max_grad, std::sqrt(s));
    }
    return 4.0 * max_grad * g.max_step();
}

inline double dist(const LabelGrid& g, long cell, const std::vector<Rational>& loc) {
    auto p = g.point(cell);
    double s = 0;
    for (size_t i = 0; i < loc.size(); ++i) {
        double d = p[i] - to_double(loc[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

// Saddle plateaus are flat to order nu_1, so the merge cell can sit anywhere the
// value stays within tol of sigma; widen the location gate accordingly.
inline double location_gate(const CriticalPoint& s, double tol, double spacing) {
    double tmin = std::numeric_limits<double>::infinity();
    for (auto& t : s.coeffs) tmin = std::min(tmin, std::abs(to_double(t)));
    int numin = s.min_order();
    double flat = std::pow(tol / std::max(tmin, 1e-300), 1.0 / numin);
    return 4.0 * spacing + 2.0 * flat;
}

// Steepest descent in the tie-broken order; ends at a birth cell of the local lake.
inline long descend(const LabelGrid& g, long cell) {
    while (true) {
        auto c = g.coords(cell);
        long best = cell;
        for (int ax = 0; ax < g.dim; ++ax)
            for (int dir = -1; dir <= 1; dir += 2) {
                auto cc = c;
                cc[ax] += dir;
                if (cc[ax] < 0 || cc[ax] >= g.n[ax]) continue;
                long nb = g.index(cc);
                if (g.value[nb] < g.value[best] || (g.value[nb] == g.value[best] && nb < best))
                    best = nb;
            }
        if (best == cell) return cell;
        cell = best;
    }
}

}  // namespace detail

// Turns grid merge events into declared-saddle events; throws when the numerical
// hierarchy disagrees with the declared critical set.
inline std::vector<MatchedEvent> match_events(const MergeTree& tree, const PotentialSpec& spec,
                                              double tol) {
    const LabelGrid& g = tree.grid;
    auto minima = spec.minima();
    auto saddles = spec.saddles();

    // births -> declared minima
    std::map<long, int> birth_to_min;
    for (auto& b : tree.births) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int mi : minima) {
            double d = detail::dist(g, b.cell, spec.critical_points[mi].location);
            if (d < best_d) {
                best_d = d;
                best = mi;
            }
        }
        double gate = 4.0 * g.max_step() * std::sqrt(static_cast<double>(spec.dim));
        if (best < 0 || best_d > gate) {
            // spurious shallow births (flat plateaus) die instantly; tolerate those
            bool dies_fast = false;
            for (auto& m : tree.merges)
                if ((m.rep_a == b.cell || m.rep_b == b.cell) && m.value - b.value <= tol) dies_fast = true;
            if (dies_fast) continue;
            throw SpecError(ErrorClass::Invariant, 0, "unmatched birth event (undeclared minimum?)");
        }
        auto [it, fresh] = birth_to_min.emplace(b.cell, best);
        (void)it;
        (void)fresh;
    }
    // one birth per declared minimum
    std::set<int> seen;
    for (auto& [cell, mi] : birth_to_min) seen.insert(mi);
    if (seen.size() != minima.size())
        throw SpecError(ErrorClass::Invariant, 0, "a declared minimum produced no birth event");

    std::vector<MatchedEvent> events;
    for (auto& m : tree.merges) {
        if (birth_to_min.count(m.rep_a) == 0 || birth_to_min.count(m.rep_b) == 0) continue;  // noise
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int si : saddles) {
            const auto& s = spec.critical_points[si];
            if (std::abs(to_double(s.value) - m.value) > tol) continue;
            double d = detail::dist(g, m.cell, s.location);
            if (d < best_d) {
                best_d = d;
                best = si;
            }
        }
        if (best < 0 ||
            best_d > detail::location_gate(spec.critical_points[best], tol, g.max_step()))
            throw SpecError(ErrorClass::Invariant, 0,
                            "unmatched merge event at value " + std::to_string(m.value) +
                                " (undeclared saddle?)");
        // the two local lakes at the junction, found by steepest descent from either side
        long la = detail::descend(g, m.side_a), lb = detail::descend(g, m.side_b);
        auto ita = birth_to_min.find(la), itb = birth_to_min.find(lb);
        if (ita == birth_to_min.end() || itb == birth_to_min.end())
            throw SpecError(ErrorClass::Invariant, 0, "merge event side does not drain to a minimum");
        events.push_back({best, ita->second, itb->second});
    }
    return events;
}

// The labeling procedure over decreasing separating-saddle values. Exact declared
// values drive the hierarchy; the grid only provided connectivity.
inline LabelingResult compute_labeling(const std::vector<MatchedEvent>& events,
                                       const PotentialSpec& spec) {
    auto minima = spec.minima();
    if (minima.empty()) throw SpecError(ErrorClass::Invariant, 0, "no declared minima");

    LabelingResult out;
    {
        std::set<int> ss;
        for (auto& e : events) ss.insert(e.saddle);
        out.separating_saddles.assign(ss.begin(), ss.end());
    }
    // distinct saddle values, descending
    std::vector<Rational> levels;
    for (int si : out.separating_saddles) levels.push_back(spec.critical_points[si].value);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::reverse(levels.begin(), levels.end());

    // underline_m: global minimum, lexicographically smallest location among ties
    int underline = minima[0];
    for (int mi : minima) {
        const auto& a = spec.critical_points[mi];
        const auto& u = spec.critical_points[underline];
        if (a.value < u.value || (a.value == u.value && a.location < u.location)) underline = mi;
    }
    out.underline = underline;

    // union-find over minima driven by events with value < level
    std::map<int, int> uf;
    for (int mi : minima) uf[mi] = mi;
    std::function<int(int)> find = [&](int a) {
        while (uf[a] != a) a = uf[a] = uf[uf[a]];
        return a;
    };
    auto components_below = [&](const Rational& level) {
        for (int mi : minima) uf[mi] = mi;
        for (auto& e : events)
            if (spec.critical_points[e.saddle].value < level) {
                int ra = find(e.min_a), rb = find(e.min_b);
                if (ra != rb) uf[ra] = rb;
            }
    };

    std::map<int, LabelingResult::Entry> labeled;
    {
        LabelingResult::Entry e;
        e.minimum = underline;
        e.sigma = ExtRational::inf();
        e.S = ExtRational::inf();
        e.is_underline = true;
        labeled[underline] = e;
    }
    for (const Rational& sigma : levels) {
        components_below(sigma);
        // group minima by component
        std::map<int, std::vector<int>> comp;
        for (int mi : minima) comp[find(mi)].push_back(mi);
        for (auto& [root, members] : comp) {
            bool has_labeled = false;
            for (int mi : members) has_labeled |= labeled.count(mi) > 0;
            if (has_labeled) continue;
            // global minimum of the component; lexicographic tie-break
            int m = members[0];
            for (int mi : members) {
                const auto& a = spec.critical_points[mi];
                const auto& b = spec.critical_points[m];
                if (a.value < b.value || (a.value == b.value && a.location < b.location)) m = mi;
            }
            // j(m): saddles at this level incident to the component
            std::set<int> jset;
            for (auto& e : events) {
                if (spec.critical_points[e.saddle].value != sigma) continue;
                if (find(e.min_a) == root || find(e.min_b) == root) jset.insert(e.saddle);
            }
            if (jset.empty())
                throw SpecError(ErrorClass::Invariant, 0,
                                "declared saddle level leaves a component unlabeled");
            LabelingResult::Entry e;
            e.minimum = m;
            e.j_set.assign(jset.begin(), jset.end());
            e.sigma = ExtRational(sigma);
            e.S = ExtRational(sigma - spec.critical_points[m].value);
            labeled[m] = e;
        }
    }
    if (labeled.size() != minima.size())
        throw SpecError(ErrorClass::Invariant, 0,
                        "declared separating saddle never separates (labeling incomplete)");
    for (int mi : minima) out.entries.push_back(labeled[mi]);
    return out;
}

// --- genericity check (Gener) -----------------------------------------------------

struct GenerReport {
    bool ok = true;
    std::vector<std::string> violations;
};

inline GenerReport check_gener(const LabelingResult& result, const std::vector<MatchedEvent>& events,
                               const PotentialSpec& spec) {
    GenerReport rep;
    auto minima = spec.minima();

    // Clause 1 for underline_m: V attains its global minimum uniquely.
    {
        const auto& u = spec.critical_points[result.underline];
        for (int mi : minima)
            if (mi != result.underline && spec.critical_points[mi].value == u.value) {
                rep.ok = false;
                rep.violations.push_back("two global minima of V (E(underline) not uniquely minimized)");
                break;
            }
    }
    // Clause 1 for the others: unique global minimum of V restricted to E(m).
    std::map<int, int> uf;
    std::function<int(int)> find = [&](int a) {
        while (uf[a] != a) a = uf[a] = uf[uf[a]];
        return a;
    };
    for (auto& e : result.entries) {
        if (e.is_underline) continue;
        for (int mi : minima) uf[mi] = mi;
        for (auto& ev : events)
            if (ExtRational(spec.critical_points[ev.saddle].value) < e.sigma) {
                int ra = find(ev.min_a), rb = find(ev.min_b);
                if (ra != rb) uf[ra] = rb;
            }
        int root = find(e.minimum);
        int count = 0;
        for (int mi : minima)
            if (find(mi) == root && spec.critical_points[mi].value == spec.critical_points[e.minimum].value)
                ++count;
        if (count > 1) {
            rep.ok = false;
            rep.violations.push_back("component of minimum #" + std::to_string(e.minimum) +
                                     " has multiple global minima (equal-depth wells)");
        }
    }
    // Clause 2: j-sets pairwise disjoint.
    for (size_t i = 0; i < result.entries.size(); ++i)
        for (size_t j = i + 1; j < result.entries.size(); ++j) {
            for (int s : result.entries[i].j_set)
                if (std::find(result.entries[j].j_set.begin(), result.entries[j].j_set.end(), s) !=
                    result.entries[j].j_set.end()) {
                    rep.ok = false;
                    rep.violations.push_back("j(m) sets of minima #" +
                                             std::to_string(result.entries[i].minimum) + " and #" +
                                             std::to_string(result.entries[j].minimum) +
                                             " share saddle #" + std::to_string(s));
                }
        }
    return rep;
}

// --- adjacency oracle (bypasses the grid; the only path for d > 3) ----------------
// File lines: saddle <id> separates <min-id> <min-id>

inline std::vector<MatchedEvent> parse_adjacency_oracle(std::string_view text,
                                                        const PotentialSpec& spec) {
    std::vector<MatchedEvent> events;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        int s, a, b;
        std::string sep;
        if (kw != "saddle" || !(ls >> s >> sep >> a >> b) || sep != "separates")
            throw SpecError(ErrorClass::Parse, lineno, "expected: saddle <id> separates <id> <id>");
        auto valid = [&](int i) { return i >= 0 && i < static_cast<int>(spec.critical_points.size()); };
        if (!valid(s) || !valid(a) || !valid(b))
            throw SpecError(ErrorClass::Parse, lineno, "critical point id out of range");
        if (!spec.critical_points[s].is_saddle())
            throw SpecError(ErrorClass::Invariant, lineno, "oracle names a non-saddle");
        if (!spec.critical_points[a].is_minimum() || !spec.critical_points[b].is_minimum())
            throw SpecError(ErrorClass::Invariant, lineno, "oracle link endpoints must be minima");
        events.push_back({s, a, b});
    }
    return events;
}

// Convenience: full grid pipeline.
struct LabelingRun {
    MergeTree tree;
    std::vector<MatchedEvent> events;
    LabelingResult result;
    GenerReport gener;
    double tol = 0;
};

inline LabelingRun run_labeling(const PotentialSpec& spec, long npts, double tol = -1) {
    LabelingRun run;
    run.tree = build_merge_tree(spec, npts);
    run.tol = tol > 0 ? tol : detail::default_value_tol(spec, run.tree.grid);
    run.events = match_events(run.tree, spec, run.tol);
    run.result = compute_labeling(run.events, spec);
    run.gener = check_gener(run.result, run.events, spec);
    return run;
}

inline std::string labeling_report(const LabelingResult& r, const PotentialSpec& spec) {
    std::ostringstream os;
    os << "minimum | value | sigma | S | j-set | is_underline\n";
    for (auto& e : r.entries) {
        os << "#" << e.minimum << " (";
        const auto& loc = spec.critical_points[e.minimum].location;
        for (size_t i = 0; i < loc.size(); ++i) os << (i ? "," : "") << to_string(loc[i]);
        os << ") | " << to_string(spec.critical_points[e.minimum].value) << " | " << e.sigma.str()
           << " | " << e.S.str() << " | {";
        for (size_t i = 0; i < e.j_set.size(); ++i) os << (i ? "," : "") << "#" << e.j_set[i];
        if (e.is_underline) os << "s1";
        os << "} | " << (e.is_underline ? "yes" : "no") << "\n";
    }
    return os.str();
}

}  // namespace witten
