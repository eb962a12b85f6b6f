#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "restruct/errors.hpp"
#include "restruct/money.hpp"
#include "restruct/scales.hpp"

namespace restruct {

// ---------------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------------

namespace detail {

/// Order for vertex/element names: shorter strings first, then
/// lexicographic. Sorts "2" before "10" and digits before letters.
struct natural_less {
    bool operator()(const std::string& a, const std::string& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

/// Tie-break rule shared with the oracle module: among equal-objective
/// optima prefer the lexicographically smallest sorted id sequence.
template <typename Seq>
bool lex_less(const Seq& a, const Seq& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

class union_find {
public:
    explicit union_find(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[a] = b;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

} // namespace detail

// ---------------------------------------------------------------------------
// 0/1 knapsack
// ---------------------------------------------------------------------------

struct knapsack_item {
    int id = 0;
    money profit;
    money weight;

    friend bool operator==(const knapsack_item&, const knapsack_item&) = default;
};

struct knapsack_instance {
    std::vector<knapsack_item> items;
    money capacity;

    friend bool operator==(const knapsack_instance&, const knapsack_instance&) = default;
};

struct subset_solution {
    std::vector<int> ids; // sorted ascending
    money profit;
    money weight;
};

namespace detail {

inline void validate(const knapsack_instance& inst) {
    if (inst.capacity.negative())
        throw invalid_instance("knapsack: negative capacity");
    std::set<int> seen;
    for (const auto& it : inst.items) {
        if (it.weight.negative())
            throw invalid_instance("knapsack: negative weight");
        if (!seen.insert(it.id).second)
            throw invalid_instance("knapsack: duplicate item id");
    }
}

/// Exact optimal value by depth-first branch and bound with the fractional
/// relaxation bound.
inline money knapsack_value(std::vector<knapsack_item> items, money capacity) {
    // sort by profit density for a tight fractional bound; zero-weight items
    // first so the cross-product comparison stays valid
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        const __int128 lhs = static_cast<__int128>(a.profit.tenths()) * b.weight.tenths();
        const __int128 rhs = static_cast<__int128>(b.profit.tenths()) * a.weight.tenths();
        if (lhs != rhs) return lhs > rhs;
        return a.weight < b.weight;
    });
    money best = money::from_tenths(0);
    auto bound_exceeds = [&](std::size_t i, money profit, money room) {
        // integer ceiling of the fractional completion: a safe upper bound
        __int128 b = profit.tenths();
        std::int64_t r = room.tenths();
        for (std::size_t j = i; j < items.size(); ++j) {
            if (items[j].profit.tenths() <= 0) continue;
            if (items[j].weight.tenths() <= r) {
                r -= items[j].weight.tenths();
                b += items[j].profit.tenths();
            } else {
                const __int128 part =
                    static_cast<__int128>(items[j].profit.tenths()) * r;
                b += (part + items[j].weight.tenths() - 1) / items[j].weight.tenths();
                break;
            }
        }
        return b > best.tenths();
    };
    auto dfs = [&](auto&& self, std::size_t i, money profit, money room) -> void {
        if (profit > best) best = profit;
        if (i == items.size()) return;
        if (!bound_exceeds(i, profit, room)) return;
        if (items[i].weight <= room)
            self(self, i + 1, profit + items[i].profit, room - items[i].weight);
        self(self, i + 1, profit, room);
    };
    dfs(dfs, 0, money::from_tenths(0), capacity);
    return best;
}

} // namespace detail

/// Maximum-profit feasible subset. Exhaustive below 20 items; branch and
/// bound plus lexicographic reconstruction above. Ties resolve to the
/// lexicographically smallest sorted id sequence.
inline subset_solution solve_knapsack(const knapsack_instance& inst) {
    detail::validate(inst);
    std::vector<knapsack_item> items = inst.items;
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    const std::size_t n = items.size();

    subset_solution out;
    if (n < 20) {
        std::vector<int> best_ids;
        money best_profit = money::from_tenths(-1);
        money best_weight;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            money p, w;
            std::vector<int> ids;
            for (std::size_t i = 0; i < n; ++i)
                if (mask >> i & 1u) {
                    p += items[i].profit;
                    w += items[i].weight;
                    ids.push_back(items[i].id);
                }
            if (w > inst.capacity) continue;
            if (p > best_profit ||
                (p == best_profit && detail::lex_less(ids, best_ids))) {
                best_profit = p;
                best_weight = w;
                best_ids = std::move(ids);
            }
        }
        out.ids = best_ids;
        out.profit = best_profit;
        out.weight = best_weight;
        return out;
    }

    const money target = detail::knapsack_value(items, inst.capacity);
    // lex-smallest reconstruction: stop as soon as the target is banked,
    // otherwise take the smallest id whose inclusion still reaches it
    money profit, weight;
    std::vector<knapsack_item> rest(items.begin(), items.end());
    while (profit != target) {
        // the first remaining id that still permits an optimal completion;
        // ids scanned and rejected here cannot be part of any optimum below
        bool advanced = false;
        for (std::size_t i = 0; i < rest.size(); ++i) {
            const auto item = rest[i];
            std::vector<knapsack_item> suffix(rest.begin() + i + 1, rest.end());
            if (item.weight + weight <= inst.capacity &&
                profit + item.profit +
                        detail::knapsack_value(
                            suffix, inst.capacity - weight - item.weight) ==
                    target) {
                out.ids.push_back(item.id);
                profit += item.profit;
                weight += item.weight;
                rest.erase(rest.begin(), rest.begin() + i + 1);
                advanced = true;
                break;
            }
        }
        if (!advanced)
            throw error("knapsack: reconstruction failed to reach the optimum");
    }
    out.profit = profit;
    out.weight = weight;
    return out;
}

// ---------------------------------------------------------------------------
// multiple choice problem
// ---------------------------------------------------------------------------

struct mc_item {
    std::string id;
    money profit;
    money weight;

    friend bool operator==(const mc_item&, const mc_item&) = default;
};

struct mc_group {
    std::string name;
    std::vector<mc_item> items;

    friend bool operator==(const mc_group&, const mc_group&) = default;
};

struct multiple_choice_instance {
    std::vector<mc_group> groups;
    money capacity;

    friend bool operator==(const multiple_choice_instance&, const multiple_choice_instance&) = default;
};

/// At most one item per group; entries hold (group index, item index).
struct group_selection {
    std::vector<std::pair<int, int>> chosen;
    money profit;
    money weight;

    std::vector<std::string> ids(const multiple_choice_instance& inst) const {
        std::vector<std::string> out;
        for (auto [g, j] : chosen)
            out.push_back(inst.groups[static_cast<std::size_t>(g)]
                              .items[static_cast<std::size_t>(j)]
                              .id);
        return out;
    }
};

namespace detail {

inline void validate(const multiple_choice_instance& inst) {
    if (inst.capacity.negative())
        throw invalid_instance("multiple-choice: negative capacity");
    std::set<std::string> seen;
    for (const auto& g : inst.groups)
        for (const auto& it : g.items)
            if (!seen.insert(it.id).second)
                throw invalid_instance("multiple-choice: item '" + it.id +
                                       "' appears in two groups");
}

} // namespace detail

/// Maximum-profit selection of at most one item per group under the shared
/// capacity. Ties prefer the lexicographically smallest (group, item)
/// position sequence, i.e. earliest-declared items.
inline group_selection solve_multiple_choice(const multiple_choice_instance& inst) {
    detail::validate(inst);
    const std::size_t m = inst.groups.size();

    // profit-only completion bound per group suffix
    std::vector<money> suffix_bound(m + 1);
    for (std::size_t g = m; g-- > 0;) {
        money best;
        for (const auto& it : inst.groups[g].items)
            if (it.profit > best) best = it.profit;
        suffix_bound[g] = suffix_bound[g + 1] + best;
    }

    group_selection best;
    best.profit = money::from_tenths(-1);
    std::vector<std::pair<int, int>> cur;
    auto consider = [&](money p, money w) {
        if (p > best.profit ||
            (p == best.profit && detail::lex_less(cur, best.chosen))) {
            best.chosen = cur;
            best.profit = p;
            best.weight = w;
        }
    };
    auto dfs = [&](auto&& self, std::size_t g, money p, money w) -> void {
        if (g == m) {
            consider(p, w);
            return;
        }
        if (p + suffix_bound[g] < best.profit) return;
        for (std::size_t j = 0; j < inst.groups[g].items.size(); ++j) {
            const auto& it = inst.groups[g].items[j];
            if (w + it.weight > inst.capacity) continue;
            cur.emplace_back(static_cast<int>(g), static_cast<int>(j));
            self(self, g + 1, p + it.profit, w + it.weight);
            cur.pop_back();
        }
        self(self, g + 1, p, w); // skip the group
    };
    dfs(dfs, 0, money{}, money{});
    return best;
}

// ---------------------------------------------------------------------------
// assignment problem
// ---------------------------------------------------------------------------

struct assignment_instance {
    // profit[i][p]: profit of element i in position p (0-based storage)
    std::vector<std::vector<money>> profit;

    std::size_t size() const { return profit.size(); }

    friend bool operator==(const assignment_instance&, const assignment_instance&) = default;
};

struct permutation {
    std::vector<int> position; // position[i] = 1-based position of element i+1
    money profit;
};

namespace detail {

inline void validate(const assignment_instance& inst) {
    const std::size_t n = inst.size();
    if (n == 0) throw invalid_instance("assignment: empty matrix");
    for (const auto& row : inst.profit) {
        if (row.size() != n)
            throw invalid_instance("assignment: profit matrix is not square");
        for (money c : row)
            if (c.negative())
                throw invalid_instance("assignment: negative profit");
    }
}

/// Hungarian algorithm (potentials form) on the minimization transform;
/// returns the maximum assignment profit for rows `rows` over free columns.
inline money hungarian_value(const assignment_instance& inst,
                             const std::vector<int>& rows,
                             const std::vector<int>& cols) {
    const std::size_t n = rows.size();
    if (n == 0) return money{};
    money top;
    for (int r : rows)
        for (int c : cols)
            if (inst.profit[r][c] > top) top = inst.profit[r][c];
    // cost = top - profit, all costs >= 0
    const std::int64_t kInf = INT64_MAX / 4;
    std::vector<std::int64_t> u(n + 1), v(n + 1);
    std::vector<std::size_t> match(n + 1, 0); // column -> row (1-based)
    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<std::int64_t> minv(n + 1, kInf);
        std::vector<bool> used(n + 1, false);
        std::vector<std::size_t> way(n + 1, 0);
        match[0] = i;
        std::size_t j0 = 0;
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            std::int64_t delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const std::int64_t cost =
                    top.tenths() -
                    inst.profit[rows[i0 - 1]][cols[j - 1]].tenths();
                const std::int64_t cur = cost - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    money total;
    for (std::size_t j = 1; j <= n; ++j)
        total += inst.profit[rows[match[j] - 1]][cols[j - 1]];
    return total;
}

} // namespace detail

/// Profit-maximal permutation. Ties resolve to the lexicographically
/// smallest position array.
inline permutation solve_assignment(const assignment_instance& inst) {
    detail::validate(inst);
    const int n = static_cast<int>(inst.size());
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    const money target = detail::hungarian_value(inst, all, all);

    permutation out;
    out.position.assign(static_cast<std::size_t>(n), 0);
    std::vector<int> free_cols = all;
    money banked;
    for (int i = 0; i < n; ++i) {
        std::vector<int> rest_rows;
        for (int r = i + 1; r < n; ++r) rest_rows.push_back(r);
        for (std::size_t c = 0; c < free_cols.size(); ++c) {
            std::vector<int> rest_cols = free_cols;
            rest_cols.erase(rest_cols.begin() + static_cast<std::ptrdiff_t>(c));
            const money with = banked + inst.profit[i][free_cols[c]] +
                               detail::hungarian_value(inst, rest_rows, rest_cols);
            if (with == target) {
                out.position[static_cast<std::size_t>(i)] = free_cols[c] + 1;
                banked += inst.profit[i][free_cols[c]];
                free_cols = rest_cols;
                break;
            }
        }
    }
    out.profit = banked;
    return out;
}

// ---------------------------------------------------------------------------
// spanning / Steiner trees
// ---------------------------------------------------------------------------

using vertex_id = std::string;
using edge_key = std::pair<vertex_id, vertex_id>; // normalized (small, large)

inline edge_key make_edge_key(vertex_id a, vertex_id b) {
    if (detail::natural_less{}(b, a)) std::swap(a, b);
    return {std::move(a), std::move(b)};
}

struct graph_edge {
    vertex_id u, v;
    money weight;

    edge_key key() const { return make_edge_key(u, v); }

    friend bool operator==(const graph_edge&, const graph_edge&) = default;
};

struct weighted_graph {
    std::vector<vertex_id> vertices;
    std::vector<graph_edge> edges;
    std::vector<vertex_id> steiner_candidates; // Z, disjoint from `vertices`

    friend bool operator==(const weighted_graph&, const weighted_graph&) = default;
};

struct tree_solution {
    std::vector<edge_key> edges; // sorted by natural order
    money weight;
    std::vector<vertex_id> steiner_vertices; // Z' actually used

    friend bool operator==(const tree_solution&, const tree_solution&) = default;
};

namespace detail {

struct edge_key_less {
    bool operator()(const edge_key& a, const edge_key& b) const {
        natural_less less;
        if (a.first != b.first) return less(a.first, b.first);
        return less(a.second, b.second);
    }
};

inline void validate(const weighted_graph& g) {
    std::set<vertex_id> verts(g.vertices.begin(), g.vertices.end());
    if (verts.size() != g.vertices.size())
        throw invalid_instance("graph: duplicate vertex");
    for (const auto& z : g.steiner_candidates)
        if (verts.count(z))
            throw invalid_instance("graph: Steiner candidate '" + z +
                                   "' is also a plain vertex");
    std::set<vertex_id> zs(g.steiner_candidates.begin(), g.steiner_candidates.end());
    std::set<edge_key, edge_key_less> keys;
    for (const auto& e : g.edges) {
        if (e.u == e.v) throw invalid_instance("graph: self loop");
        if (!verts.count(e.u) && !zs.count(e.u))
            throw invalid_instance("graph: unknown endpoint '" + e.u + "'");
        if (!verts.count(e.v) && !zs.count(e.v))
            throw invalid_instance("graph: unknown endpoint '" + e.v + "'");
        if (!keys.insert(e.key()).second)
            throw invalid_instance("graph: parallel edge");
    }
}

/// Kruskal over a vertex subset. Edges are taken in (weight, key) order, so
/// equal-weight choices resolve to the natural-order-first tree.
inline std::optional<tree_solution> mst_over(
    const std::vector<graph_edge>& edges, const std::set<vertex_id>& verts) {
    std::vector<graph_edge> usable;
    for (const auto& e : edges)
        if (verts.count(e.u) && verts.count(e.v)) usable.push_back(e);
    std::sort(usable.begin(), usable.end(), [](const auto& a, const auto& b) {
        if (a.weight != b.weight) return a.weight < b.weight;
        return edge_key_less{}(a.key(), b.key());
    });
    std::map<vertex_id, std::size_t, natural_less> index;
    for (const auto& v : verts) index.emplace(v, index.size());
    union_find uf(verts.size());
    tree_solution t;
    for (const auto& e : usable) {
        if (uf.unite(index[e.u], index[e.v])) {
            t.edges.push_back(e.key());
            t.weight += e.weight;
        }
    }
    if (t.edges.size() + 1 != verts.size()) return std::nullopt;
    std::sort(t.edges.begin(), t.edges.end(), edge_key_less{});
    return t;
}

} // namespace detail

/// Minimum spanning tree over all plain vertices of the graph.
inline tree_solution minimum_spanning_tree(const weighted_graph& g) {
    detail::validate(g);
    if (g.vertices.empty()) throw invalid_instance("graph: no vertices");
    std::set<vertex_id> verts(g.vertices.begin(), g.vertices.end());
    auto t = detail::mst_over(g.edges, verts);
    if (!t) throw no_spanning_tree("graph is disconnected");
    return *t;
}

/// Exact Steiner tree by enumerating subsets Z' of the candidate set and
/// taking the minimum-weight induced spanning tree over terminals + Z'.
inline tree_solution steiner_tree(const weighted_graph& g,
                                  const std::vector<vertex_id>& terminals) {
    detail::validate(g);
    if (g.steiner_candidates.size() > 15)
        throw too_large("steiner: more than 15 candidate vertices");
    const auto& z = g.steiner_candidates;
    std::optional<tree_solution> best;
    for (std::uint32_t mask = 0; mask < (1u << z.size()); ++mask) {
        std::set<vertex_id> verts(terminals.begin(), terminals.end());
        std::vector<vertex_id> used;
        for (std::size_t i = 0; i < z.size(); ++i)
            if (mask >> i & 1u) {
                verts.insert(z[i]);
                used.push_back(z[i]);
            }
        auto t = detail::mst_over(g.edges, verts);
        if (!t) continue;
        t->steiner_vertices = used;
        std::sort(t->steiner_vertices.begin(), t->steiner_vertices.end(),
                  detail::natural_less{});
        auto better = [&] {
            if (!best) return true;
            if (t->weight != best->weight) return t->weight < best->weight;
            if (t->steiner_vertices != best->steiner_vertices)
                return detail::lex_less(t->steiner_vertices, best->steiner_vertices);
            return std::lexicographical_compare(
                t->edges.begin(), t->edges.end(), best->edges.begin(),
                best->edges.end(), detail::edge_key_less{});
        };
        if (better()) best = std::move(t);
    }
    if (!best) throw infeasible("steiner: no candidate subset connects the terminals");
    return *best;
}

// ---------------------------------------------------------------------------
// morphological (HMMD) synthesis
// ---------------------------------------------------------------------------

struct design_alternative {
    std::string id;
    int priority = 1; // 1 = best, on [1..k]
    money delete_cost; // optional, used by money-budget restructuring
    money add_cost;

    friend bool operator==(const design_alternative&, const design_alternative&) = default;
};

struct system_component {
    std::string name;
    std::vector<design_alternative> das;

    friend bool operator==(const system_component&, const system_component&) = default;
};

struct morph_system {
    std::vector<system_component> components;
    int priority_levels = 3; // k
    int compat_best = 3;     // l
    // pairwise compatibility between DAs of different components;
    // missing entries mean 0 (incompatible)
    std::map<std::pair<std::string, std::string>, int> compatibility;

    int compat_of(const std::string& a, const std::string& b) const {
        auto it = compatibility.find({a, b});
        if (it != compatibility.end()) return it->second;
        it = compatibility.find({b, a});
        if (it != compatibility.end()) return it->second;
        return 0;
    }

    const design_alternative* find_da(std::size_t component,
                                      const std::string& id) const {
        for (const auto& da : components[component].das)
            if (da.id == id) return &da;
        return nullptr;
    }

    friend bool operator==(const morph_system&, const morph_system&) = default;
};

struct composite_solution {
    std::vector<std::string> das; // one per component, in component order
    quality_vector quality;
};

namespace detail {

inline void validate(const morph_system& sys) {
    if (sys.components.empty())
        throw invalid_instance("morph system: no components");
    std::set<std::string> ids;
    for (const auto& comp : sys.components) {
        if (comp.das.empty())
            throw invalid_instance("morph system: component '" + comp.name +
                                   "' has no alternatives");
        for (const auto& da : comp.das) {
            if (da.priority < 1 || da.priority > sys.priority_levels)
                throw invalid_instance("morph system: priority of '" + da.id +
                                       "' outside [1..k]");
            if (!ids.insert(da.id).second)
                throw invalid_instance("morph system: duplicate DA id '" +
                                       da.id + "'");
        }
    }
    for (const auto& [pair, w] : sys.compatibility)
        if (w < 0 || w > sys.compat_best)
            throw invalid_instance("morph system: compatibility of (" +
                                   pair.first + "," + pair.second +
                                   ") outside [0..l]");
}

} // namespace detail

/// N(S) for one alternative per component: w is the minimum pairwise
/// compatibility, n tallies priorities. A single-component system has no
/// pairs, so w defaults to the scale best.
inline quality_vector evaluate_composite(const morph_system& sys,
                                         const std::vector<std::string>& choice) {
    detail::validate(sys);
    if (choice.size() != sys.components.size())
        throw invalid_instance("composite: expected one DA per component");
    std::vector<const design_alternative*> das;
    for (std::size_t i = 0; i < choice.size(); ++i) {
        const auto* da = sys.find_da(i, choice[i]);
        if (!da)
            throw invalid_instance("composite: '" + choice[i] +
                                   "' is not an alternative of component '" +
                                   sys.components[i].name + "'");
        das.push_back(da);
    }
    int w = sys.compat_best;
    for (std::size_t i = 0; i < das.size(); ++i)
        for (std::size_t j = i + 1; j < das.size(); ++j)
            w = std::min(w, sys.compat_of(das[i]->id, das[j]->id));
    std::vector<int> counts(static_cast<std::size_t>(sys.priority_levels), 0);
    for (const auto* da : das)
        ++counts[static_cast<std::size_t>(da->priority) - 1];
    return {compatibility_value(w, sys.compat_best), count_vector(counts)};
}

/// All admissible composites (w >= 1) on the Pareto front of N(S),
/// by exhaustive enumeration. Deterministic order: lexicographic by
/// per-component alternative index.
inline std::vector<composite_solution> hmmd_synthesize(const morph_system& sys) {
    detail::validate(sys);
    std::uint64_t space = 1;
    for (const auto& comp : sys.components) {
        space *= comp.das.size();
        if (space > 1000000)
            throw too_large("hmmd: composite space exceeds 10^6");
    }
    const std::size_t m = sys.components.size();
    std::vector<std::size_t> idx(m, 0);
    std::vector<composite_solution> admissible;
    for (;;) {
        std::vector<std::string> choice;
        for (std::size_t i = 0; i < m; ++i)
            choice.push_back(sys.components[i].das[idx[i]].id);
        auto q = evaluate_composite(sys, choice);
        if (q.w.value >= 1) admissible.push_back({std::move(choice), q});
        std::size_t i = m;
        while (i > 0) {
            --i;
            if (++idx[i] < sys.components[i].das.size()) break;
            idx[i] = 0;
            if (i == 0) goto done;
        }
    }
done:
    if (admissible.empty())
        throw infeasible("hmmd: no composite with nonzero compatibility");
    std::vector<composite_solution> front;
    for (const auto& cand : admissible) {
        bool dominated = false;
        for (const auto& other : admissible)
            if (dominates_quality(other.quality, cand.quality) ==
                dominance::dominates) {
                dominated = true;
                break;
            }
        if (!dominated) front.push_back(cand);
    }
    return front;
}

} // namespace restruct
