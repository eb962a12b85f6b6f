#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "restruct/errors.hpp"
#include "restruct/money.hpp"
#include "restruct/restructure.hpp"
#include "restruct/scales.hpp"
#include "restruct/solvers.hpp"

namespace restruct::oracle {

/// Result of a full enumeration: the optimum, how many optima tie for it,
/// the canonical optimum under the shared tie-break rule, and the size of
/// the enumerated search space.
template <typename Sol>
struct report {
    money objective;
    std::uint64_t optima_count = 0;
    Sol canonical{};
    std::uint64_t enumeration_size = 0;
};

/// Exhaustive 0/1 knapsack over all subsets.
inline report<subset_solution> knapsack(const knapsack_instance& inst) {
    detail::validate(inst);
    if (inst.items.size() > 24) throw too_large("oracle: more than 24 items");
    std::vector<knapsack_item> items = inst.items;
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    const std::size_t n = items.size();
    report<subset_solution> rep;
    rep.enumeration_size = std::uint64_t{1} << n;
    bool any = false;
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
        if (!any || p > rep.objective) {
            rep.objective = p;
            rep.optima_count = 1;
            rep.canonical = {ids, p, w};
            any = true;
        } else if (p == rep.objective) {
            ++rep.optima_count;
            if (detail::lex_less(ids, rep.canonical.ids))
                rep.canonical = {ids, p, w};
        }
    }
    return rep;
}

/// Exhaustive multiple choice: every combination of at-most-one item per
/// group.
inline report<group_selection> multiple_choice(const multiple_choice_instance& inst) {
    detail::validate(inst);
    std::uint64_t space = 1;
    for (const auto& g : inst.groups) {
        space *= g.items.size() + 1;
        if (space > 10000000) throw too_large("oracle: selection space too big");
    }
    report<group_selection> rep;
    rep.enumeration_size = space;
    const std::size_t m = inst.groups.size();
    std::vector<int> idx(m, -1); // -1 = none
    bool any = false;
    for (;;) {
        money p, w;
        std::vector<std::pair<int, int>> chosen;
        bool ok = true;
        for (std::size_t g = 0; g < m; ++g) {
            if (idx[g] < 0) continue;
            const auto& it = inst.groups[g].items[static_cast<std::size_t>(idx[g])];
            p += it.profit;
            w += it.weight;
            chosen.emplace_back(static_cast<int>(g), idx[g]);
        }
        if (w > inst.capacity) ok = false;
        if (ok) {
            if (!any || p > rep.objective) {
                rep.objective = p;
                rep.optima_count = 1;
                rep.canonical = {chosen, p, w};
                any = true;
            } else if (p == rep.objective) {
                ++rep.optima_count;
                if (detail::lex_less(chosen, rep.canonical.chosen))
                    rep.canonical = {chosen, p, w};
            }
        }
        std::size_t g = m;
        bool done = false;
        while (g > 0) {
            --g;
            if (++idx[g] < static_cast<int>(inst.groups[g].items.size())) break;
            idx[g] = -1;
            if (g == 0) done = true;
        }
        if (done) break;
    }
    return rep;
}

/// Exhaustive assignment over all permutations (n <= 8).
inline report<permutation> assignment(const assignment_instance& inst) {
    detail::validate(inst);
    const std::size_t n = inst.size();
    if (n > 8) throw too_large("oracle: assignment larger than 8");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    report<permutation> rep;
    bool any = false;
    do {
        ++rep.enumeration_size;
        money p;
        for (std::size_t i = 0; i < n; ++i)
            p += inst.profit[i][static_cast<std::size_t>(perm[i])];
        std::vector<int> pos(n);
        for (std::size_t i = 0; i < n; ++i) pos[i] = perm[i] + 1;
        if (!any || p > rep.objective) {
            rep.objective = p;
            rep.optima_count = 1;
            rep.canonical = {pos, p};
            any = true;
        } else if (p == rep.objective) {
            ++rep.optima_count;
            if (detail::lex_less(pos, rep.canonical.position))
                rep.canonical = {pos, p};
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return rep;
}

/// Exhaustive minimum spanning tree by edge-subset enumeration (|A| <= 7).
inline report<tree_solution> mst(const weighted_graph& g) {
    detail::validate(g);
    if (g.vertices.size() > 7) throw too_large("oracle: more than 7 vertices");
    std::map<edge_key, money, detail::edge_key_less> weight_of;
    for (const auto& e : g.edges) weight_of[e.key()] = e.weight;
    const std::set<vertex_id> verts(g.vertices.begin(), g.vertices.end());
    report<tree_solution> rep;
    bool any = false;
    detail::for_each_spanning_tree(
        g.edges, verts, [&](const std::vector<edge_key>& keys, money w) {
            ++rep.enumeration_size;
            if (!any || w < rep.objective) {
                rep.objective = w;
                rep.optima_count = 1;
                rep.canonical = {keys, w, {}};
                any = true;
            } else if (w == rep.objective) {
                ++rep.optima_count;
                if (std::lexicographical_compare(
                        keys.begin(), keys.end(), rep.canonical.edges.begin(),
                        rep.canonical.edges.end(), detail::edge_key_less{}))
                    rep.canonical = {keys, w, {}};
            }
        });
    if (!any) throw no_spanning_tree("oracle: graph is disconnected");
    return rep;
}

/// Exhaustive Steiner tree: every candidate subset times every spanning
/// tree of the induced subgraph.
inline report<tree_solution> steiner(const weighted_graph& g,
                                     const std::vector<vertex_id>& terminals) {
    detail::validate(g);
    if (g.steiner_candidates.size() > 10)
        throw too_large("oracle: more than 10 Steiner candidates");
    report<tree_solution> rep;
    bool any = false;
    const auto& z = g.steiner_candidates;
    for (std::uint32_t mask = 0; mask < (1u << z.size()); ++mask) {
        std::set<vertex_id> verts(terminals.begin(), terminals.end());
        std::vector<vertex_id> used;
        for (std::size_t i = 0; i < z.size(); ++i)
            if (mask >> i & 1u) {
                verts.insert(z[i]);
                used.push_back(z[i]);
            }
        std::sort(used.begin(), used.end(), detail::natural_less{});
        detail::for_each_spanning_tree(
            g.edges, verts, [&](const std::vector<edge_key>& keys, money w) {
                ++rep.enumeration_size;
                tree_solution sol{keys, w, used};
                auto better = [&] {
                    if (!any) return true;
                    if (w != rep.objective) return w < rep.objective;
                    if (used != rep.canonical.steiner_vertices)
                        return detail::lex_less(used,
                                                rep.canonical.steiner_vertices);
                    return std::lexicographical_compare(
                        keys.begin(), keys.end(), rep.canonical.edges.begin(),
                        rep.canonical.edges.end(), detail::edge_key_less{});
                };
                if (!any || w < rep.objective) {
                    rep.optima_count = 1;
                    rep.objective = w;
                    rep.canonical = sol;
                    any = true;
                } else if (w == rep.objective) {
                    ++rep.optima_count;
                    if (better()) rep.canonical = sol;
                }
            });
    }
    if (!any) throw infeasible("oracle: terminals cannot be connected");
    return rep;
}

/// All admissible composites and their Pareto front by pairwise dominance.
struct hmmd_report {
    std::vector<composite_solution> admissible;
    std::vector<composite_solution> front;
    std::uint64_t enumeration_size = 0;
};

inline hmmd_report hmmd(const morph_system& sys) {
    detail::validate(sys);
    std::uint64_t space = 1;
    for (const auto& comp : sys.components) {
        space *= comp.das.size();
        if (space > 100000) throw too_large("oracle: composite space too big");
    }
    hmmd_report rep;
    rep.enumeration_size = space;
    const std::size_t m = sys.components.size();
    std::vector<std::size_t> idx(m, 0);
    for (;;) {
        std::vector<std::string> choice;
        for (std::size_t i = 0; i < m; ++i)
            choice.push_back(sys.components[i].das[idx[i]].id);
        auto q = evaluate_composite(sys, choice);
        if (q.w.value >= 1) rep.admissible.push_back({choice, q});
        std::size_t i = m;
        bool done = false;
        while (i > 0) {
            --i;
            if (++idx[i] < sys.components[i].das.size()) break;
            idx[i] = 0;
            if (i == 0) done = true;
        }
        if (done) break;
    }
    for (const auto& cand : rep.admissible) {
        bool dominated = false;
        for (const auto& other : rep.admissible)
            if (dominates_quality(other.quality, cand.quality) ==
                dominance::dominates) {
                dominated = true;
                break;
            }
        if (!dominated) rep.front.push_back(cand);
    }
    return rep;
}

/// Pareto set of tagged quality vectors by all-pairs dominance.
template <typename Id>
std::set<Id> pareto(const std::vector<std::pair<Id, quality_vector>>& items) {
    if (items.size() > 100000) throw too_large("oracle: too many candidates");
    return pareto_front(items); // the rule itself is already the brute force
}

/// One generic change operation for op-selection restructuring oracles.
struct op {
    std::string id;
    money cost;
    money profit;
    std::string element; // ops sharing an element are mutually exclusive
};

/// Exhaustive op-subset selection under a budget: maximize profit, skipping
/// subsets that pick two ops on one element. The canonical optimum prefers
/// fewer ops, then lower cost, then lexicographic ids.
struct op_selection {
    std::vector<std::string> ids;
    money profit;
    money cost;
};

inline report<op_selection> select_ops(const std::vector<op>& ops, money budget) {
    if (ops.size() > 20) throw too_large("oracle: more than 20 ops");
    report<op_selection> rep;
    rep.enumeration_size = std::uint64_t{1} << ops.size();
    bool any = false;
    for (std::uint32_t mask = 0; mask < (1u << ops.size()); ++mask) {
        money p, c;
        std::vector<std::string> ids;
        std::set<std::string> elements;
        bool ok = true;
        for (std::size_t i = 0; i < ops.size(); ++i)
            if (mask >> i & 1u) {
                if (!ops[i].element.empty() &&
                    !elements.insert(ops[i].element).second) {
                    ok = false;
                    break;
                }
                p += ops[i].profit;
                c += ops[i].cost;
                ids.push_back(ops[i].id);
            }
        if (!ok || c > budget) continue;
        auto better = [&] {
            if (!any) return true;
            if (p != rep.objective) return p > rep.objective;
            if (ids.size() != rep.canonical.ids.size())
                return ids.size() < rep.canonical.ids.size();
            if (c != rep.canonical.cost) return c < rep.canonical.cost;
            return detail::lex_less(ids, rep.canonical.ids);
        };
        if (!any || p > rep.objective) {
            rep.objective = p;
            rep.optima_count = 1;
            rep.canonical = {ids, p, c};
            any = true;
        } else if (p == rep.objective) {
            ++rep.optima_count;
            if (better()) rep.canonical = {ids, p, c};
        }
    }
    if (!any) throw infeasible_with_budget("oracle: no op subset fits the budget");
    return rep;
}

/// Exhaustive knapsack restructuring over all change subsets, mirroring
/// restructure_knapsack's model (goal universe, fixed core, symmetric
/// difference H).
inline report<subset_solution> restructure_knapsack(
    const subset_solution& s0, const knapsack_instance& goal,
    const change_costs<int>& costs, money budget,
    const std::set<int>& fixed_core = {}) {
    detail::validate(goal);
    std::map<int, knapsack_item> pool;
    for (const auto& it : goal.items) pool[it.id] = it;
    const std::set<int> before(s0.ids.begin(), s0.ids.end());
    std::vector<int> open;
    for (const auto& [id, item] : pool)
        if (!fixed_core.count(id)) open.push_back(id);
    if (open.size() > 20) throw too_large("oracle: more than 20 changeable items");

    money base_cost, core_profit, core_weight;
    for (int id : before)
        if (!pool.count(id)) base_cost += costs.removal(id);
    for (int id : fixed_core) {
        core_profit += pool.at(id).profit;
        core_weight += pool.at(id).weight;
        if (!before.count(id)) base_cost += costs.insertion(id);
    }

    report<subset_solution> rep;
    rep.enumeration_size = std::uint64_t{1} << open.size();
    bool any = false;
    int best_nops = 0;
    money best_h;
    for (std::uint32_t mask = 0; mask < (1u << open.size()); ++mask) {
        money p = core_profit, w = core_weight, h = base_cost;
        std::vector<int> ids(fixed_core.begin(), fixed_core.end());
        for (std::size_t i = 0; i < open.size(); ++i) {
            const int id = open[i];
            if (mask >> i & 1u) {
                p += pool[id].profit;
                w += pool[id].weight;
                if (!before.count(id)) h += costs.insertion(id);
                ids.push_back(id);
            } else if (before.count(id)) {
                h += costs.removal(id);
            }
        }
        if (w > goal.capacity || h > budget) continue;
        std::sort(ids.begin(), ids.end());
        auto diff_size = [&](const std::vector<int>& sel) {
            std::set<int> s(sel.begin(), sel.end());
            int n = 0;
            for (int id : before)
                if (!s.count(id) && !fixed_core.count(id)) ++n;
            for (int id : s)
                if (!before.count(id)) ++n;
            return n;
        };
        if (!any || p > rep.objective) {
            rep.objective = p;
            rep.optima_count = 1;
            rep.canonical = {ids, p, w};
            best_nops = diff_size(ids);
            best_h = h;
            any = true;
        } else if (p == rep.objective) {
            ++rep.optima_count;
            // tie rule of the restructure module: fewer ops, cheaper, lex
            const int nops = diff_size(ids);
            bool better = false;
            if (nops != best_nops) better = nops < best_nops;
            else if (h != best_h) better = h < best_h;
            else better = detail::lex_less(ids, rep.canonical.ids);
            if (better) {
                rep.canonical = {ids, p, w};
                best_nops = nops;
                best_h = h;
            }
        }
    }
    if (!any)
        throw infeasible_with_budget("oracle: no feasible restructuring in budget");
    return rep;
}

} // namespace restruct::oracle
