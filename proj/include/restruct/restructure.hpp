#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "restruct/errors.hpp"
#include "restruct/money.hpp"
#include "restruct/scales.hpp"
#include "restruct/solvers.hpp"

namespace restruct {

// ---------------------------------------------------------------------------
// change operations and diffs
// ---------------------------------------------------------------------------

enum class change_kind {
    delete_element,
    add_element,
    replace_in_group,
    move_between_clusters,
    reassign_position,
    swap_edge,
    add_steiner_vertex,
    delete_steiner_vertex,
};

inline const char* to_string(change_kind k) {
    switch (k) {
        case change_kind::delete_element: return "delete";
        case change_kind::add_element: return "add";
        case change_kind::replace_in_group: return "replace";
        case change_kind::move_between_clusters: return "move";
        case change_kind::reassign_position: return "reassign";
        case change_kind::swap_edge: return "swap-edge";
        case change_kind::add_steiner_vertex: return "add-steiner";
        case change_kind::delete_steiner_vertex: return "delete-steiner";
    }
    return "?";
}

/// One atomic solution edit. `cost` is h-(removed parts) + h+(added parts);
/// `profit_delta` is the op's contribution toward the goal-stage objective
/// when that is meaningful for the problem.
struct change_op {
    change_kind kind{};
    std::vector<std::string> subjects; // element / edge / vertex names
    money cost;
    money profit_delta;
};

/// Deleted and added element sets between two solutions over one universe.
template <typename Id>
struct solution_diff {
    std::vector<Id> deleted; // sorted
    std::vector<Id> added;   // sorted
};

template <typename Id>
solution_diff<Id> diff_subsets(const std::set<Id>& before, const std::set<Id>& after) {
    solution_diff<Id> d;
    std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                        std::back_inserter(d.deleted));
    std::set_difference(after.begin(), after.end(), before.begin(), before.end(),
                        std::back_inserter(d.added));
    return d;
}

template <typename Id>
std::set<Id> apply_diff(std::set<Id> base, const solution_diff<Id>& d) {
    for (const auto& x : d.deleted) base.erase(x);
    for (const auto& x : d.added) base.insert(x);
    return base;
}

/// Removed / added / fixed split between two element universes.
template <typename Id>
struct element_set_delta_t {
    std::vector<Id> removed; // A0 \ A1
    std::vector<Id> added;   // A1 \ A0
    std::vector<Id> fixed;   // A0 ∩ A1
};

template <typename Id>
element_set_delta_t<Id> element_set_delta(const std::set<Id>& a0,
                                          const std::set<Id>& a1) {
    element_set_delta_t<Id> d;
    std::set_difference(a0.begin(), a0.end(), a1.begin(), a1.end(),
                        std::back_inserter(d.removed));
    std::set_difference(a1.begin(), a1.end(), a0.begin(), a0.end(),
                        std::back_inserter(d.added));
    std::set_intersection(a0.begin(), a0.end(), a1.begin(), a1.end(),
                          std::back_inserter(d.fixed));
    return d;
}

/// Per-element deletion/addition prices.
template <typename Id>
struct change_costs {
    std::map<Id, money> remove; // h-
    std::map<Id, money> insert; // h+

    friend bool operator==(const change_costs&, const change_costs&) = default;

    money removal(const Id& id) const {
        auto it = remove.find(id);
        if (it == remove.end())
            throw invalid_instance("change costs: missing h- entry");
        return it->second;
    }
    money insertion(const Id& id) const {
        auto it = insert.find(id);
        if (it == insert.end())
            throw invalid_instance("change costs: missing h+ entry");
        return it->second;
    }
};

enum class restructure_objective { max_goal_profit, min_proximity };

// ---------------------------------------------------------------------------
// knapsack restructuring
// ---------------------------------------------------------------------------

struct knapsack_plan {
    subset_solution result;
    solution_diff<int> diff;
    std::vector<change_op> ops;
    money change_cost;           // H
    money proximity;             // |c(S*) - c(goal optimum)|
    money goal_optimum;          // reference used for the proximity
};

namespace detail {

inline std::vector<change_op> subset_ops(const solution_diff<int>& d,
                                         const change_costs<int>& costs) {
    std::vector<change_op> ops;
    for (int id : d.deleted)
        ops.push_back({change_kind::delete_element,
                       {std::to_string(id)},
                       costs.removal(id),
                       money{}});
    for (int id : d.added)
        ops.push_back({change_kind::add_element,
                       {std::to_string(id)},
                       costs.insertion(id),
                       money{}});
    return ops;
}

} // namespace detail

/// One-stage knapsack restructuring: choose S* over the goal-stage item set
/// (keeping `fixed_core` in) so that the goal capacity holds and the change
/// cost H (h- over what leaves S0, h+ over what enters) stays within budget.
/// Both objectives optimize the same optimum value; they are exposed
/// separately because callers report them differently.
inline knapsack_plan restructure_knapsack(
    const subset_solution& s0, const knapsack_instance& goal,
    const change_costs<int>& costs, money budget,
    restructure_objective objective = restructure_objective::max_goal_profit,
    const std::set<int>& fixed_core = {}) {
    detail::validate(goal);
    if (budget.negative()) throw invalid_instance("restructure: negative budget");

    std::map<int, knapsack_item> pool;
    for (const auto& it : goal.items) pool[it.id] = it;
    for (int id : fixed_core)
        if (!pool.count(id))
            throw invalid_instance("restructure: fixed-core item " +
                                   std::to_string(id) +
                                   " is absent from the goal stage");
    const std::set<int> before(s0.ids.begin(), s0.ids.end());

    std::vector<int> open; // ids we may toggle
    for (const auto& [id, item] : pool)
        if (!fixed_core.count(id)) open.push_back(id);
    if (open.size() > 25)
        throw too_large("restructure: more than 25 changeable items");

    // cost of shedding s0 items that no longer exist at the goal stage
    money base_cost;
    for (int id : before)
        if (!pool.count(id)) base_cost += costs.removal(id);

    money core_profit, core_weight;
    for (int id : fixed_core) {
        core_profit += pool[id].profit;
        core_weight += pool[id].weight;
        if (!before.count(id)) base_cost += costs.insertion(id);
    }

    // goal reference optimum over the same universe / core constraint
    knapsack_instance reduced;
    reduced.capacity = goal.capacity - core_weight;
    for (int id : open) reduced.items.push_back(pool[id]);
    if (reduced.capacity.negative())
        throw infeasible("restructure: fixed core exceeds the goal capacity");
    const money goal_opt = core_profit + solve_knapsack(reduced).profit;

    struct best_t {
        money profit;
        money weight;
        money cost;
        std::vector<int> ids;
        int nops = 0;
        bool valid = false;
    } best;

    std::vector<int> chosen;
    auto consider = [&](money profit, money weight, money cost) {
        std::vector<int> full(fixed_core.begin(), fixed_core.end());
        full.insert(full.end(), chosen.begin(), chosen.end());
        std::sort(full.begin(), full.end());
        const int nops = [&] {
            int n = 0;
            for (int id : before)
                if (!std::binary_search(full.begin(), full.end(), id)) ++n;
            for (int id : full)
                if (!before.count(id)) ++n;
            return n;
        }();
        auto better = [&] {
            if (!best.valid) return true;
            if (profit != best.profit) return profit > best.profit;
            if (nops != best.nops) return nops < best.nops;
            if (cost != best.cost) return cost < best.cost;
            return detail::lex_less(full, best.ids);
        };
        if (better())
            best = {profit, weight, cost, std::move(full), nops, true};
    };
    auto dfs = [&](auto&& self, std::size_t i, money profit, money weight,
                   money cost) -> void {
        if (cost > budget) return;
        if (weight > goal.capacity) return;
        if (i == open.size()) {
            consider(profit, weight, cost);
            return;
        }
        const int id = open[i];
        const auto& item = pool[id];
        const bool was_in = before.count(id) != 0;
        // keep-or-add the item
        chosen.push_back(id);
        self(self, i + 1, profit + item.profit, weight + item.weight,
             cost + (was_in ? money{} : costs.insertion(id)));
        chosen.pop_back();
        // leave it out
        self(self, i + 1, profit, weight,
             cost + (was_in ? costs.removal(id) : money{}));
    };
    dfs(dfs, 0, core_profit, core_weight, base_cost);

    if (!best.valid)
        throw infeasible_with_budget(
            "restructure: no feasible solution within budget " + budget.str());

    knapsack_plan plan;
    plan.result.ids = best.ids;
    plan.result.profit = best.profit;
    plan.result.weight = best.weight;
    plan.diff = diff_subsets(before, std::set<int>(best.ids.begin(), best.ids.end()));
    plan.ops = detail::subset_ops(plan.diff, costs);
    plan.change_cost = best.cost;
    plan.goal_optimum = goal_opt;
    plan.proximity = abs_diff(best.profit, goal_opt);
    (void)objective; // both objectives share the optimum; kept for reporting
    return plan;
}

// ---------------------------------------------------------------------------
// multiple choice restructuring
// ---------------------------------------------------------------------------

struct multiple_choice_plan {
    group_selection result;
    std::vector<change_op> ops;
    money change_cost;
    money proximity;
    money goal_optimum;
};

/// One-stage multiple-choice restructuring: per group keep the current item,
/// replace it, drop it, or fill an empty slot; maximize goal profit under
/// the change budget. Equal-profit plans prefer fewer ops, then the earliest
/// changed group, then lower cost.
inline multiple_choice_plan restructure_multiple_choice(
    const std::vector<std::string>& current, const multiple_choice_instance& goal,
    const change_costs<std::string>& costs, money budget) {
    detail::validate(goal);
    if (budget.negative()) throw invalid_instance("restructure: negative budget");
    const std::size_t m = goal.groups.size();

    // locate current picks by goal-stage group; items gone from the goal
    // stage must leave (their h- is charged up front)
    std::vector<std::optional<std::string>> cur(m);
    money base_cost;
    std::set<std::string> known;
    for (std::size_t g = 0; g < m; ++g)
        for (const auto& it : goal.groups[g].items) known.insert(it.id);
    std::map<std::string, std::size_t> group_of;
    for (std::size_t g = 0; g < m; ++g)
        for (const auto& it : goal.groups[g].items) group_of[it.id] = g;
    std::set<std::string> seen;
    for (const auto& id : current) {
        if (!seen.insert(id).second)
            throw invalid_ops("restructure: duplicate id in current selection");
        auto it = group_of.find(id);
        if (it == group_of.end()) {
            base_cost += costs.removal(id); // forced out
            continue;
        }
        if (cur[it->second])
            throw invalid_ops("restructure: two current items in one group");
        cur[it->second] = id;
    }

    const money goal_opt = solve_multiple_choice(goal).profit;

    struct option {
        std::optional<int> item; // index into the group, nullopt = empty slot
        money cost;
        money profit;
        money weight;
        bool changed;
    };
    std::vector<std::vector<option>> options(m);
    for (std::size_t g = 0; g < m; ++g) {
        const auto& grp = goal.groups[g];
        const auto& have = cur[g];
        // stay as-is
        if (have) {
            for (std::size_t j = 0; j < grp.items.size(); ++j)
                if (grp.items[j].id == *have)
                    options[g].push_back({static_cast<int>(j), money{},
                                          grp.items[j].profit,
                                          grp.items[j].weight, false});
        } else {
            options[g].push_back({std::nullopt, money{}, money{}, money{}, false});
        }
        for (std::size_t j = 0; j < grp.items.size(); ++j) {
            if (have && grp.items[j].id == *have) continue;
            money c = costs.insertion(grp.items[j].id);
            if (have) c += costs.removal(*have);
            options[g].push_back({static_cast<int>(j), c, grp.items[j].profit,
                                  grp.items[j].weight, true});
        }
        if (have) // drop without replacement
            options[g].push_back(
                {std::nullopt, costs.removal(*have), money{}, money{}, true});
    }

    std::vector<money> suffix_bound(m + 1);
    for (std::size_t g = m; g-- > 0;) {
        money bestp;
        for (const auto& o : options[g]) bestp = std::max(bestp, o.profit);
        suffix_bound[g] = suffix_bound[g + 1] + bestp;
    }

    struct best_t {
        money profit, weight, cost;
        std::vector<int> picks; // option index per group
        int nops = 0;
        std::vector<int> changed_groups;
        bool valid = false;
    } best;
    std::vector<int> picks;
    auto consider = [&](money p, money w, money c) {
        int nops = 0;
        std::vector<int> changed;
        for (std::size_t g = 0; g < m; ++g)
            if (options[g][static_cast<std::size_t>(picks[g])].changed) {
                ++nops;
                changed.push_back(static_cast<int>(g));
            }
        auto better = [&] {
            if (!best.valid) return true;
            if (p != best.profit) return p > best.profit;
            if (nops != best.nops) return nops < best.nops;
            if (changed != best.changed_groups)
                return detail::lex_less(changed, best.changed_groups);
            if (c != best.cost) return c < best.cost;
            return detail::lex_less(picks, best.picks);
        };
        if (better()) best = {p, w, c, picks, nops, changed, true};
    };
    auto dfs = [&](auto&& self, std::size_t g, money p, money w, money c) -> void {
        if (c > budget || w > goal.capacity) return;
        if (g == m) {
            consider(p, w, c);
            return;
        }
        if (best.valid && p + suffix_bound[g] < best.profit) return;
        for (std::size_t j = 0; j < options[g].size(); ++j) {
            const auto& o = options[g][j];
            picks.push_back(static_cast<int>(j));
            self(self, g + 1, p + o.profit, w + o.weight, c + o.cost);
            picks.pop_back();
        }
    };
    dfs(dfs, 0, money{}, money{}, base_cost);
    if (!best.valid)
        throw infeasible_with_budget(
            "restructure: no valid selection within budget " + budget.str());

    multiple_choice_plan plan;
    plan.change_cost = best.cost;
    plan.goal_optimum = goal_opt;
    for (std::size_t g = 0; g < m; ++g) {
        const auto& o = options[g][static_cast<std::size_t>(best.picks[g])];
        if (o.item)
            plan.result.chosen.emplace_back(static_cast<int>(g), *o.item);
        if (!o.changed) continue;
        const auto& grp = goal.groups[g];
        if (o.item && cur[g])
            plan.ops.push_back({change_kind::replace_in_group,
                                {*cur[g], grp.items[static_cast<std::size_t>(*o.item)].id},
                                o.cost,
                                grp.items[static_cast<std::size_t>(*o.item)].profit -
                                    [&] {
                                        for (const auto& it : grp.items)
                                            if (it.id == *cur[g]) return it.profit;
                                        return money{};
                                    }()});
        else if (o.item)
            plan.ops.push_back({change_kind::add_element,
                                {grp.items[static_cast<std::size_t>(*o.item)].id},
                                o.cost,
                                grp.items[static_cast<std::size_t>(*o.item)].profit});
        else
            plan.ops.push_back({change_kind::delete_element, {*cur[g]}, o.cost,
                                money{}});
    }
    plan.result.profit = best.profit;
    plan.result.weight = best.weight;
    plan.proximity = abs_diff(best.profit, goal_opt);
    return plan;
}

// ---------------------------------------------------------------------------
// assignment (reassignment ops) restructuring
// ---------------------------------------------------------------------------

struct reassignment_op {
    std::string id;      // op name
    std::string element; // element being moved
    int from = 0;        // current position
    int to = 0;          // new position
    money delete_cost;   // h- of the old slot
    money add_cost;      // h+ of the new slot
    money profit;        // goal-stage gain of the move

    money cost() const { return delete_cost + add_cost; }

    friend bool operator==(const reassignment_op&, const reassignment_op&) = default;
};

struct assignment_plan {
    std::vector<std::string> selected; // op ids, in universe order
    std::map<std::string, int> assignment;
    money change_cost;
    money profit;
};

/// Budgeted selection of reassignment ops, at most one per element.
inline assignment_plan restructure_assignment(
    const std::map<std::string, int>& s1, const std::vector<reassignment_op>& ops,
    money budget) {
    if (budget.negative()) throw invalid_instance("restructure: negative budget");
    std::map<std::string, std::vector<std::size_t>> per_element;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const auto& op = ops[i];
        auto it = s1.find(op.element);
        if (it == s1.end())
            throw invalid_ops("restructure: op '" + op.id +
                              "' moves unknown element '" + op.element + "'");
        if (it->second != op.from)
            throw invalid_ops("restructure: op '" + op.id +
                              "' does not start from the current position of '" +
                              op.element + "'");
        per_element[op.element].push_back(i);
    }
    if (ops.size() > 20)
        throw too_large("restructure: more than 20 reassignment ops");

    // group per element, "no move" always available
    std::vector<std::vector<std::optional<std::size_t>>> groups;
    for (auto& [el, idxs] : per_element) {
        std::vector<std::optional<std::size_t>> g{std::nullopt};
        for (auto i : idxs) g.emplace_back(i);
        groups.push_back(std::move(g));
    }

    struct best_t {
        money profit, cost;
        std::vector<std::size_t> sel;
        bool valid = false;
    } best;
    std::vector<std::size_t> sel;
    auto consider = [&](money p, money c) {
        auto sorted = sel;
        std::sort(sorted.begin(), sorted.end());
        auto better = [&] {
            if (!best.valid) return true;
            if (p != best.profit) return p > best.profit;
            if (sel.size() != best.sel.size()) return sel.size() < best.sel.size();
            if (c != best.cost) return c < best.cost;
            return detail::lex_less(sorted, best.sel);
        };
        if (better()) {
            best = {p, c, sorted, true};
        }
    };
    auto dfs = [&](auto&& self, std::size_t g, money p, money c) -> void {
        if (c > budget) return;
        if (g == groups.size()) {
            consider(p, c);
            return;
        }
        for (const auto& choice : groups[g]) {
            if (!choice) {
                self(self, g + 1, p, c);
            } else {
                sel.push_back(*choice);
                self(self, g + 1, p + ops[*choice].profit, c + ops[*choice].cost());
                sel.pop_back();
            }
        }
    };
    dfs(dfs, 0, money{}, money{});

    assignment_plan plan;
    plan.assignment = s1;
    plan.profit = best.profit;
    plan.change_cost = best.cost;
    for (std::size_t i : best.sel) {
        plan.selected.push_back(ops[i].id);
        plan.assignment[ops[i].element] = ops[i].to;
    }
    return plan;
}

// ---------------------------------------------------------------------------
// spanning / Steiner tree restructuring
// ---------------------------------------------------------------------------

enum class tree_proximity { edge_symmetric_difference, weight_delta };

struct tree_plan {
    tree_solution result;
    solution_diff<edge_key> edge_diff;
    solution_diff<vertex_id> steiner_diff;
    money change_cost;
    money proximity;
    tree_solution goal_tree;
};

/// Per-edge deletion/addition prices.
struct edge_change_costs {
    std::map<edge_key, money, detail::edge_key_less> remove, insert;

    friend bool operator==(const edge_change_costs&, const edge_change_costs&) = default;

    money removal(const edge_key& e) const {
        auto it = remove.find(e);
        if (it == remove.end())
            throw invalid_instance("edge costs: missing h- entry");
        return it->second;
    }
    money insertion(const edge_key& e) const {
        auto it = insert.find(e);
        if (it == insert.end())
            throw invalid_instance("edge costs: missing h+ entry");
        return it->second;
    }
};

namespace detail {

/// All spanning trees of the graph restricted to `verts`, via edge-subset
/// enumeration. Desk scale only; guarded by the callers' size caps.
template <typename Fn>
void for_each_spanning_tree(const std::vector<graph_edge>& edges,
                            const std::set<vertex_id>& verts, Fn&& fn) {
    std::vector<graph_edge> usable;
    for (const auto& e : edges)
        if (verts.count(e.u) && verts.count(e.v)) usable.push_back(e);
    std::sort(usable.begin(), usable.end(),
              [](const auto& a, const auto& b) {
                  return edge_key_less{}(a.key(), b.key());
              });
    const std::size_t need = verts.empty() ? 0 : verts.size() - 1;
    if (usable.size() < need) return;
    std::map<vertex_id, std::size_t, natural_less> index;
    for (const auto& v : verts) index.emplace(v, index.size());
    std::vector<std::size_t> pick;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (pick.size() == need) {
            union_find uf(verts.size());
            for (auto i : pick)
                if (!uf.unite(index[usable[i].u], index[usable[i].v])) return;
            std::vector<edge_key> keys;
            money w;
            for (auto i : pick) {
                keys.push_back(usable[i].key());
                w += usable[i].weight;
            }
            fn(keys, w); // keys already in natural order
            return;
        }
        for (std::size_t i = start;
             usable.size() - i >= need - pick.size(); ++i) {
            pick.push_back(i);
            self(self, i + 1);
            pick.pop_back();
        }
    };
    rec(rec, 0);
}

} // namespace detail

/// One-stage spanning-tree restructuring: pick a spanning tree of the goal
/// graph whose edge-change cost from t1 stays within budget, minimizing the
/// chosen proximity to the goal-stage minimum spanning tree.
inline tree_plan restructure_tree(
    const tree_solution& t1, const weighted_graph& goal,
    const edge_change_costs& costs, money budget,
    tree_proximity proximity = tree_proximity::edge_symmetric_difference) {
    detail::validate(goal);
    if (budget.negative()) throw invalid_instance("restructure: negative budget");
    if (goal.vertices.size() > 10)
        throw too_large("restructure: more than 10 vertices");
    const tree_solution goal_tree = minimum_spanning_tree(goal);
    const std::set<edge_key, detail::edge_key_less> before(t1.edges.begin(),
                                                           t1.edges.end());
    const std::set<edge_key, detail::edge_key_less> goal_edges(
        goal_tree.edges.begin(), goal_tree.edges.end());
    const std::set<vertex_id> verts(goal.vertices.begin(), goal.vertices.end());

    struct best_t {
        money prox, cost, weight;
        std::vector<edge_key> edges;
        bool valid = false;
    } best;
    detail::for_each_spanning_tree(
        goal.edges, verts, [&](const std::vector<edge_key>& keys, money w) {
            money H;
            for (const auto& e : before)
                if (!std::binary_search(keys.begin(), keys.end(), e,
                                        detail::edge_key_less{}))
                    H += costs.removal(e);
            for (const auto& e : keys)
                if (!before.count(e)) H += costs.insertion(e);
            if (H > budget) return;
            money prox;
            if (proximity == tree_proximity::edge_symmetric_difference) {
                int diff = 0;
                for (const auto& e : keys)
                    if (!goal_edges.count(e)) ++diff;
                for (const auto& e : goal_edges)
                    if (!std::binary_search(keys.begin(), keys.end(), e,
                                            detail::edge_key_less{}))
                        ++diff;
                prox = money::from_units(diff);
            } else {
                prox = abs_diff(w, goal_tree.weight);
            }
            auto better = [&] {
                if (!best.valid) return true;
                if (prox != best.prox) return prox < best.prox;
                if (H != best.cost) return H < best.cost;
                return std::lexicographical_compare(
                    keys.begin(), keys.end(), best.edges.begin(),
                    best.edges.end(), detail::edge_key_less{});
            };
            if (better()) best = {prox, H, w, keys, true};
        });
    if (!best.valid)
        throw infeasible_with_budget(
            "restructure: no spanning tree within budget " + budget.str());

    tree_plan plan;
    plan.result.edges = best.edges;
    plan.result.weight = best.weight;
    plan.goal_tree = goal_tree;
    plan.change_cost = best.cost;
    plan.proximity = best.prox;
    std::set<edge_key, detail::edge_key_less> after(best.edges.begin(),
                                                    best.edges.end());
    for (const auto& e : before)
        if (!after.count(e)) plan.edge_diff.deleted.push_back(e);
    for (const auto& e : after)
        if (!before.count(e)) plan.edge_diff.added.push_back(e);
    return plan;
}

/// Steiner-tree restructuring: additionally choose the used candidate set
/// Z*; vertex deletions/additions are charged w-/w+ on top of edge costs.
inline tree_plan restructure_steiner(
    const tree_solution& s1, const weighted_graph& goal,
    const std::vector<vertex_id>& terminals,
    const edge_change_costs& edge_costs,
    const change_costs<vertex_id>& steiner_costs, money budget) {
    detail::validate(goal);
    if (budget.negative()) throw invalid_instance("restructure: negative budget");
    if (goal.steiner_candidates.size() > 10)
        throw too_large("restructure: more than 10 Steiner candidates");
    const tree_solution goal_tree = steiner_tree(goal, terminals);
    const std::set<edge_key, detail::edge_key_less> before(s1.edges.begin(),
                                                           s1.edges.end());
    const std::set<vertex_id> z1(s1.steiner_vertices.begin(),
                                 s1.steiner_vertices.end());
    const std::set<edge_key, detail::edge_key_less> goal_edges(
        goal_tree.edges.begin(), goal_tree.edges.end());

    struct best_t {
        money prox, cost, weight;
        std::vector<edge_key> edges;
        std::vector<vertex_id> z;
        bool valid = false;
    } best;
    const auto& z = goal.steiner_candidates;
    for (std::uint32_t mask = 0; mask < (1u << z.size()); ++mask) {
        std::set<vertex_id> verts(terminals.begin(), terminals.end());
        std::vector<vertex_id> used;
        for (std::size_t i = 0; i < z.size(); ++i)
            if (mask >> i & 1u) {
                verts.insert(z[i]);
                used.push_back(z[i]);
            }
        std::sort(used.begin(), used.end(), detail::natural_less{});
        money vertex_cost;
        for (const auto& v : z1)
            if (!verts.count(v)) vertex_cost += steiner_costs.removal(v);
        for (const auto& v : used)
            if (!z1.count(v)) vertex_cost += steiner_costs.insertion(v);
        if (vertex_cost > budget) continue;
        detail::for_each_spanning_tree(
            goal.edges, verts, [&](const std::vector<edge_key>& keys, money w) {
                money H = vertex_cost;
                for (const auto& e : before)
                    if (!std::binary_search(keys.begin(), keys.end(), e,
                                            detail::edge_key_less{}))
                        H += edge_costs.removal(e);
                for (const auto& e : keys)
                    if (!before.count(e)) H += edge_costs.insertion(e);
                if (H > budget) return;
                int diff = 0;
                for (const auto& e : keys)
                    if (!goal_edges.count(e)) ++diff;
                for (const auto& e : goal_edges)
                    if (!std::binary_search(keys.begin(), keys.end(), e,
                                            detail::edge_key_less{}))
                        ++diff;
                const money prox = money::from_units(diff);
                auto better = [&] {
                    if (!best.valid) return true;
                    if (prox != best.prox) return prox < best.prox;
                    if (H != best.cost) return H < best.cost;
                    if (used != best.z) return detail::lex_less(used, best.z);
                    return std::lexicographical_compare(
                        keys.begin(), keys.end(), best.edges.begin(),
                        best.edges.end(), detail::edge_key_less{});
                };
                if (better()) best = {prox, H, w, keys, used, true};
            });
    }
    if (!best.valid)
        throw infeasible_with_budget(
            "restructure: no Steiner tree within budget " + budget.str());

    tree_plan plan;
    plan.result.edges = best.edges;
    plan.result.weight = best.weight;
    plan.result.steiner_vertices = best.z;
    plan.goal_tree = goal_tree;
    plan.change_cost = best.cost;
    plan.proximity = best.prox;
    std::set<edge_key, detail::edge_key_less> after(best.edges.begin(),
                                                    best.edges.end());
    for (const auto& e : before)
        if (!after.count(e)) plan.edge_diff.deleted.push_back(e);
    for (const auto& e : after)
        if (!before.count(e)) plan.edge_diff.added.push_back(e);
    const std::set<vertex_id> zafter(best.z.begin(), best.z.end());
    for (const auto& v : z1)
        if (!zafter.count(v)) plan.steiner_diff.deleted.push_back(v);
    for (const auto& v : zafter)
        if (!z1.count(v)) plan.steiner_diff.added.push_back(v);
    std::sort(plan.steiner_diff.deleted.begin(), plan.steiner_diff.deleted.end(),
              detail::natural_less{});
    std::sort(plan.steiner_diff.added.begin(), plan.steiner_diff.added.end(),
              detail::natural_less{});
    return plan;
}

// ---------------------------------------------------------------------------
// clustering restructuring
// ---------------------------------------------------------------------------

struct partition {
    // cluster name -> elements; cluster count stays fixed
    std::map<std::string, std::set<std::string>> clusters;

    friend bool operator==(const partition&, const partition&) = default;
};

struct move_op {
    std::string id;
    std::string element;
    std::string to; // destination cluster
    money cost;     // a(O)
    money profit;   // c(O)

    friend bool operator==(const move_op&, const move_op&) = default;
};

enum class clustering_model { knapsack, multiple_choice };

struct clustering_plan {
    partition result;
    std::vector<std::string> selected; // op ids
    money change_cost;
    money profit;
};

inline partition apply_moves(partition x, const std::vector<move_op>& moves) {
    for (const auto& mv : moves) {
        if (!x.clusters.count(mv.to))
            throw invalid_ops("clustering: unknown destination cluster '" +
                              mv.to + "'");
        bool found = false;
        for (auto& [name, members] : x.clusters)
            if (members.erase(mv.element)) found = true;
        if (!found)
            throw invalid_ops("clustering: unknown element '" + mv.element + "'");
        x.clusters[mv.to].insert(mv.element);
    }
    return x;
}

/// Budgeted selection of element moves. The knapsack model treats ops as
/// independent and rejects universes where two ops touch one element; the
/// multiple-choice model groups ops per element with "no move" available.
inline clustering_plan restructure_clustering(
    const partition& x1, const std::vector<move_op>& ops, money budget,
    clustering_model model = clustering_model::multiple_choice) {
    if (budget.negative()) throw invalid_instance("restructure: negative budget");
    if (ops.size() > 20) throw too_large("restructure: more than 20 move ops");

    std::vector<std::vector<std::optional<std::size_t>>> groups;
    if (model == clustering_model::knapsack) {
        std::set<std::string> touched;
        for (const auto& op : ops)
            if (!touched.insert(op.element).second)
                throw invalid_ops(
                    "clustering: two knapsack-model ops move element '" +
                    op.element + "'");
        for (std::size_t i = 0; i < ops.size(); ++i)
            groups.push_back({std::nullopt, i});
    } else {
        std::map<std::string, std::vector<std::size_t>> per_element;
        for (std::size_t i = 0; i < ops.size(); ++i)
            per_element[ops[i].element].push_back(i);
        for (auto& [el, idxs] : per_element) {
            std::vector<std::optional<std::size_t>> g{std::nullopt};
            for (auto i : idxs) g.emplace_back(i);
            groups.push_back(std::move(g));
        }
    }

    struct best_t {
        money profit, cost;
        std::vector<std::size_t> sel;
        bool valid = false;
    } best;
    std::vector<std::size_t> sel;
    auto consider = [&](money p, money c) {
        auto sorted = sel;
        std::sort(sorted.begin(), sorted.end());
        auto better = [&] {
            if (!best.valid) return true;
            if (p != best.profit) return p > best.profit;
            if (sel.size() != best.sel.size()) return sel.size() < best.sel.size();
            if (c != best.cost) return c < best.cost;
            return detail::lex_less(sorted, best.sel);
        };
        if (better()) best = {p, c, sorted, true};
    };
    auto dfs = [&](auto&& self, std::size_t g, money p, money c) -> void {
        if (c > budget) return;
        if (g == groups.size()) {
            consider(p, c);
            return;
        }
        for (const auto& choice : groups[g]) {
            if (!choice) {
                self(self, g + 1, p, c);
            } else {
                sel.push_back(*choice);
                self(self, g + 1, p + ops[*choice].profit, c + ops[*choice].cost);
                sel.pop_back();
            }
        }
    };
    dfs(dfs, 0, money{}, money{});

    clustering_plan plan;
    std::vector<move_op> chosen;
    for (std::size_t i : best.sel) {
        chosen.push_back(ops[i]);
        plan.selected.push_back(ops[i].id);
    }
    plan.result = apply_moves(x1, chosen);
    plan.profit = best.profit;
    plan.change_cost = best.cost;
    return plan;
}

// ---------------------------------------------------------------------------
// ranking (sorting) restructuring
// ---------------------------------------------------------------------------

struct layered_ranking {
    std::vector<std::set<std::string>> layers; // layer 1 first (best)

    friend bool operator==(const layered_ranking&, const layered_ranking&) = default;

    int layer_of(const std::string& e) const {
        for (std::size_t i = 0; i < layers.size(); ++i)
            if (layers[i].count(e)) return static_cast<int>(i) + 1;
        throw invalid_instance("ranking: element '" + e + "' is unranked");
    }
};

/// Total absolute layer displacement between two rankings over one universe.
inline int ranking_distance(const layered_ranking& a, const layered_ranking& b) {
    if (a.layers.size() != b.layers.size())
        throw invalid_instance("ranking: different layer counts");
    int d = 0;
    for (const auto& layer : a.layers)
        for (const auto& e : layer) d += std::abs(a.layer_of(e) - b.layer_of(e));
    return d;
}

struct ranking_plan {
    layered_ranking result;
    std::vector<change_op> ops;
    money change_cost;
    int distance = 0; // delta(R*, R2)
};

/// Move elements between layers (cost per element/target layer) so the
/// result is as close to r2 as the strict cost budget allows.
inline ranking_plan restructure_ranking(
    const layered_ranking& r1, const layered_ranking& r2,
    const std::map<std::pair<std::string, int>, money>& move_costs, money budget) {
    if (r1.layers.size() != r2.layers.size())
        throw invalid_instance("ranking: layer counts differ");
    std::vector<std::string> elements;
    for (const auto& layer : r1.layers)
        for (const auto& e : layer) elements.push_back(e);
    std::sort(elements.begin(), elements.end(), detail::natural_less{});
    {
        std::set<std::string> u2;
        for (const auto& layer : r2.layers) u2.insert(layer.begin(), layer.end());
        if (u2 != std::set<std::string>(elements.begin(), elements.end()))
            throw invalid_instance("ranking: different element universes");
    }
    const int k = static_cast<int>(r1.layers.size());

    auto cost_of = [&](const std::string& e, int from, int to) -> money {
        if (from == to) return money{};
        auto it = move_costs.find({e, to});
        if (it == move_costs.end())
            throw invalid_instance("ranking: missing move cost for '" + e + "'");
        return it->second;
    };

    struct best_t {
        int dist = 0;
        money cost;
        std::vector<int> layers;
        bool valid = false;
    } best;
    std::vector<int> assign;
    auto dfs = [&](auto&& self, std::size_t i, int dist, money cost) -> void {
        if (!(cost < budget)) return; // strict budget
        if (i == elements.size()) {
            auto better = [&] {
                if (!best.valid) return true;
                if (dist != best.dist) return dist < best.dist;
                if (cost != best.cost) return cost < best.cost;
                return detail::lex_less(assign, best.layers);
            };
            if (better()) best = {dist, cost, assign, true};
            return;
        }
        const auto& e = elements[i];
        const int from = r1.layer_of(e);
        const int want = r2.layer_of(e);
        for (int to = 1; to <= k; ++to) {
            assign.push_back(to);
            self(self, i + 1, dist + std::abs(to - want),
                 cost + cost_of(e, from, to));
            assign.pop_back();
        }
    };
    dfs(dfs, 0, 0, money{});
    if (!best.valid)
        throw infeasible_with_budget("restructure: ranking budget is not positive");

    ranking_plan plan;
    plan.result.layers.assign(static_cast<std::size_t>(k), {});
    for (std::size_t i = 0; i < elements.size(); ++i) {
        plan.result.layers[static_cast<std::size_t>(best.layers[i]) - 1].insert(
            elements[i]);
        const int from = r1.layer_of(elements[i]);
        if (best.layers[i] != from) {
            plan.ops.push_back({change_kind::move_between_clusters,
                                {elements[i], std::to_string(best.layers[i])},
                                cost_of(elements[i], from, best.layers[i]),
                                money{}});
            plan.change_cost += plan.ops.back().cost;
        }
    }
    plan.distance = best.dist;
    return plan;
}

// ---------------------------------------------------------------------------
// HMMD restructuring
// ---------------------------------------------------------------------------

struct hmmd_budget {
    bool is_money = false;
    int op_count = 0; // used when !is_money
    money amount;     // used when is_money

    friend bool operator==(const hmmd_budget&, const hmmd_budget&) = default;

    static hmmd_budget ops(int n) { return {false, n, money{}}; }
    static hmmd_budget cash(money m) { return {true, 0, m}; }
};

struct hmmd_plan {
    composite_solution result;
    int op_count = 0;   // H as number of changed components
    money money_cost;   // H as money, when DA change costs are present
    bool money_budget = false;
    int rho_elements = 0;
    int rho_compat = 0;
};

/// Pareto-nondominated restructuring plans over (H, rho1, rho2). H counts
/// every changed component position, including replacements forced by
/// alternatives that are absent at the goal stage. The proximity reference
/// is the canonical goal-stage optimum (best compatibility first).
inline std::vector<hmmd_plan> restructure_hmmd(
    const std::vector<std::string>& t0, const morph_system& goal,
    std::optional<hmmd_budget> budget = std::nullopt) {
    detail::validate(goal);
    if (t0.size() != goal.components.size())
        throw invalid_instance("restructure: composite size mismatch");

    const auto front = hmmd_synthesize(goal); // throws infeasible when empty
    // canonical reference: best compatibility, then best count tally
    const composite_solution* ref = &front[0];
    for (const auto& cand : front) {
        if (cand.quality.w.value > ref->quality.w.value ||
            (cand.quality.w.value == ref->quality.w.value &&
             cand.quality.n.deficiency() < ref->quality.n.deficiency()))
            ref = &cand;
    }
    const quality_vector goal_q = ref->quality;

    struct entry {
        hmmd_plan plan;
        std::vector<int> key; // (H, rho1, rho2) for domination
    };
    std::vector<entry> all;
    const std::size_t m = goal.components.size();
    std::vector<std::size_t> idx(m, 0);
    for (;;) {
        std::vector<std::string> choice;
        for (std::size_t i = 0; i < m; ++i)
            choice.push_back(goal.components[i].das[idx[i]].id);
        const auto q = evaluate_composite(goal, choice);
        if (q.w.value >= 1) {
            hmmd_plan plan;
            plan.result = {choice, q};
            money cash;
            for (std::size_t i = 0; i < m; ++i)
                if (choice[i] != t0[i]) {
                    ++plan.op_count;
                    const auto* nu = goal.find_da(i, choice[i]);
                    cash += nu->add_cost;
                    if (const auto* old = goal.find_da(i, t0[i]))
                        cash += old->delete_cost;
                }
            plan.money_cost = cash;
            plan.rho_elements = element_improvement_steps(q.n, goal_q.n);
            plan.rho_compat = compat_improvement_steps(q.w, goal_q.w);
            bool within = true;
            const bool money_metric = budget && budget->is_money;
            if (budget) {
                plan.money_budget = budget->is_money;
                within = budget->is_money ? plan.money_cost <= budget->amount
                                          : plan.op_count <= budget->op_count;
            }
            if (within)
                all.push_back(
                    {plan,
                     {money_metric ? static_cast<int>(plan.money_cost.tenths())
                                   : plan.op_count,
                      plan.rho_elements, plan.rho_compat}});
        }
        std::size_t i = m;
        bool done = false;
        while (i > 0) {
            --i;
            if (++idx[i] < goal.components[i].das.size()) break;
            idx[i] = 0;
            if (i == 0) done = true;
        }
        if (done) break;
    }
    if (all.empty())
        throw infeasible_with_budget("restructure: no admissible composite in budget");

    std::vector<hmmd_plan> out;
    for (const auto& e : all) {
        bool dominated = false;
        for (const auto& o : all) {
            if (o.key == e.key) continue;
            bool le = true;
            for (std::size_t i = 0; i < 3; ++i)
                if (o.key[i] > e.key[i]) le = false;
            if (le) {
                dominated = true;
                break;
            }
        }
        if (!dominated) out.push_back(e.plan);
    }
    return out;
}

} // namespace restruct
