#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "restruct/errors.hpp"
#include "restruct/instance.hpp"
#include "restruct/multistage.hpp"
#include "restruct/oracle.hpp"
#include "restruct/restructure.hpp"
#include "restruct/solvers.hpp"

namespace restruct {

namespace detail {

inline json money_vec(const std::vector<money>& v) {
    json out = json::array();
    for (money m : v) out.push_back(m.str());
    return out;
}

inline json subset_json(const subset_solution& s) {
    json j;
    j["ids"] = s.ids;
    j["profit"] = s.profit.str();
    j["weight"] = s.weight.str();
    return j;
}

inline json selection_json(const group_selection& s,
                           const multiple_choice_instance& inst) {
    json j;
    j["ids"] = s.ids(inst);
    j["profit"] = s.profit.str();
    j["weight"] = s.weight.str();
    return j;
}

inline json tree_json(const tree_solution& t) {
    json j;
    json edges = json::array();
    for (const auto& e : t.edges) edges.push_back(json::array({e.first, e.second}));
    j["edges"] = edges;
    if (!t.steiner_vertices.empty()) j["steiner"] = t.steiner_vertices;
    j["weight"] = t.weight.str();
    return j;
}

inline json composite_json(const composite_solution& c) {
    json j;
    j["das"] = c.das;
    j["quality"] = c.quality.str();
    return j;
}

inline json ops_json(const std::vector<change_op>& ops) {
    json out = json::array();
    for (const auto& op : ops) {
        json jo;
        jo["kind"] = to_string(op.kind);
        jo["subjects"] = op.subjects;
        jo["cost"] = op.cost.str();
        out.push_back(jo);
    }
    return out;
}

template <typename Id>
json diff_json(const solution_diff<Id>& d) {
    json j;
    j["deleted"] = d.deleted;
    j["added"] = d.added;
    return j;
}

inline json edge_diff_json(const solution_diff<edge_key>& d) {
    json j;
    auto arr = [](const std::vector<edge_key>& v) {
        json out = json::array();
        for (const auto& e : v) out.push_back(json::array({e.first, e.second}));
        return out;
    };
    j["deleted"] = arr(d.deleted);
    j["added"] = arr(d.added);
    return j;
}

inline const stage_payload& stage_at(const instance_document& doc, std::size_t i) {
    if (i >= doc.stages.size())
        throw parse_error("stage index " + std::to_string(i) + " out of range");
    return doc.stages[i];
}

inline money required_budget(const std::optional<money>& override_budget,
                             const std::optional<money>& stage_budget) {
    if (override_budget) return *override_budget;
    if (stage_budget) return *stage_budget;
    throw parse_error("no budget: pass --budget or set one on the goal stage");
}

/// Canonical representative of an hmmd front: best compatibility first,
/// then the smallest count deficiency, then lexicographic alternatives.
inline const composite_solution& canonical_composite(
    const std::vector<composite_solution>& front) {
    const composite_solution* best = &front.front();
    for (const auto& c : front) {
        auto better = [&] {
            if (c.quality.w.value != best->quality.w.value)
                return c.quality.w.value > best->quality.w.value;
            if (c.quality.n.deficiency() != best->quality.n.deficiency())
                return c.quality.n.deficiency() < best->quality.n.deficiency();
            return lex_less(c.das, best->das);
        };
        if (better()) best = &c;
    }
    return *best;
}

} // namespace detail

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

inline json cmd_solve(const instance_document& doc, std::size_t stage,
                      bool with_oracle = false) {
    const auto& payload = detail::stage_at(doc, stage);
    json rep;
    rep["command"] = "solve";
    rep["kind"] = to_string(doc.kind);
    rep["stage"] = stage;
    switch (doc.kind) {
        case problem_kind::knapsack: {
            const auto& st = std::get<knapsack_stage>(payload);
            const auto sol = solve_knapsack(st.instance);
            rep["solution"] = detail::subset_json(sol);
            rep["objective"] = sol.profit.str();
            if (with_oracle) {
                const auto o = oracle::knapsack(st.instance);
                rep["oracle"] = json{{"objective", o.objective.str()},
                                     {"optima", o.optima_count},
                                     {"enumerated", o.enumeration_size},
                                     {"verdict", o.objective == sol.profit &&
                                                         o.canonical.ids == sol.ids
                                                     ? "match"
                                                     : "mismatch"}};
            }
            break;
        }
        case problem_kind::multiple_choice: {
            const auto& st = std::get<multiple_choice_stage>(payload);
            const auto sol = solve_multiple_choice(st.instance);
            rep["solution"] = detail::selection_json(sol, st.instance);
            rep["objective"] = sol.profit.str();
            if (with_oracle) {
                const auto o = oracle::multiple_choice(st.instance);
                rep["oracle"] = json{{"objective", o.objective.str()},
                                     {"optima", o.optima_count},
                                     {"enumerated", o.enumeration_size},
                                     {"verdict", o.objective == sol.profit &&
                                                         o.canonical.chosen == sol.chosen
                                                     ? "match"
                                                     : "mismatch"}};
            }
            break;
        }
        case problem_kind::assignment: {
            const auto& st = std::get<assignment_stage>(payload);
            if (!st.matrix)
                throw parse_error("assignment stage has no profit matrix to solve");
            const auto sol = solve_assignment(*st.matrix);
            rep["solution"] = json{{"positions", sol.position}};
            rep["objective"] = sol.profit.str();
            if (with_oracle) {
                const auto o = oracle::assignment(*st.matrix);
                rep["oracle"] = json{{"objective", o.objective.str()},
                                     {"optima", o.optima_count},
                                     {"enumerated", o.enumeration_size},
                                     {"verdict", o.objective == sol.profit &&
                                                         o.canonical.position ==
                                                             sol.position
                                                     ? "match"
                                                     : "mismatch"}};
            }
            break;
        }
        case problem_kind::spanning_tree: {
            const auto& st = std::get<tree_stage>(payload);
            const auto sol = minimum_spanning_tree(st.graph);
            rep["solution"] = detail::tree_json(sol);
            rep["objective"] = sol.weight.str();
            if (with_oracle) {
                const auto o = oracle::mst(st.graph);
                rep["oracle"] = json{{"objective", o.objective.str()},
                                     {"optima", o.optima_count},
                                     {"enumerated", o.enumeration_size},
                                     {"verdict", o.objective == sol.weight &&
                                                         o.canonical.edges == sol.edges
                                                     ? "match"
                                                     : "mismatch"}};
            }
            break;
        }
        case problem_kind::steiner_tree: {
            const auto& st = std::get<tree_stage>(payload);
            const auto sol = steiner_tree(st.graph, st.terminals);
            rep["solution"] = detail::tree_json(sol);
            rep["objective"] = sol.weight.str();
            if (with_oracle) {
                const auto o = oracle::steiner(st.graph, st.terminals);
                rep["oracle"] = json{{"objective", o.objective.str()},
                                     {"optima", o.optima_count},
                                     {"enumerated", o.enumeration_size},
                                     {"verdict", o.objective == sol.weight &&
                                                         o.canonical.edges == sol.edges
                                                     ? "match"
                                                     : "mismatch"}};
            }
            break;
        }
        case problem_kind::hmmd: {
            const auto& st = std::get<hmmd_stage>(payload);
            const auto front = hmmd_synthesize(st.system);
            json jf = json::array();
            for (const auto& c : front) jf.push_back(detail::composite_json(c));
            rep["front"] = jf;
            if (with_oracle) {
                const auto o = oracle::hmmd(st.system);
                bool match = o.front.size() == front.size();
                for (const auto& c : front) {
                    bool found = false;
                    for (const auto& oc : o.front)
                        if (oc.das == c.das) found = true;
                    match = match && found;
                }
                rep["oracle"] = json{{"admissible", o.admissible.size()},
                                     {"enumerated", o.enumeration_size},
                                     {"verdict", match ? "match" : "mismatch"}};
            }
            break;
        }
        default:
            throw parse_error("solve: no base optimization for kind '" +
                              std::string(to_string(doc.kind)) + "'");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// restructure
// ---------------------------------------------------------------------------

namespace detail {

inline subset_solution knapsack_initial(const knapsack_stage& st) {
    if (!st.solution) return solve_knapsack(st.instance);
    subset_solution s;
    s.ids = *st.solution;
    std::sort(s.ids.begin(), s.ids.end());
    for (int id : s.ids)
        for (const auto& it : st.instance.items)
            if (it.id == id) {
                s.profit += it.profit;
                s.weight += it.weight;
            }
    return s;
}

inline std::vector<std::string> mc_initial(const multiple_choice_stage& st) {
    if (st.solution) return *st.solution;
    return solve_multiple_choice(st.instance).ids(st.instance);
}

inline tree_solution tree_initial(const tree_stage& st, bool steiner) {
    if (st.solution) return *st.solution;
    return steiner ? steiner_tree(st.graph, st.terminals)
                   : minimum_spanning_tree(st.graph);
}

inline std::vector<std::string> hmmd_initial(const hmmd_stage& st) {
    if (st.solution) return *st.solution;
    return canonical_composite(hmmd_synthesize(st.system)).das;
}

} // namespace detail

namespace detail {

/// Smallest change cost of any goal-feasible subset; the budget hint
/// attached to infeasible-with-budget failures.
inline std::optional<money> min_feasible_change_cost(
    const subset_solution& s0, const knapsack_instance& goal,
    const change_costs<int>& costs, const std::set<int>& fixed_core) {
    std::map<int, knapsack_item> pool;
    for (const auto& it : goal.items) pool[it.id] = it;
    const std::set<int> before(s0.ids.begin(), s0.ids.end());
    std::vector<int> open;
    for (const auto& [id, item] : pool)
        if (!fixed_core.count(id)) open.push_back(id);
    if (open.size() > 20) return std::nullopt;
    money base, core_weight;
    for (int id : before)
        if (!pool.count(id)) base += costs.removal(id);
    for (int id : fixed_core) {
        core_weight += pool.at(id).weight;
        if (!before.count(id)) base += costs.insertion(id);
    }
    std::optional<money> best;
    for (std::uint32_t mask = 0; mask < (1u << open.size()); ++mask) {
        money w = core_weight, h = base;
        for (std::size_t i = 0; i < open.size(); ++i) {
            const int id = open[i];
            if (mask >> i & 1u) {
                w += pool[id].weight;
                if (!before.count(id)) h += costs.insertion(id);
            } else if (before.count(id)) {
                h += costs.removal(id);
            }
        }
        if (w > goal.capacity) continue;
        if (!best || h < *best) best = h;
    }
    return best;
}

} // namespace detail

inline json cmd_restructure(const instance_document& doc, std::size_t from,
                            std::size_t to,
                            std::optional<money> budget_override = std::nullopt,
                            bool with_oracle = false) {
    const auto& from_payload = detail::stage_at(doc, from);
    const auto& to_payload = detail::stage_at(doc, to);
    json rep;
    rep["command"] = "restructure";
    rep["kind"] = to_string(doc.kind);
    rep["from"] = from;
    rep["to"] = to;
    switch (doc.kind) {
        case problem_kind::knapsack: {
            const auto& a = std::get<knapsack_stage>(from_payload);
            const auto& b = std::get<knapsack_stage>(to_payload);
            const money budget = detail::required_budget(budget_override, b.budget);
            const auto s0 = detail::knapsack_initial(a);
            const auto plan = [&] {
                try {
                    return restructure_knapsack(s0, b.instance, b.costs, budget,
                                                doc.options.objective, b.fixed_core);
                } catch (const infeasible_with_budget& e) {
                    const auto hint = detail::min_feasible_change_cost(
                        s0, b.instance, b.costs, b.fixed_core);
                    if (hint)
                        throw infeasible_with_budget(
                            std::string(e.what()) +
                            "; minimum feasible budget is " + hint->str());
                    throw;
                }
            }();
            rep["budget"] = budget.str();
            rep["initial"] = detail::subset_json(s0);
            rep["result"] = detail::subset_json(plan.result);
            rep["diff"] = detail::diff_json(plan.diff);
            rep["ops"] = detail::ops_json(plan.ops);
            rep["change_cost"] = plan.change_cost.str();
            rep["goal_optimum"] = plan.goal_optimum.str();
            rep["proximity"] = plan.proximity.str();
            if (with_oracle) {
                const auto o = oracle::restructure_knapsack(s0, b.instance, b.costs,
                                                            budget, b.fixed_core);
                rep["oracle"] = json{
                    {"objective", o.objective.str()},
                    {"optima", o.optima_count},
                    {"enumerated", o.enumeration_size},
                    {"verdict", o.objective == plan.result.profit &&
                                        o.canonical.ids == plan.result.ids
                                    ? "match"
                                    : "mismatch"}};
            }
            break;
        }
        case problem_kind::multiple_choice: {
            const auto& a = std::get<multiple_choice_stage>(from_payload);
            const auto& b = std::get<multiple_choice_stage>(to_payload);
            const money budget = detail::required_budget(budget_override, b.budget);
            const auto m0 = detail::mc_initial(a);
            const auto plan =
                restructure_multiple_choice(m0, b.instance, b.costs, budget);
            rep["budget"] = budget.str();
            rep["initial"] = m0;
            rep["result"] = detail::selection_json(plan.result, b.instance);
            const auto diff = diff_subsets(
                std::set<std::string>(m0.begin(), m0.end()),
                [&] {
                    const auto ids = plan.result.ids(b.instance);
                    return std::set<std::string>(ids.begin(), ids.end());
                }());
            rep["diff"] = detail::diff_json(diff);
            rep["ops"] = detail::ops_json(plan.ops);
            rep["change_cost"] = plan.change_cost.str();
            rep["goal_optimum"] = plan.goal_optimum.str();
            rep["proximity"] = plan.proximity.str();
            break;
        }
        case problem_kind::assignment: {
            const auto& a = std::get<assignment_stage>(from_payload);
            const auto& b = std::get<assignment_stage>(to_payload);
            const money budget = detail::required_budget(budget_override, b.budget);
            const auto plan = restructure_assignment(a.assignment, b.ops, budget);
            rep["budget"] = budget.str();
            rep["selected"] = plan.selected;
            json asg;
            for (const auto& [k, v] : plan.assignment) asg[k] = v;
            rep["result"] = asg;
            rep["change_cost"] = plan.change_cost.str();
            rep["profit"] = plan.profit.str();
            if (with_oracle) {
                std::vector<oracle::op> ops;
                for (const auto& op : b.ops)
                    ops.push_back({op.id, op.cost(), op.profit, op.element});
                const auto o = oracle::select_ops(ops, budget);
                auto sorted = plan.selected;
                std::sort(sorted.begin(), sorted.end());
                auto canon = o.canonical.ids;
                std::sort(canon.begin(), canon.end());
                rep["oracle"] = json{{"objective", o.objective.str()},
                                     {"optima", o.optima_count},
                                     {"enumerated", o.enumeration_size},
                                     {"verdict", o.objective == plan.profit &&
                                                         canon == sorted
                                                     ? "match"
                                                     : "mismatch"}};
            }
            break;
        }
        case problem_kind::spanning_tree:
        case problem_kind::steiner_tree: {
            const bool steiner = doc.kind == problem_kind::steiner_tree;
            const auto& a = std::get<tree_stage>(from_payload);
            const auto& b = std::get<tree_stage>(to_payload);
            const money budget = detail::required_budget(budget_override, b.budget);
            const auto t1 = detail::tree_initial(a, steiner);
            const tree_plan plan =
                steiner ? restructure_steiner(t1, b.graph, b.terminals,
                                              b.edge_costs, b.steiner_costs, budget)
                        : restructure_tree(t1, b.graph, b.edge_costs, budget,
                                           doc.options.proximity);
            rep["budget"] = budget.str();
            rep["initial"] = detail::tree_json(t1);
            rep["result"] = detail::tree_json(plan.result);
            rep["goal_tree"] = detail::tree_json(plan.goal_tree);
            rep["edge_diff"] = detail::edge_diff_json(plan.edge_diff);
            if (steiner) rep["steiner_diff"] = detail::diff_json(plan.steiner_diff);
            rep["change_cost"] = plan.change_cost.str();
            rep["proximity"] = plan.proximity.str();
            break;
        }
        case problem_kind::clustering: {
            const auto& a = std::get<clustering_stage>(from_payload);
            const auto& b = std::get<clustering_stage>(to_payload);
            const money budget = detail::required_budget(budget_override, b.budget);
            const auto& ops = b.ops.empty() ? a.ops : b.ops;
            const auto plan =
                restructure_clustering(a.clusters, ops, budget, doc.options.model);
            rep["budget"] = budget.str();
            rep["selected"] = plan.selected;
            json clusters;
            for (const auto& [name, members] : plan.result.clusters)
                clusters[name] = members;
            rep["result"] = clusters;
            rep["change_cost"] = plan.change_cost.str();
            rep["profit"] = plan.profit.str();
            if (with_oracle) {
                std::vector<oracle::op> oops;
                for (const auto& op : ops)
                    oops.push_back({op.id, op.cost, op.profit,
                                    doc.options.model == clustering_model::knapsack
                                        ? ""
                                        : op.element});
                const auto o = oracle::select_ops(oops, budget);
                auto sorted = plan.selected;
                std::sort(sorted.begin(), sorted.end());
                auto canon = o.canonical.ids;
                std::sort(canon.begin(), canon.end());
                rep["oracle"] = json{{"objective", o.objective.str()},
                                     {"optima", o.optima_count},
                                     {"enumerated", o.enumeration_size},
                                     {"verdict", o.objective == plan.profit &&
                                                         canon == sorted
                                                     ? "match"
                                                     : "mismatch"}};
            }
            break;
        }
        case problem_kind::ranking: {
            const auto& a = std::get<ranking_stage>(from_payload);
            const auto& b = std::get<ranking_stage>(to_payload);
            const money budget = detail::required_budget(budget_override, b.budget);
            const auto plan =
                restructure_ranking(a.ranking, b.ranking, b.move_costs, budget);
            rep["budget"] = budget.str();
            json layers = json::array();
            for (const auto& layer : plan.result.layers) layers.push_back(layer);
            rep["result"] = json{{"layers", layers}};
            rep["ops"] = detail::ops_json(plan.ops);
            rep["change_cost"] = plan.change_cost.str();
            rep["distance"] = plan.distance;
            break;
        }
        case problem_kind::hmmd: {
            const auto& a = std::get<hmmd_stage>(from_payload);
            const auto& b = std::get<hmmd_stage>(to_payload);
            std::optional<hmmd_budget> budget = b.budget;
            if (budget_override) budget = hmmd_budget::cash(*budget_override);
            const auto t0 = detail::hmmd_initial(a);
            const auto plans = restructure_hmmd(t0, b.system, budget);
            rep["initial"] = t0;
            json jf = json::array();
            for (const auto& p : plans) {
                json jp = detail::composite_json(p.result);
                jp["H"] = p.op_count;
                jp["rho"] = json::array({p.rho_elements, p.rho_compat});
                jf.push_back(jp);
            }
            rep["plans"] = jf;
            break;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// trajectory
// ---------------------------------------------------------------------------

namespace detail {

struct traj_options {
    int scheme = 1;
    std::vector<money> budgets;   // per transition; empty = stage budgets
    std::vector<int> candidates;  // q_i per transition; empty = defaults
};

inline money stage_budget_or(const std::optional<money>& st, std::size_t i,
                             const std::vector<money>& overrides) {
    if (i < overrides.size()) return overrides[i];
    if (st) return *st;
    throw parse_error("no budget for stage transition " + std::to_string(i + 1));
}

/// Generic per-kind step: restructure `prev` toward goal stage `to`.
struct value_step {
    json solution;
    stage_metrics metrics;
};

} // namespace detail

inline json cmd_trajectory(const instance_document& doc,
                           const detail::traj_options& opt) {
    if (doc.stages.size() < 2)
        throw parse_error("trajectory: at least two stages required");
    const std::size_t transitions = doc.stages.size() - 1;

    json rep;
    rep["command"] = "trajectory";
    rep["kind"] = to_string(doc.kind);
    rep["scheme"] = opt.scheme;

    // hmmd trajectories carry composite solutions and integer metrics; the
    // value problems carry their own solution payloads. Both are driven
    // through the shared trajectory machinery with json as the solution
    // carrier plus a side table of typed states.
    if (doc.kind == problem_kind::hmmd) {
        using sol = std::vector<std::string>;
        const auto& st0 = std::get<hmmd_stage>(doc.stages[0]);
        const sol s0 = detail::hmmd_initial(st0);

        auto metrics_for = [&](const sol& prev, const sol& next,
                               std::size_t stage) -> stage_metrics {
            const auto& goal = std::get<hmmd_stage>(doc.stages[stage + 1]);
            int h = 0;
            for (std::size_t i = 0; i < prev.size(); ++i)
                if (prev[i] != next[i]) ++h;
            const auto q = evaluate_composite(goal.system, next);
            const auto goal_front = hmmd_synthesize(goal.system);
            const auto& ref = detail::canonical_composite(goal_front);
            return {money::from_units(h),
                    {money::from_units(
                         element_improvement_steps(q.n, ref.quality.n)),
                     money::from_units(
                         compat_improvement_steps(q.w, ref.quality.w))}};
        };
        auto connect = [&](const sol& prev, const sol& next,
                           std::size_t stage) -> std::optional<money> {
            return metrics_for(prev, next, stage).change_cost;
        };

        // per-transition candidate sets: explicit lists when present,
        // otherwise the Pareto front of the one-stage restructuring
        std::vector<stage_plan_set<sol>> stages(transitions);
        bool all_explicit = true;
        for (std::size_t i = 0; i < transitions; ++i) {
            const auto& goal = std::get<hmmd_stage>(doc.stages[i + 1]);
            stages[i].stage = i;
            const int q = i < opt.candidates.size() ? opt.candidates[i] : 0;
            if (!goal.candidates.empty()) {
                for (const auto& cand : goal.candidates) {
                    const auto m = metrics_for(s0 /*unused for rho*/, cand, i);
                    stages[i].candidates.push_back({cand, m.proximity});
                }
            } else {
                all_explicit = false;
                // generate from every reachable predecessor solution
                std::vector<sol> preds;
                if (i == 0) {
                    preds.push_back(s0);
                } else {
                    for (const auto& c : stages[i - 1].candidates)
                        preds.push_back(c.solution);
                }
                std::vector<sol> seen;
                for (const auto& p : preds) {
                    for (const auto& plan :
                         restructure_hmmd(p, goal.system, goal.budget)) {
                        if (std::find(seen.begin(), seen.end(), plan.result.das) ==
                            seen.end()) {
                            seen.push_back(plan.result.das);
                            stages[i].candidates.push_back(
                                {plan.result.das,
                                 {money::from_units(plan.rho_elements),
                                  money::from_units(plan.rho_compat)}});
                        }
                    }
                }
            }
            if (q > 0 && stages[i].candidates.size() > static_cast<std::size_t>(q))
                stages[i].candidates.resize(static_cast<std::size_t>(q));
        }

        auto traj_json = [&](const trajectory<sol>& t) {
            json jt;
            jt["initial"] = t.initial;
            json steps = json::array();
            for (std::size_t i = 0; i < t.steps.size(); ++i) {
                json js;
                js["stage"] = i + 1;
                js["das"] = t.steps[i].solution;
                js["quality"] =
                    evaluate_composite(
                        std::get<hmmd_stage>(doc.stages[i + 1]).system,
                        t.steps[i].solution)
                        .str();
                js["H"] = t.steps[i].metrics.change_cost.tenths() / 10;
                js["rho"] = json::array(
                    {t.steps[i].metrics.proximity[0].tenths() / 10,
                     t.steps[i].metrics.proximity[1].tenths() / 10});
                steps.push_back(js);
            }
            jt["steps"] = steps;
            const auto agg = aggregate(t);
            jt["aggregate"] =
                json{{"H", agg.change_cost.tenths() / 10},
                     {"rho", json::array({agg.proximity[0].tenths() / 10,
                                          agg.proximity[1].tenths() / 10})}};
            return jt;
        };

        if (opt.scheme == 1) {
            std::vector<money> budgets;
            for (std::size_t i = 0; i < transitions; ++i) budgets.push_back(money{});
            auto step = [&](const sol& prev, std::size_t i,
                            money) -> trajectory_step<sol> {
                const auto& goal = std::get<hmmd_stage>(doc.stages[i + 1]);
                const auto plans = restructure_hmmd(prev, goal.system, goal.budget);
                // scalarized pick, ties to the first plan
                const hmmd_plan* best = &plans[0];
                auto score = [](const hmmd_plan& p) {
                    return p.op_count + p.rho_elements + p.rho_compat;
                };
                for (const auto& p : plans)
                    if (score(p) < score(*best)) best = &p;
                return {best->result.das, metrics_for(prev, best->result.das, i)};
            };
            const auto traj = scheme1_series(s0, budgets, step);
            rep["trajectory"] = traj_json(traj);
        } else if (opt.scheme == 2) {
            const auto traj = scheme2_compose(s0, stages, connect);
            rep["trajectory"] = traj_json(traj);
        } else {
            std::vector<trajectory<sol>> trajs;
            if (all_explicit) {
                trajs = compose_aligned(s0, stages, connect);
            } else {
                // all combinations, small candidate products only
                std::uint64_t combos = 1;
                for (const auto& st : stages) {
                    combos *= st.candidates.size();
                    if (combos > 10000)
                        throw too_large("trajectory: candidate product too big");
                }
                std::vector<std::size_t> pick(transitions, 0);
                for (;;) {
                    trajectory<sol> t;
                    t.initial = s0;
                    const sol* prev = &t.initial;
                    for (std::size_t i = 0; i < transitions; ++i) {
                        const auto& cand = stages[i].candidates[pick[i]];
                        t.steps.push_back(
                            {cand.solution, metrics_for(*prev, cand.solution, i)});
                        prev = &t.steps.back().solution;
                    }
                    trajs.push_back(std::move(t));
                    std::size_t i = transitions;
                    bool done = false;
                    while (i > 0) {
                        --i;
                        if (++pick[i] < stages[i].candidates.size()) break;
                        pick[i] = 0;
                        if (i == 0) done = true;
                    }
                    if (done) break;
                }
            }
            // recompute exact per-step metrics for aligned trajectories
            for (auto& t : trajs) {
                const sol* prev = &t.initial;
                for (std::size_t i = 0; i < t.steps.size(); ++i) {
                    t.steps[i].metrics = metrics_for(*prev, t.steps[i].solution, i);
                    prev = &t.steps[i].solution;
                }
            }
            const auto front = scheme3_select(trajs);
            json jf = json::array();
            for (const auto& t : front) jf.push_back(traj_json(t));
            rep["front"] = jf;
        }
        return rep;
    }

    if (doc.kind != problem_kind::knapsack)
        throw parse_error("trajectory: supported for knapsack and hmmd documents");

    // knapsack trajectory: series restructuring over the staged instances
    using sol = subset_solution;
    const auto& st0 = std::get<knapsack_stage>(doc.stages[0]);
    const sol s0 = detail::knapsack_initial(st0);
    auto step = [&](const sol& prev, std::size_t i, money budget) {
        const auto& goal = std::get<knapsack_stage>(doc.stages[i + 1]);
        const auto plan = restructure_knapsack(prev, goal.instance, goal.costs,
                                               budget, doc.options.objective,
                                               goal.fixed_core);
        return trajectory_step<sol>{plan.result,
                                    {plan.change_cost, {plan.proximity}}};
    };
    std::vector<money> budgets;
    for (std::size_t i = 0; i < transitions; ++i)
        budgets.push_back(detail::stage_budget_or(
            std::get<knapsack_stage>(doc.stages[i + 1]).budget, i, opt.budgets));

    auto traj_json = [&](const trajectory<sol>& t) {
        json jt;
        jt["initial"] = detail::subset_json(t.initial);
        json steps = json::array();
        for (std::size_t i = 0; i < t.steps.size(); ++i) {
            json js;
            js["stage"] = i + 1;
            js["solution"] = detail::subset_json(t.steps[i].solution);
            js["change_cost"] = t.steps[i].metrics.change_cost.str();
            js["proximity"] = detail::money_vec(t.steps[i].metrics.proximity);
            steps.push_back(js);
        }
        jt["steps"] = steps;
        const auto agg = aggregate(t);
        jt["aggregate"] = json{{"change_cost", agg.change_cost.str()},
                               {"proximity", detail::money_vec(agg.proximity)}};
        return jt;
    };

    if (opt.scheme == 1) {
        rep["trajectory"] = traj_json(scheme1_series(s0, budgets, step));
    } else if (opt.scheme == 2) {
        // candidates: the best plan from each distinct predecessor
        std::vector<stage_plan_set<sol>> stages(transitions);
        std::vector<sol> preds{s0};
        for (std::size_t i = 0; i < transitions; ++i) {
            stages[i].stage = i;
            std::vector<std::vector<int>> seen;
            for (const auto& p : preds) {
                const auto stp = step(p, i, budgets[i]);
                if (std::find(seen.begin(), seen.end(), stp.solution.ids) ==
                    seen.end()) {
                    seen.push_back(stp.solution.ids);
                    stages[i].candidates.push_back(
                        {stp.solution, stp.metrics.proximity});
                }
            }
            const int q =
                i < opt.candidates.size() ? opt.candidates[i] : 0;
            if (q > 0 && stages[i].candidates.size() > static_cast<std::size_t>(q))
                stages[i].candidates.resize(static_cast<std::size_t>(q));
            preds.clear();
            for (const auto& c : stages[i].candidates) preds.push_back(c.solution);
        }
        auto connect = [&](const sol& prev, const sol& next,
                           std::size_t stage) -> std::optional<money> {
            const auto& goal = std::get<knapsack_stage>(doc.stages[stage + 1]);
            const auto diff = diff_subsets(
                std::set<int>(prev.ids.begin(), prev.ids.end()),
                std::set<int>(next.ids.begin(), next.ids.end()));
            money h;
            for (int id : diff.deleted) h += goal.costs.removal(id);
            for (int id : diff.added) h += goal.costs.insertion(id);
            if (h > budgets[stage]) return std::nullopt;
            return h;
        };
        rep["trajectory"] = traj_json(scheme2_compose(s0, stages, connect));
    } else {
        throw parse_error("trajectory: scheme 3 needs per-stage candidate sets "
                          "(hmmd documents)");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// plain-text rendering
// ---------------------------------------------------------------------------

inline std::string render_text(const json& rep) {
    std::string out;
    out += rep["command"].get<std::string>() + " " +
           rep["kind"].get<std::string>() + "\n";
    auto line = [&](const std::string& k, const json& v) {
        out += "  " + k + ": " + (v.is_string() ? v.get<std::string>() : v.dump()) +
               "\n";
    };
    for (const auto& [k, v] : rep.items())
        if (k != "command" && k != "kind") line(k, v);
    return out;
}

} // namespace restruct
