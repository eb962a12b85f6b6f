#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include <json.hpp>

#include "restruct/errors.hpp"
#include "restruct/money.hpp"
#include "restruct/restructure.hpp"
#include "restruct/solvers.hpp"

namespace restruct {

using json = nlohmann::ordered_json;

enum class problem_kind {
    knapsack,
    multiple_choice,
    assignment,
    spanning_tree,
    steiner_tree,
    clustering,
    ranking,
    hmmd,
};

inline const char* to_string(problem_kind k) {
    switch (k) {
        case problem_kind::knapsack: return "knapsack";
        case problem_kind::multiple_choice: return "multiple-choice";
        case problem_kind::assignment: return "assignment";
        case problem_kind::spanning_tree: return "spanning-tree";
        case problem_kind::steiner_tree: return "steiner-tree";
        case problem_kind::clustering: return "clustering";
        case problem_kind::ranking: return "ranking";
        case problem_kind::hmmd: return "hmmd";
    }
    return "?";
}

inline problem_kind parse_kind(const std::string& s) {
    for (auto k : {problem_kind::knapsack, problem_kind::multiple_choice,
                   problem_kind::assignment, problem_kind::spanning_tree,
                   problem_kind::steiner_tree, problem_kind::clustering,
                   problem_kind::ranking, problem_kind::hmmd})
        if (s == to_string(k)) return k;
    throw parse_error("kind: unknown problem kind '" + s + "'");
}

// ---------------------------------------------------------------------------
// per-kind stage payloads
// ---------------------------------------------------------------------------

struct knapsack_stage {
    knapsack_instance instance;
    change_costs<int> costs;
    std::optional<money> budget;
    std::set<int> fixed_core;
    std::optional<std::vector<int>> solution;

    friend bool operator==(const knapsack_stage&, const knapsack_stage&) = default;
};

struct multiple_choice_stage {
    multiple_choice_instance instance;
    change_costs<std::string> costs;
    std::optional<money> budget;
    std::optional<std::vector<std::string>> solution;

    friend bool operator==(const multiple_choice_stage&,
                           const multiple_choice_stage&) = default;
};

struct assignment_stage {
    std::optional<assignment_instance> matrix;
    std::map<std::string, int> assignment;
    std::vector<reassignment_op> ops;
    std::optional<money> budget;

    friend bool operator==(const assignment_stage&, const assignment_stage&) = default;
};

struct tree_stage {
    weighted_graph graph;
    edge_change_costs edge_costs;
    change_costs<vertex_id> steiner_costs;
    std::vector<vertex_id> terminals; // steiner only
    std::optional<money> budget;
    std::optional<tree_solution> solution;

    friend bool operator==(const tree_stage&, const tree_stage&) = default;
};

struct clustering_stage {
    partition clusters;
    std::vector<move_op> ops;
    std::optional<money> budget;

    friend bool operator==(const clustering_stage&, const clustering_stage&) = default;
};

struct ranking_stage {
    layered_ranking ranking;
    std::map<std::pair<std::string, int>, money> move_costs;
    std::optional<money> budget;

    friend bool operator==(const ranking_stage&, const ranking_stage&) = default;
};

struct hmmd_stage {
    morph_system system;
    std::optional<hmmd_budget> budget;
    std::vector<std::vector<std::string>> candidates;
    std::optional<std::vector<std::string>> solution;

    friend bool operator==(const hmmd_stage&, const hmmd_stage&) = default;
};

using stage_payload =
    std::variant<knapsack_stage, multiple_choice_stage, assignment_stage,
                 tree_stage, clustering_stage, ranking_stage, hmmd_stage>;

struct document_options {
    restructure_objective objective = restructure_objective::max_goal_profit;
    tree_proximity proximity = tree_proximity::edge_symmetric_difference;
    clustering_model model = clustering_model::multiple_choice;

    friend bool operator==(const document_options&, const document_options&) = default;
};

struct instance_document {
    problem_kind kind = problem_kind::knapsack;
    document_options options;
    std::vector<stage_payload> stages;

    friend bool operator==(const instance_document&, const instance_document&) = default;
};

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

namespace detail {

inline const json& jfield(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end())
        throw parse_error(std::string("missing field '") + name + "'");
    return *it;
}

inline money jmoney(const json& v, const char* name) {
    if (v.is_string()) return money::parse(v.get<std::string>());
    if (v.is_number_integer()) return money::from_units(v.get<std::int64_t>());
    throw parse_error(std::string("field '") + name +
                      "' must be a decimal string or integer");
}

inline money jmoney_field(const json& j, const char* name) {
    return jmoney(jfield(j, name), name);
}

inline std::optional<money> jmoney_opt(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) return std::nullopt;
    return jmoney(*it, name);
}

inline std::string jstring(const json& j, const char* name) {
    const json& v = jfield(j, name);
    if (!v.is_string())
        throw parse_error(std::string("field '") + name + "' must be a string");
    return v.get<std::string>();
}

inline int jint(const json& j, const char* name) {
    const json& v = jfield(j, name);
    if (!v.is_number_integer())
        throw parse_error(std::string("field '") + name + "' must be an integer");
    return v.get<int>();
}

inline const json& jarray(const json& j, const char* name) {
    const json& v = jfield(j, name);
    if (!v.is_array())
        throw parse_error(std::string("field '") + name + "' must be an array");
    return v;
}

inline knapsack_stage parse_knapsack_stage(const json& j) {
    knapsack_stage st;
    st.instance.capacity = jmoney_field(j, "capacity");
    for (const auto& ji : jarray(j, "items")) {
        knapsack_item it;
        it.id = jint(ji, "id");
        it.profit = jmoney_field(ji, "profit");
        it.weight = jmoney_field(ji, "weight");
        st.instance.items.push_back(it);
        if (auto h = jmoney_opt(ji, "delete_cost")) st.costs.remove[it.id] = *h;
        if (auto h = jmoney_opt(ji, "add_cost")) st.costs.insert[it.id] = *h;
    }
    st.budget = jmoney_opt(j, "budget");
    if (j.contains("fixed_core"))
        for (const auto& v : jarray(j, "fixed_core")) st.fixed_core.insert(v.get<int>());
    if (j.contains("solution")) {
        std::vector<int> ids;
        for (const auto& v : jarray(j, "solution")) ids.push_back(v.get<int>());
        st.solution = ids;
    }
    return st;
}

inline multiple_choice_stage parse_multiple_choice_stage(const json& j) {
    multiple_choice_stage st;
    st.instance.capacity = jmoney_field(j, "capacity");
    for (const auto& jg : jarray(j, "groups")) {
        mc_group g;
        g.name = jstring(jg, "name");
        for (const auto& ji : jarray(jg, "items")) {
            mc_item it;
            it.id = jstring(ji, "id");
            it.profit = jmoney_field(ji, "profit");
            it.weight = jmoney_field(ji, "weight");
            g.items.push_back(it);
            if (auto h = jmoney_opt(ji, "delete_cost")) st.costs.remove[it.id] = *h;
            if (auto h = jmoney_opt(ji, "add_cost")) st.costs.insert[it.id] = *h;
        }
        st.instance.groups.push_back(std::move(g));
    }
    st.budget = jmoney_opt(j, "budget");
    if (j.contains("solution")) {
        std::vector<std::string> ids;
        for (const auto& v : jarray(j, "solution")) ids.push_back(v.get<std::string>());
        st.solution = ids;
    }
    return st;
}

inline assignment_stage parse_assignment_stage(const json& j) {
    assignment_stage st;
    if (j.contains("matrix")) {
        assignment_instance inst;
        for (const auto& row : jarray(j, "matrix")) {
            std::vector<money> r;
            for (const auto& c : row) r.push_back(jmoney(c, "matrix"));
            inst.profit.push_back(std::move(r));
        }
        st.matrix = inst;
    }
    if (j.contains("assignment"))
        for (const auto& [k, v] : jfield(j, "assignment").items())
            st.assignment[k] = v.get<int>();
    if (j.contains("ops"))
        for (const auto& jo : jarray(j, "ops")) {
            reassignment_op op;
            op.id = jstring(jo, "id");
            op.element = jstring(jo, "element");
            op.from = jint(jo, "from");
            op.to = jint(jo, "to");
            op.delete_cost = jmoney_field(jo, "delete_cost");
            op.add_cost = jmoney_field(jo, "add_cost");
            op.profit = jmoney_field(jo, "profit");
            st.ops.push_back(op);
        }
    st.budget = jmoney_opt(j, "budget");
    return st;
}

inline tree_stage parse_tree_stage(const json& j, bool steiner) {
    tree_stage st;
    for (const auto& v : jarray(j, "vertices"))
        st.graph.vertices.push_back(v.get<std::string>());
    for (const auto& je : jarray(j, "edges")) {
        graph_edge e;
        e.u = jstring(je, "u");
        e.v = jstring(je, "v");
        e.weight = jmoney_field(je, "weight");
        st.graph.edges.push_back(e);
        if (auto h = jmoney_opt(je, "delete_cost")) st.edge_costs.remove[e.key()] = *h;
        if (auto h = jmoney_opt(je, "add_cost")) st.edge_costs.insert[e.key()] = *h;
    }
    if (steiner) {
        for (const auto& v : jarray(j, "terminals"))
            st.terminals.push_back(v.get<std::string>());
        for (const auto& jz : jarray(j, "steiner_candidates")) {
            const auto id = jstring(jz, "id");
            st.graph.steiner_candidates.push_back(id);
            if (auto h = jmoney_opt(jz, "delete_cost")) st.steiner_costs.remove[id] = *h;
            if (auto h = jmoney_opt(jz, "add_cost")) st.steiner_costs.insert[id] = *h;
        }
    }
    st.budget = jmoney_opt(j, "budget");
    if (j.contains("solution")) {
        const json& js = jfield(j, "solution");
        tree_solution sol;
        for (const auto& pe : jarray(js, "edges")) {
            if (!pe.is_array() || pe.size() != 2)
                throw parse_error("solution.edges entries must be [u, v] pairs");
            sol.edges.push_back(
                make_edge_key(pe[0].get<std::string>(), pe[1].get<std::string>()));
        }
        std::sort(sol.edges.begin(), sol.edges.end(), detail::edge_key_less{});
        if (js.contains("steiner"))
            for (const auto& v : jarray(js, "steiner"))
                sol.steiner_vertices.push_back(v.get<std::string>());
        std::map<edge_key, money, detail::edge_key_less> wt;
        for (const auto& e : st.graph.edges) wt[e.key()] = e.weight;
        for (const auto& e : sol.edges) {
            auto it = wt.find(e);
            if (it == wt.end())
                throw parse_error("solution edge (" + e.first + "," + e.second +
                                  ") is not in the graph");
            sol.weight += it->second;
        }
        st.solution = sol;
    }
    return st;
}

inline clustering_stage parse_clustering_stage(const json& j) {
    clustering_stage st;
    for (const auto& jc : jarray(j, "clusters")) {
        const auto name = jstring(jc, "name");
        auto& members = st.clusters.clusters[name];
        for (const auto& v : jarray(jc, "elements"))
            members.insert(v.get<std::string>());
    }
    if (j.contains("ops"))
        for (const auto& jo : jarray(j, "ops")) {
            move_op op;
            op.id = jstring(jo, "id");
            op.element = jstring(jo, "element");
            op.to = jstring(jo, "to");
            op.cost = jmoney_field(jo, "cost");
            op.profit = jmoney_field(jo, "profit");
            st.ops.push_back(op);
        }
    st.budget = jmoney_opt(j, "budget");
    return st;
}

inline ranking_stage parse_ranking_stage(const json& j) {
    ranking_stage st;
    for (const auto& jl : jarray(j, "layers")) {
        std::set<std::string> layer;
        for (const auto& v : jl) layer.insert(v.get<std::string>());
        st.ranking.layers.push_back(std::move(layer));
    }
    if (j.contains("move_costs"))
        for (const auto& jm : jarray(j, "move_costs"))
            st.move_costs[{jstring(jm, "element"), jint(jm, "layer")}] =
                jmoney_field(jm, "cost");
    st.budget = jmoney_opt(j, "budget");
    return st;
}

inline hmmd_stage parse_hmmd_stage(const json& j, int priority_levels,
                                   int compat_best) {
    hmmd_stage st;
    st.system.priority_levels = priority_levels;
    st.system.compat_best = compat_best;
    for (const auto& jc : jarray(j, "components")) {
        system_component comp;
        comp.name = jstring(jc, "name");
        for (const auto& jd : jarray(jc, "das")) {
            design_alternative da;
            da.id = jstring(jd, "id");
            da.priority = jint(jd, "priority");
            if (auto h = jmoney_opt(jd, "delete_cost")) da.delete_cost = *h;
            if (auto h = jmoney_opt(jd, "add_cost")) da.add_cost = *h;
            comp.das.push_back(da);
        }
        st.system.components.push_back(std::move(comp));
    }
    for (const auto& jp : jarray(j, "compatibility"))
        st.system.compatibility[{jstring(jp, "a"), jstring(jp, "b")}] =
            jint(jp, "w");
    if (j.contains("budget")) {
        const json& b = jfield(j, "budget");
        if (b.is_number_integer())
            st.budget = hmmd_budget::ops(b.get<int>());
        else
            st.budget = hmmd_budget::cash(jmoney(b, "budget"));
    }
    if (j.contains("candidates"))
        for (const auto& jc : jarray(j, "candidates")) {
            std::vector<std::string> cand;
            for (const auto& v : jc) cand.push_back(v.get<std::string>());
            st.candidates.push_back(std::move(cand));
        }
    if (j.contains("solution")) {
        std::vector<std::string> sol;
        for (const auto& v : jarray(j, "solution")) sol.push_back(v.get<std::string>());
        st.solution = sol;
    }
    return st;
}

} // namespace detail

inline instance_document parse_document(const json& j) {
    instance_document doc;
    doc.kind = parse_kind(detail::jstring(j, "kind"));
    int priority_levels = 3, compat_best = 3;
    if (j.contains("options")) {
        const json& o = j["options"];
        if (o.contains("objective")) {
            const auto s = detail::jstring(o, "objective");
            if (s == "max-profit")
                doc.options.objective = restructure_objective::max_goal_profit;
            else if (s == "min-proximity")
                doc.options.objective = restructure_objective::min_proximity;
            else
                throw parse_error("options.objective: unknown value '" + s + "'");
        }
        if (o.contains("proximity")) {
            const auto s = detail::jstring(o, "proximity");
            if (s == "edge-diff")
                doc.options.proximity = tree_proximity::edge_symmetric_difference;
            else if (s == "weight-delta")
                doc.options.proximity = tree_proximity::weight_delta;
            else
                throw parse_error("options.proximity: unknown value '" + s + "'");
        }
        if (o.contains("model")) {
            const auto s = detail::jstring(o, "model");
            if (s == "knapsack")
                doc.options.model = clustering_model::knapsack;
            else if (s == "multiple-choice")
                doc.options.model = clustering_model::multiple_choice;
            else
                throw parse_error("options.model: unknown value '" + s + "'");
        }
        if (o.contains("scales")) {
            priority_levels = detail::jint(o["scales"], "priority_levels");
            compat_best = detail::jint(o["scales"], "compat_best");
        }
    }
    const json& stages = detail::jarray(j, "stages");
    if (stages.empty()) throw parse_error("stages: at least one stage required");
    for (const auto& js : stages) {
        switch (doc.kind) {
            case problem_kind::knapsack:
                doc.stages.emplace_back(detail::parse_knapsack_stage(js));
                break;
            case problem_kind::multiple_choice:
                doc.stages.emplace_back(detail::parse_multiple_choice_stage(js));
                break;
            case problem_kind::assignment:
                doc.stages.emplace_back(detail::parse_assignment_stage(js));
                break;
            case problem_kind::spanning_tree:
                doc.stages.emplace_back(detail::parse_tree_stage(js, false));
                break;
            case problem_kind::steiner_tree:
                doc.stages.emplace_back(detail::parse_tree_stage(js, true));
                break;
            case problem_kind::clustering:
                doc.stages.emplace_back(detail::parse_clustering_stage(js));
                break;
            case problem_kind::ranking:
                doc.stages.emplace_back(detail::parse_ranking_stage(js));
                break;
            case problem_kind::hmmd:
                doc.stages.emplace_back(
                    detail::parse_hmmd_stage(js, priority_levels, compat_best));
                break;
        }
    }
    return doc;
}

inline instance_document parse_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what());
    }
    return parse_document(j);
}

// ---------------------------------------------------------------------------
// serialization (canonical form; byte-stable for a given document)
// ---------------------------------------------------------------------------

namespace detail {

inline json dump_knapsack_stage(const knapsack_stage& st) {
    json j;
    j["capacity"] = st.instance.capacity.str();
    json items = json::array();
    for (const auto& it : st.instance.items) {
        json ji;
        ji["id"] = it.id;
        ji["profit"] = it.profit.str();
        ji["weight"] = it.weight.str();
        if (auto f = st.costs.remove.find(it.id); f != st.costs.remove.end())
            ji["delete_cost"] = f->second.str();
        if (auto f = st.costs.insert.find(it.id); f != st.costs.insert.end())
            ji["add_cost"] = f->second.str();
        items.push_back(ji);
    }
    j["items"] = items;
    if (st.budget) j["budget"] = st.budget->str();
    if (!st.fixed_core.empty()) j["fixed_core"] = st.fixed_core;
    if (st.solution) j["solution"] = *st.solution;
    return j;
}

inline json dump_multiple_choice_stage(const multiple_choice_stage& st) {
    json j;
    j["capacity"] = st.instance.capacity.str();
    json groups = json::array();
    for (const auto& g : st.instance.groups) {
        json jg;
        jg["name"] = g.name;
        json items = json::array();
        for (const auto& it : g.items) {
            json ji;
            ji["id"] = it.id;
            ji["profit"] = it.profit.str();
            ji["weight"] = it.weight.str();
            if (auto f = st.costs.remove.find(it.id); f != st.costs.remove.end())
                ji["delete_cost"] = f->second.str();
            if (auto f = st.costs.insert.find(it.id); f != st.costs.insert.end())
                ji["add_cost"] = f->second.str();
            items.push_back(ji);
        }
        jg["items"] = items;
        groups.push_back(jg);
    }
    j["groups"] = groups;
    if (st.budget) j["budget"] = st.budget->str();
    if (st.solution) j["solution"] = *st.solution;
    return j;
}

inline json dump_assignment_stage(const assignment_stage& st) {
    json j;
    if (st.matrix) {
        json rows = json::array();
        for (const auto& row : st.matrix->profit) {
            json r = json::array();
            for (money c : row) r.push_back(c.str());
            rows.push_back(r);
        }
        j["matrix"] = rows;
    }
    if (!st.assignment.empty()) {
        json a;
        for (const auto& [k, v] : st.assignment) a[k] = v;
        j["assignment"] = a;
    }
    if (!st.ops.empty()) {
        json ops = json::array();
        for (const auto& op : st.ops) {
            json jo;
            jo["id"] = op.id;
            jo["element"] = op.element;
            jo["from"] = op.from;
            jo["to"] = op.to;
            jo["delete_cost"] = op.delete_cost.str();
            jo["add_cost"] = op.add_cost.str();
            jo["profit"] = op.profit.str();
            ops.push_back(jo);
        }
        j["ops"] = ops;
    }
    if (st.budget) j["budget"] = st.budget->str();
    return j;
}

inline json dump_tree_stage(const tree_stage& st, bool steiner) {
    json j;
    j["vertices"] = st.graph.vertices;
    json edges = json::array();
    for (const auto& e : st.graph.edges) {
        json je;
        je["u"] = e.u;
        je["v"] = e.v;
        je["weight"] = e.weight.str();
        if (auto f = st.edge_costs.remove.find(e.key());
            f != st.edge_costs.remove.end())
            je["delete_cost"] = f->second.str();
        if (auto f = st.edge_costs.insert.find(e.key());
            f != st.edge_costs.insert.end())
            je["add_cost"] = f->second.str();
        edges.push_back(je);
    }
    j["edges"] = edges;
    if (steiner) {
        j["terminals"] = st.terminals;
        json zs = json::array();
        for (const auto& z : st.graph.steiner_candidates) {
            json jz;
            jz["id"] = z;
            if (auto f = st.steiner_costs.remove.find(z);
                f != st.steiner_costs.remove.end())
                jz["delete_cost"] = f->second.str();
            if (auto f = st.steiner_costs.insert.find(z);
                f != st.steiner_costs.insert.end())
                jz["add_cost"] = f->second.str();
            zs.push_back(jz);
        }
        j["steiner_candidates"] = zs;
    }
    if (st.budget) j["budget"] = st.budget->str();
    if (st.solution) {
        json js;
        json edges_out = json::array();
        for (const auto& e : st.solution->edges)
            edges_out.push_back(json::array({e.first, e.second}));
        js["edges"] = edges_out;
        if (!st.solution->steiner_vertices.empty())
            js["steiner"] = st.solution->steiner_vertices;
        j["solution"] = js;
    }
    return j;
}

inline json dump_clustering_stage(const clustering_stage& st) {
    json j;
    json clusters = json::array();
    for (const auto& [name, members] : st.clusters.clusters) {
        json jc;
        jc["name"] = name;
        jc["elements"] = members;
        clusters.push_back(jc);
    }
    j["clusters"] = clusters;
    if (!st.ops.empty()) {
        json ops = json::array();
        for (const auto& op : st.ops) {
            json jo;
            jo["id"] = op.id;
            jo["element"] = op.element;
            jo["to"] = op.to;
            jo["cost"] = op.cost.str();
            jo["profit"] = op.profit.str();
            ops.push_back(jo);
        }
        j["ops"] = ops;
    }
    if (st.budget) j["budget"] = st.budget->str();
    return j;
}

inline json dump_ranking_stage(const ranking_stage& st) {
    json j;
    json layers = json::array();
    for (const auto& layer : st.ranking.layers) layers.push_back(layer);
    j["layers"] = layers;
    if (!st.move_costs.empty()) {
        json mc = json::array();
        for (const auto& [key, cost] : st.move_costs) {
            json jm;
            jm["element"] = key.first;
            jm["layer"] = key.second;
            jm["cost"] = cost.str();
            mc.push_back(jm);
        }
        j["move_costs"] = mc;
    }
    if (st.budget) j["budget"] = st.budget->str();
    return j;
}

inline json dump_hmmd_stage(const hmmd_stage& st) {
    json j;
    json comps = json::array();
    for (const auto& comp : st.system.components) {
        json jc;
        jc["name"] = comp.name;
        json das = json::array();
        for (const auto& da : comp.das) {
            json jd;
            jd["id"] = da.id;
            jd["priority"] = da.priority;
            if (!da.delete_cost.is_zero()) jd["delete_cost"] = da.delete_cost.str();
            if (!da.add_cost.is_zero()) jd["add_cost"] = da.add_cost.str();
            das.push_back(jd);
        }
        jc["das"] = das;
        comps.push_back(jc);
    }
    j["components"] = comps;
    json compat = json::array();
    for (const auto& [pair, w] : st.system.compatibility) {
        json jp;
        jp["a"] = pair.first;
        jp["b"] = pair.second;
        jp["w"] = w;
        compat.push_back(jp);
    }
    j["compatibility"] = compat;
    if (st.budget) {
        if (st.budget->is_money)
            j["budget"] = st.budget->amount.str();
        else
            j["budget"] = st.budget->op_count;
    }
    if (!st.candidates.empty()) j["candidates"] = st.candidates;
    if (st.solution) j["solution"] = *st.solution;
    return j;
}

} // namespace detail

inline json dump_document(const instance_document& doc) {
    json j;
    j["kind"] = to_string(doc.kind);
    json o;
    o["objective"] = doc.options.objective == restructure_objective::max_goal_profit
                         ? "max-profit"
                         : "min-proximity";
    if (doc.kind == problem_kind::spanning_tree ||
        doc.kind == problem_kind::steiner_tree)
        o["proximity"] =
            doc.options.proximity == tree_proximity::edge_symmetric_difference
                ? "edge-diff"
                : "weight-delta";
    if (doc.kind == problem_kind::clustering)
        o["model"] = doc.options.model == clustering_model::knapsack
                         ? "knapsack"
                         : "multiple-choice";
    if (doc.kind == problem_kind::hmmd) {
        const auto& sys = std::get<hmmd_stage>(doc.stages.front()).system;
        o["scales"] = json{{"priority_levels", sys.priority_levels},
                           {"compat_best", sys.compat_best}};
    }
    j["options"] = o;
    json stages = json::array();
    for (const auto& st : doc.stages) {
        switch (doc.kind) {
            case problem_kind::knapsack:
                stages.push_back(
                    detail::dump_knapsack_stage(std::get<knapsack_stage>(st)));
                break;
            case problem_kind::multiple_choice:
                stages.push_back(detail::dump_multiple_choice_stage(
                    std::get<multiple_choice_stage>(st)));
                break;
            case problem_kind::assignment:
                stages.push_back(
                    detail::dump_assignment_stage(std::get<assignment_stage>(st)));
                break;
            case problem_kind::spanning_tree:
                stages.push_back(
                    detail::dump_tree_stage(std::get<tree_stage>(st), false));
                break;
            case problem_kind::steiner_tree:
                stages.push_back(
                    detail::dump_tree_stage(std::get<tree_stage>(st), true));
                break;
            case problem_kind::clustering:
                stages.push_back(
                    detail::dump_clustering_stage(std::get<clustering_stage>(st)));
                break;
            case problem_kind::ranking:
                stages.push_back(
                    detail::dump_ranking_stage(std::get<ranking_stage>(st)));
                break;
            case problem_kind::hmmd:
                stages.push_back(detail::dump_hmmd_stage(std::get<hmmd_stage>(st)));
                break;
        }
    }
    j["stages"] = stages;
    return j;
}

} // namespace restruct
