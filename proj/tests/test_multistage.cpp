#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "restruct/multistage.hpp"
#include "restruct/restructure.hpp"
#include "restruct/solvers.hpp"

#include "fixture_util.hpp"

using namespace restruct;
using testutil::load_fixture;
using testutil::m;

namespace {

using straj = trajectory<std::string>;

straj make_traj(std::vector<std::pair<int, std::vector<int>>> stages) {
    straj t;
    t.initial = "s0";
    for (auto& [h, rho] : stages) {
        stage_metrics sm;
        sm.change_cost = money::from_units(h);
        for (int r : rho) sm.proximity.push_back(money::from_units(r));
        t.steps.push_back({"s", sm});
    }
    return t;
}

} // namespace

TEST_CASE("aggregation sums stage costs and proximity components") {
    const auto t1 = make_traj({{2, {2, 2}}, {2, {2, 1}}});
    const auto a1 = aggregate(t1);
    CHECK(a1.change_cost == m("4.0"));
    CHECK(a1.proximity == std::vector<money>{m("4.0"), m("3.0")});

    const auto t2 = make_traj({{2, {3, 1}}, {4, {1, 2}}});
    const auto a2 = aggregate(t2);
    CHECK(a2.change_cost == m("6.0"));
    CHECK(a2.proximity == std::vector<money>{m("4.0"), m("3.0")});

    const auto empty = aggregate(straj{});
    CHECK(empty.change_cost == money{});
    CHECK(empty.proximity.empty());
}

TEST_CASE("aggregation is additive under concatenation") {
    const auto t1 = make_traj({{1, {2}}, {3, {0}}});
    const auto t2 = make_traj({{2, {5}}});
    auto cat = t1;
    for (const auto& s : t2.steps) cat.steps.push_back(s);
    const auto a = aggregate(cat);
    CHECK(a.change_cost == aggregate(t1).change_cost + aggregate(t2).change_cost);
    CHECK(a.proximity[0] ==
          aggregate(t1).proximity[0] + aggregate(t2).proximity[0]);
}

TEST_CASE("series scheme walks the course stages") {
    const auto doc = load_fixture("course.json");
    auto stage = [&](int i) -> const knapsack_stage& {
        return std::get<knapsack_stage>(doc.stages[static_cast<std::size_t>(i)]);
    };
    const auto s0 = solve_knapsack(stage(0).instance);
    auto step = [&](const subset_solution& prev, std::size_t i, money budget) {
        const auto& goal = stage(static_cast<int>(i) + 1);
        const auto plan =
            restructure_knapsack(prev, goal.instance, goal.costs, budget,
                                 restructure_objective::max_goal_profit,
                                 goal.fixed_core);
        return trajectory_step<subset_solution>{
            plan.result, {plan.change_cost, {plan.proximity}}};
    };
    const auto traj = scheme1_series(s0, {m("1.8"), m("1.8")}, step);
    REQUIRE(traj.steps.size() == 2);
    CHECK(traj.initial.ids == std::vector<int>{1, 2, 4, 8, 11, 12, 13});
    CHECK(traj.steps[0].solution.ids == std::vector<int>{1, 2, 3, 4, 8, 11, 13});
    CHECK(traj.steps[0].solution.profit == m("30.5"));
    CHECK(traj.steps[1].solution.ids ==
          std::vector<int>{1, 2, 3, 4, 8, 10, 11, 12});
    CHECK(traj.steps[1].solution.profit == m("34.9"));
    const auto agg = aggregate(traj);
    CHECK(agg.change_cost == m("2.8"));
    CHECK(agg.proximity == std::vector<money>{m("1.0")});

    // a single stage is one restructuring call
    const auto one = scheme1_series(s0, {m("1.8")}, step);
    CHECK(one.steps.size() == 1);
    CHECK(one.steps[0].solution.ids == traj.steps[0].solution.ids);
}

TEST_CASE("unbounded stage budgets drive every proximity to zero") {
    const auto doc = load_fixture("course.json");
    auto stage = [&](int i) -> const knapsack_stage& {
        return std::get<knapsack_stage>(doc.stages[static_cast<std::size_t>(i)]);
    };
    const auto s0 = solve_knapsack(stage(0).instance);
    auto step = [&](const subset_solution& prev, std::size_t i, money budget) {
        const auto& goal = stage(static_cast<int>(i) + 1);
        const auto plan =
            restructure_knapsack(prev, goal.instance, goal.costs, budget,
                                 restructure_objective::max_goal_profit,
                                 goal.fixed_core);
        return trajectory_step<subset_solution>{
            plan.result, {plan.change_cost, {plan.proximity}}};
    };
    const auto traj = scheme1_series(s0, {m("99.0"), m("99.0")}, step);
    for (const auto& s : traj.steps)
        CHECK(s.metrics.proximity == std::vector<money>{money{}});
}

TEST_CASE("stage infeasibility propagates with its index") {
    auto step = [&](const int&, std::size_t, money) -> trajectory_step<int> {
        throw infeasible_with_budget("no repair");
    };
    try {
        scheme1_series(0, {m("1.0")}, step);
        FAIL("expected infeasible_with_budget");
    } catch (const infeasible_with_budget& e) {
        CHECK(std::string(e.what()).find("stage 1") != std::string::npos);
    }
}

namespace {

/// Toy composition setup: two stage-1 candidates, one stage-2 candidate;
/// the greedy stage-1 pick is globally worse.
struct toy {
    std::vector<stage_plan_set<std::string>> stages;

    toy() {
        stage_plan_set<std::string> s1{0, {}};
        s1.candidates.push_back({"A", {money::from_units(0)}});
        s1.candidates.push_back({"B", {money::from_units(1)}});
        stage_plan_set<std::string> s2{1, {}};
        s2.candidates.push_back({"C", {money::from_units(0)}});
        stages = {s1, s2};
    }

    static std::optional<money> connect(const std::string& a, const std::string& b,
                                        std::size_t) {
        if (a == "s0" && b == "A") return money::from_units(1);
        if (a == "s0" && b == "B") return money::from_units(2);
        if (a == "A" && b == "C") return money::from_units(10);
        if (a == "B" && b == "C") return money::from_units(1);
        return std::nullopt;
    }
};

} // namespace

TEST_CASE("composition can reject the greedy first-stage pick") {
    // greedy (series) would choose A at stage 1 (cost 1 + rho 0 beats
    // 2 + 1), paying 10 later; the DP takes B for an aggregate of 4
    const toy t;
    const auto traj = scheme2_compose(std::string("s0"), t.stages, toy::connect);
    REQUIRE(traj.steps.size() == 2);
    CHECK(traj.steps[0].solution == "B");
    CHECK(traj.steps[1].solution == "C");
    const auto agg = aggregate(traj);
    CHECK(agg.change_cost == money::from_units(3));
}

TEST_CASE("composition with single candidates equals the series result") {
    toy t;
    t.stages[0].candidates.resize(1); // only A remains
    const auto traj = scheme2_compose(std::string("s0"), t.stages, toy::connect);
    CHECK(traj.steps[0].solution == "A");
    CHECK(traj.steps[1].solution == "C");
}

TEST_CASE("selection keeps exactly the nondominated trajectories") {
    const auto rest1 = make_traj({{2, {2, 2}}, {2, {2, 1}}}); // (4; 4,3)
    const auto rest2 = make_traj({{2, {3, 1}}, {4, {1, 2}}}); // (6; 4,3)
    const auto front = scheme3_select(std::vector<straj>{rest1, rest2});
    REQUIRE(front.size() == 1);
    CHECK(aggregate(front[0]).change_cost == m("4.0"));

    const auto single = scheme3_select(std::vector<straj>{rest2});
    CHECK(single.size() == 1);

    // swapped strengths: H 4 vs 6, proximity sums 9 vs 5 -> both stay
    const auto a = make_traj({{2, {5, 0}}, {2, {4, 0}}});
    const auto b = make_traj({{3, {2, 0}}, {3, {3, 0}}});
    CHECK(scheme3_select(std::vector<straj>{a, b}).size() == 2);

    CHECK_THROWS_AS(scheme3_select(std::vector<straj>{}), empty_input);
}

TEST_CASE("aligned composition pairs same-index candidates") {
    const auto doc = load_fixture("team.json");
    const auto& s1 = std::get<hmmd_stage>(doc.stages[1]);
    const auto& s2 = std::get<hmmd_stage>(doc.stages[2]);
    using sol = std::vector<std::string>;
    const sol t0{"L1", "R1", "E1", "M1"};

    auto rho = [&](const morph_system& sys, const sol& cand,
                   const sol& opt) -> std::vector<money> {
        const auto q = evaluate_composite(sys, cand);
        const auto g = evaluate_composite(sys, opt);
        return {money::from_units(element_improvement_steps(q.n, g.n)),
                money::from_units(compat_improvement_steps(q.w, g.w))};
    };
    std::vector<stage_plan_set<sol>> stages(2);
    stages[0].stage = 0;
    for (const auto& cand : s1.candidates)
        stages[0].candidates.push_back(
            {cand, rho(s1.system, cand, {"L2", "R4", "E2", "M2"})});
    stages[1].stage = 1;
    for (const auto& cand : s2.candidates)
        stages[1].candidates.push_back(
            {cand, rho(s2.system, cand, {"L3", "R5", "E4", "M4"})});

    auto connect = [](const sol& a, const sol& b,
                      std::size_t) -> std::optional<money> {
        int h = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) ++h;
        return money::from_units(h);
    };
    const auto trajs = compose_aligned(t0, stages, connect);
    REQUIRE(trajs.size() == 2);
    // trajectory 1: T0 -> T*1_1 -> T*2_1 with H = 3 + 2 and rho = (4,3);
    // trajectory 2: T0 -> T*1_2 -> T*2_2 with H = 2 + 4 and rho = (4,3)
    const auto a1 = aggregate(trajs[0]);
    CHECK(a1.change_cost == m("5.0"));
    CHECK(a1.proximity == std::vector<money>{m("4.0"), m("3.0")});
    const auto a2 = aggregate(trajs[1]);
    CHECK(a2.change_cost == m("6.0"));
    CHECK(a2.proximity == std::vector<money>{m("4.0"), m("3.0")});

    // the first trajectory dominates the second
    const auto front = scheme3_select(trajs);
    REQUIRE(front.size() == 1);
    CHECK(front[0].steps[0].solution == sol{"L1", "R3", "E2", "M2"});
    CHECK(front[0].steps[1].solution == sol{"L3", "R3", "E2", "M4"});
}
