#include <catch2/catch_amalgamated.hpp>

#include "restruct/oracle.hpp"

#include "fixture_util.hpp"

using namespace restruct;
using testutil::load_fixture;
using testutil::m;

TEST_CASE("knapsack oracle on the course fixture") {
    const auto doc = load_fixture("course.json");
    const auto& st = std::get<knapsack_stage>(doc.stages[0]);
    const auto rep = oracle::knapsack(st.instance);
    CHECK(rep.objective == m("22.0"));
    CHECK(rep.canonical.ids == std::vector<int>{1, 2, 4, 8, 11, 12, 13});
    CHECK(rep.enumeration_size == (1u << 13));
}

TEST_CASE("knapsack oracle corner cases") {
    const auto none = oracle::knapsack({{}, m("3.0")});
    CHECK(none.objective == money{});
    CHECK(none.optima_count == 1);
    CHECK(none.enumeration_size == 1);

    // by hand over all 8 subsets: {1,2} with profit 3 wins at capacity 2
    knapsack_instance small{{{1, m("1.0"), m("1.0")},
                             {2, m("2.0"), m("1.0")},
                             {3, m("3.0"), m("3.0")}},
                            m("2.0")};
    const auto rep = oracle::knapsack(small);
    CHECK(rep.objective == m("3.0"));
    CHECK(rep.canonical.ids == std::vector<int>{1, 2});

    knapsack_instance big;
    big.capacity = m("1.0");
    for (int i = 0; i < 25; ++i) big.items.push_back({i, m("1.0"), m("1.0")});
    CHECK_THROWS_AS(oracle::knapsack(big), too_large);
}

TEST_CASE("op-selection oracle reproduces the worked examples") {
    // sensor ops: the radio swap costs 3, the memory swap 2, both gain 1
    const std::vector<oracle::op> sensor{{"a", m("3.0"), m("1.0"), "R"},
                                         {"b", m("2.0"), m("1.0"), "Q"}};
    const auto s5 = oracle::select_ops(sensor, m("5.0"));
    CHECK(s5.objective == m("2.0"));
    CHECK(s5.canonical.ids == std::vector<std::string>{"a", "b"});

    const auto s0 = oracle::select_ops(sensor, money{});
    CHECK(s0.objective == money{});
    CHECK(s0.canonical.ids.empty());

    // access-point ops from the user-reassignment table
    const std::vector<oracle::op> access{{"op1", m("4.0"), m("3.0"), "u3"},
                                         {"op2", m("2.0"), m("3.0"), "u13"},
                                         {"op3", m("3.0"), m("3.0"), "u21"}};
    const auto a5 = oracle::select_ops(access, m("5.0"));
    CHECK(a5.objective == m("6.0"));
    CHECK(a5.canonical.ids == std::vector<std::string>{"op2", "op3"});
    CHECK(a5.enumeration_size == 8);
}

TEST_CASE("pareto oracle keeps equal vectors") {
    auto qv = [](int w, std::vector<int> n) {
        return quality_vector{compatibility_value(w, 3), count_vector(std::move(n))};
    };
    using item = std::pair<std::string, quality_vector>;
    const std::vector<item> one{{"s", qv(2, {1, 0, 0})}};
    CHECK(oracle::pareto(one) == std::set<std::string>{"s"});

    const std::vector<item> twins{{"a", qv(2, {1, 1, 0})}, {"b", qv(2, {1, 1, 0})}};
    CHECK(oracle::pareto(twins) == std::set<std::string>{"a", "b"});
}

TEST_CASE("team synthesis oracle lists the published optimum") {
    const auto doc = load_fixture("team.json");
    const auto& st = std::get<hmmd_stage>(doc.stages[1]);
    const auto rep = oracle::hmmd(st.system);
    CHECK(rep.enumeration_size == 3u * 4u * 2u * 2u);
    bool found = false;
    for (const auto& c : rep.front)
        if (c.quality.str() == "(3;4,0,0)") found = true;
    CHECK(found);
}

TEST_CASE("restructure oracle agrees with the solver on the course step") {
    const auto doc = load_fixture("course.json");
    const auto& s0st = std::get<knapsack_stage>(doc.stages[0]);
    const auto& goal = std::get<knapsack_stage>(doc.stages[1]);
    const auto s0 = solve_knapsack(s0st.instance);
    const auto rep = oracle::restructure_knapsack(s0, goal.instance, goal.costs,
                                                  m("1.8"), goal.fixed_core);
    const auto plan = restructure_knapsack(s0, goal.instance, goal.costs, m("1.8"),
                                           restructure_objective::max_goal_profit,
                                           goal.fixed_core);
    CHECK(rep.objective == plan.result.profit);
    CHECK(rep.canonical.ids == plan.result.ids);
    CHECK(rep.enumeration_size == 256);
}
