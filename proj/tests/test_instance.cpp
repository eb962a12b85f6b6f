#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "restruct/commands.hpp"
#include "restruct/instance.hpp"

#include "fixture_util.hpp"

using namespace restruct;
using testutil::load_fixture;
using testutil::slurp;

TEST_CASE("every bundled fixture parses and round-trips") {
    for (const char* name :
         {"course.json", "sensor.json", "access.json", "team.json", "trees.json",
          "steiner.json", "clusters.json", "ranking.json"}) {
        INFO(name);
        const auto doc = load_fixture(name);
        const auto dumped = dump_document(doc);
        const auto again = parse_document(dumped);
        CHECK(again == doc);
        // canonical form is a fixed point
        CHECK(dump_document(again) == dumped);
    }
}

TEST_CASE("parse errors name the offending field") {
    try {
        parse_document(std::string(R"({"kind":"knapsack","stages":[{}]})"));
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(std::string(e.what()).find("capacity") != std::string::npos);
    }
    try {
        parse_document(std::string(
            R"({"kind":"knapsack","stages":[{"capacity":"5.0","items":[{"id":1,"weight":"1.0"}]}]})"));
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(std::string(e.what()).find("profit") != std::string::npos);
    }
}

TEST_CASE("documents reject unknown kinds and empty stage lists") {
    CHECK_THROWS_AS(parse_document(std::string(R"({"kind":"sudoku","stages":[]})")),
                    parse_error);
    CHECK_THROWS_AS(
        parse_document(std::string(R"({"kind":"knapsack","stages":[]})")),
        parse_error);
    CHECK_THROWS_AS(parse_document(std::string("not json")), parse_error);
    CHECK_THROWS_AS(
        parse_document(std::string(
            R"({"kind":"knapsack","stages":[{"capacity":"1.25","items":[]}]})")),
        parse_error);
}

TEST_CASE("integer money fields are accepted and canonicalized") {
    const auto doc = parse_document(std::string(
        R"({"kind":"knapsack","stages":[{"capacity":14,"items":[{"id":1,"profit":"4.0","weight":"1.5"}]}]})"));
    const auto& st = std::get<knapsack_stage>(doc.stages[0]);
    CHECK(st.instance.capacity == money::parse("14.0"));
    CHECK(dump_document(doc)["stages"][0]["capacity"] == "14.0");
}

TEST_CASE("reports are deterministic for a fixed document") {
    const auto doc = load_fixture("course.json");
    const auto a = cmd_solve(doc, 0).dump();
    const auto b = cmd_solve(doc, 0).dump();
    CHECK(a == b);
    const auto c = cmd_restructure(doc, 0, 1).dump();
    const auto d = cmd_restructure(doc, 0, 1).dump();
    CHECK(c == d);
}

TEST_CASE("stage indices are validated") {
    const auto doc = load_fixture("course.json");
    CHECK_THROWS_AS(cmd_solve(doc, 7), parse_error);
    CHECK_THROWS_AS(cmd_restructure(doc, 0, 9), parse_error);
}

TEST_CASE("restructure commands demand a budget") {
    auto doc = load_fixture("course.json");
    auto& goal = std::get<knapsack_stage>(doc.stages[1]);
    goal.budget.reset();
    CHECK_THROWS_AS(cmd_restructure(doc, 0, 1), parse_error);
    CHECK_NOTHROW(cmd_restructure(doc, 0, 1, money::parse("1.8")));
}

TEST_CASE("infeasible budgets come back with a minimum-budget hint") {
    auto doc = load_fixture("course.json");
    // shrink the goal capacity so the initial solution cannot stay
    auto& goal = std::get<knapsack_stage>(doc.stages[1]);
    goal.instance.capacity = money::parse("15.0");
    goal.fixed_core.clear();
    try {
        cmd_restructure(doc, 0, 1, money{});
        FAIL("expected infeasible_with_budget");
    } catch (const infeasible_with_budget& e) {
        CHECK(std::string(e.what()).find("minimum feasible budget") !=
              std::string::npos);
    }
}
