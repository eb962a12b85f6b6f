#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "restruct/money.hpp"

using restruct::money;

TEST_CASE("money parses decimal strings") {
    CHECK(money::parse("13.8").tenths() == 138);
    CHECK(money::parse("14").tenths() == 140);
    CHECK(money::parse("22.0").tenths() == 220);
    CHECK(money::parse("-0.5").tenths() == -5);
    CHECK(money::parse("+2.3").tenths() == 23);
    CHECK(money::parse("0").tenths() == 0);
}

TEST_CASE("money rejects malformed input") {
    CHECK_THROWS_AS(money::parse(""), restruct::parse_error);
    CHECK_THROWS_AS(money::parse("-"), restruct::parse_error);
    CHECK_THROWS_AS(money::parse("1.25"), restruct::parse_error);
    CHECK_THROWS_AS(money::parse("1."), restruct::parse_error);
    CHECK_THROWS_AS(money::parse("a.b"), restruct::parse_error);
    CHECK_THROWS_AS(money::parse("1,5"), restruct::parse_error);
}

TEST_CASE("money serializes canonically") {
    CHECK(money::parse("14").str() == "14.0");
    CHECK(money::parse("13.8").str() == "13.8");
    CHECK(money::parse("-0.5").str() == "-0.5");
    CHECK(money{}.str() == "0.0");
}

TEST_CASE("money round-trips bit-identically") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<std::int64_t> dist(-2000000, 2000000);
    for (int i = 0; i < 2000; ++i) {
        const auto v = money::from_tenths(dist(rng));
        CHECK(money::parse(v.str()) == v);
    }
}

TEST_CASE("money arithmetic is exact at the capacity margin") {
    // 13.8 <= 14 must hold exactly, and 13.8 + 0.3 > 14
    const auto w = money::parse("13.8");
    const auto b = money::parse("14");
    CHECK(w <= b);
    CHECK(w + money::parse("0.3") > b);
    CHECK((money::parse("0.1") + money::parse("0.2")) == money::parse("0.3"));
    CHECK(restruct::abs_diff(money::parse("29.0"), money::parse("31.5")) ==
          money::parse("2.5"));
}
