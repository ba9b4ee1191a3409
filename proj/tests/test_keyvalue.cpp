#include "pmt/keyvalue.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace pmt;

TEST_CASE("parse and render round trip")
{
    const auto c = KeyValueConfig::parse("# comment\nm = 2\n\nname=  barenblatt  \nR = 6.5\n");
    CHECK(c.get_double("m") == 2.0);
    CHECK(c.get_string("name") == "barenblatt");
    CHECK(c.get_double("R") == 6.5);
    CHECK(KeyValueConfig::parse(c.render()) == c);
}

TEST_CASE("doubles survive formatting exactly")
{
    KeyValueConfig c;
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 6.02214076e23}) {
        c.set("v", v);
        CHECK(KeyValueConfig::parse(c.render()).get_double("v") == v);
        CHECK(parse_double(format_double(v), "v") == v);
    }
}

TEST_CASE("typed getters")
{
    KeyValueConfig c;
    c.set("n", 42);
    c.set("s", "text");
    CHECK(c.get_int("n") == 42);
    CHECK(c.get_int("missing", 7) == 7);
    CHECK(c.get_string("missing", "x") == "x");
    CHECK_THROWS_AS(c.get_int("s"), std::invalid_argument);
    CHECK_THROWS_AS(c.get_double("missing"), std::invalid_argument);
    CHECK(parse_int("0x5EED", "seed") == 0x5EED);
    CHECK_THROWS_AS(parse_double("1.5abc", "x"), std::invalid_argument);
}

TEST_CASE("merge overrides and appends")
{
    auto a = KeyValueConfig::parse("m = 2\nd = 1\n");
    a.merge(KeyValueConfig::parse("d = 3\nC = 4\n"));
    CHECK(a.get_int("d") == 3);
    CHECK(a.get_double("C") == 4.0);
    CHECK(a.entries().size() == 3);
    CHECK(a.entries().front().first == "m");
}

TEST_CASE("malformed lines are rejected")
{
    CHECK_THROWS_AS(KeyValueConfig::parse("no equals sign\n"), std::invalid_argument);
    CHECK_THROWS_AS(KeyValueConfig::parse(" = 3\n"), std::invalid_argument);
}
