#include <sstream>

#include <doctest.h>

#include "passprob/csv.hpp"

using namespace passprob;

TEST_CASE("csv reader handles quotes, embedded commas and newlines") {
    std::istringstream in("a,\"b,c\",\"d\ne\"\r\nf,\"g\"\"h\",i\n");
    csv::Reader reader(in);
    std::vector<std::string> row;
    REQUIRE(reader.next(row));
    REQUIRE(row.size() == 3);
    CHECK(row[0] == "a");
    CHECK(row[1] == "b,c");
    CHECK(row[2] == "d\ne");
    REQUIRE(reader.next(row));
    CHECK(row[1] == "g\"h");
    CHECK(row[2] == "i");
    CHECK_FALSE(reader.next(row));
}

TEST_CASE("csv table requires declared columns") {
    std::istringstream good("x,y,z\n1,2,3\n");
    csv::Table table(good, {"x", "z"}, "demo");
    REQUIRE(table.next());
    CHECK(table.get("x") == "1");
    CHECK(table.get("z") == "3");
    CHECK(table.has("y"));
    CHECK_FALSE(table.has("w"));

    std::istringstream bad("x,y\n1,2\n");
    CHECK_THROWS_AS(csv::Table(bad, {"x", "z"}, "demo"), SchemaError);
}

TEST_CASE("csv table strips a UTF-8 BOM") {
    std::istringstream in("\xEF\xBB\xBFx,y\n5,6\n");
    csv::Table table(in, {"x"}, "bom");
    REQUIRE(table.next());
    CHECK(table.get("x") == "5");
}

TEST_CASE("csv fmt round-trips doubles") {
    for (double v : {0.0, 1.0, -2.5, 0.579, 13.34183, 1e-12, 123456.789}) {
        CHECK(std::stod(csv::fmt(v)) == v);
    }
}

TEST_CASE("csv quote escapes only when needed") {
    CHECK(csv::quote("plain") == "plain");
    CHECK(csv::quote("a,b") == "\"a,b\"");
    CHECK(csv::quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
}
