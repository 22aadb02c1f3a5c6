#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <sstream>

#include "bandchain/generate.hpp"
#include "bandchain/io.hpp"

using namespace bandchain;

TEST_CASE("band files round-trip exactly") {
    BandedMatrix a = random_banded_dominant(17, 3, 2, 123);
    // throw in values whose decimal rendering is easy to get wrong
    a.set(5, 3, 0.1);
    a.set(7, 7, 1e-300);
    a.set(8, 9, -0.0);
    a.set(9, 9, 12345678901234.5);
    std::stringstream s;
    write_band(s, a);
    BandedMatrix back = read_band(s);
    REQUIRE(back.order() == a.order());
    REQUIRE(back.lower_bw() == a.lower_bw());
    REQUIRE(back.upper_bw() == a.upper_bw());
    for (int d = -3; d <= 2; ++d) CHECK(back.band(d) == a.band(d));
}

TEST_CASE("band file parse rejects malformed input") {
    auto expect_fail = [](const std::string& text) {
        std::stringstream s(text);
        CHECK_THROWS_AS(read_band(s), ParseError);
    };
    expect_fail("");
    expect_fail("BND 2\n2 1 0\n1\n1 1\n");
    expect_fail("BND 1\n2 1\n1\n1 1\n");
    expect_fail("BND 1\n2 1 0\n1 5\n1 1\n");        // band -1 must hold 1 value
    expect_fail("BND 1\n2 1 0\n1\n1\n");            // diagonal must hold 2 values
    expect_fail("BND 1\n2 1 0\n1\nx 1\n");          // not a number
    expect_fail("BND 1\n2 5 0\n");                  // bandwidth out of range
    expect_fail("BND 1\n3 1 1\n1 1\n1 1 1\n");      // missing last band line
}

TEST_CASE("band file accepts blank separator lines") {
    std::stringstream s("BND 1\n\n3 1 1\n4 5\n\n1 2 3\n6 7\n");
    BandedMatrix a = read_band(s);
    CHECK(a.band(-1) == std::vector<double>{4.0, 5.0});
    CHECK(a.band(0) == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(a.band(1) == std::vector<double>{6.0, 7.0});
}

TEST_CASE("vector files round-trip") {
    std::vector<double> v = random_vector(9, 5);
    v[0] = 1.0 / 3.0;
    std::stringstream s;
    write_vector(s, v);
    CHECK(read_vector(s) == v);
}

TEST_CASE("vector file parse validates the count") {
    {
        std::stringstream s("3\n1 2\n");
        CHECK_THROWS_AS(read_vector(s), ParseError);
    }
    {
        std::stringstream s("2\n1 2 3\n");
        CHECK_THROWS_AS(read_vector(s), ParseError);
    }
    {
        std::stringstream s("0\n");
        CHECK(read_vector(s).empty());
    }
}

TEST_CASE("chain files round-trip") {
    FactorChain chain;
    chain.lower.push_back(BidiagonalFactor::unit_lower({1.0, 3.0, 5.0}));
    chain.lower.push_back(BidiagonalFactor::unit_lower({1.0, 1.0, 1.0}));
    chain.upper.push_back(BidiagonalFactor::upper({2.0, 0.5, -1.0, 4.0}, {0.25, 0.125, -8.0}));
    std::stringstream s;
    write_chain(s, chain);
    FactorChain back = read_chain(s);
    REQUIRE(back.lower.size() == 2);
    REQUIRE(back.upper.size() == 1);
    CHECK(back.lower[0].offdiag() == chain.lower[0].offdiag());
    CHECK(back.lower[1].offdiag() == chain.lower[1].offdiag());
    CHECK(back.upper[0].diag() == chain.upper[0].diag());
    CHECK(back.upper[0].offdiag() == chain.upper[0].offdiag());
}

TEST_CASE("chain file parse validates factor shape") {
    // upper factor where a lower factor is announced
    std::stringstream s("CHAIN 1\n1 0\nBND 1\n2 0 1\n1 1\n2\n");
    CHECK_THROWS_AS(read_chain(s), ParseError);
}

TEST_CASE("run reports carry a schema version and reject non-finite numbers") {
    RunReport rep("solve");
    rep.set("n", 5);
    rep.set("residual", 1e-12);
    auto j = rep.json();
    CHECK(j["schema_version"] == 1);
    CHECK(j["command"] == "solve");
    CHECK(j["n"] == 5);
    CHECK_THROWS_AS(rep.set("residual", std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    CHECK_THROWS_AS(rep.set("residual", std::nan("")), std::invalid_argument);
}
