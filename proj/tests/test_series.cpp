#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <random>

#include "ssa/series.hpp"

using namespace ssa;

namespace {

std::vector<std::pair<Index, Index>> bounds(const Segmentation& s) {
    std::vector<std::pair<Index, Index>> out;
    for (const auto& iv : s) out.emplace_back(iv.start, iv.end);
    return out;
}

}  // namespace

TEST_CASE("equal segmentation splits evenly") {
    using V = std::vector<std::pair<Index, Index>>;
    CHECK(bounds(Segmentation::equal(12, 3)) == V{{1, 5}, {5, 9}, {9, 13}});
    CHECK(bounds(Segmentation::equal(13, 3)) == V{{1, 5}, {5, 9}, {9, 14}});
    const auto six = Segmentation::equal(3000, 6);
    REQUIRE(six.size() == 6);
    for (const auto& iv : six) CHECK(iv.length() == 500);
}

TEST_CASE("equal segmentation rejects bad sizes") {
    CHECK_THROWS_AS(Segmentation::equal(10, 1), InvalidSegmentation);
    CHECK_THROWS_AS(Segmentation::equal(7, 4), InvalidSegmentation);
    CHECK_NOTHROW(Segmentation::equal(8, 4));
}

TEST_CASE("breakpoint segmentation") {
    using V = std::vector<std::pair<Index, Index>>;
    const std::vector<Index> one{6};
    CHECK(bounds(Segmentation::from_breakpoints(one, 10)) == V{{1, 6}, {6, 11}});
    const std::vector<Index> two{4, 6};
    const auto s = Segmentation::from_breakpoints(two, 10);
    REQUIRE(s.size() == 3);
    CHECK(s[0].length() == 3);
    CHECK(s[1].length() == 2);
    CHECK(s[2].length() == 5);
    CHECK(s.breakpoints() == two);

    const std::vector<Index> three{3};
    CHECK_NOTHROW(Segmentation::from_breakpoints(three, 4));
    const std::vector<Index> four{4};
    CHECK_THROWS_AS(Segmentation::from_breakpoints(four, 4), InvalidSegmentation);
    const std::vector<Index> unsorted{6, 4};
    CHECK_THROWS_AS(Segmentation::from_breakpoints(unsorted, 10), InvalidSegmentation);
    const std::vector<Index> first{1};
    CHECK_THROWS_AS(Segmentation::from_breakpoints(first, 10), InvalidSegmentation);
    const std::vector<Index> none;
    CHECK_THROWS_AS(Segmentation::from_breakpoints(none, 10), InvalidSegmentation);
}

TEST_CASE("segmentations partition 1..T") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 200; ++rep) {
        const Index T = std::uniform_int_distribution<Index>(4, 400)(rng);
        const Index K = std::uniform_int_distribution<Index>(2, T / 2)(rng);
        const auto s = Segmentation::equal(T, K);
        CHECK(static_cast<Index>(s.size()) == K);
        Index next = 1;
        for (const auto& iv : s) {
            CHECK(iv.start == next);
            next = iv.end;
        }
        CHECK(next == T + 1);
        for (std::size_t i = 0; i + 1 < s.size(); ++i) CHECK(s[i].length() == T / K);
        CHECK(s[s.size() - 1].length() - T / K == T % K);
    }
}

TEST_CASE("require_lag checks interval lengths") {
    const auto s = Segmentation::equal(9, 3);
    CHECK_NOTHROW(s.require_lag(1));
    CHECK_THROWS_AS(s.require_lag(2), InsufficientData);
}

TEST_CASE("csv parsing") {
    const auto a = parse_csv("1,2\n3,4\n5,6\n");
    CHECK(a.length() == 3);
    CHECK(a.dim() == 2);
    CHECK(a.values()(2, 1) == 6.0);
    CHECK(a.names() == std::vector<std::string>{"X1", "X2"});

    const auto b = parse_csv("a,b\n1,2\n3,4\n5,6");
    CHECK(b.names() == std::vector<std::string>{"a", "b"});
    CHECK(b.values() == a.values());
}

TEST_CASE("csv errors carry row and column") {
    try {
        parse_csv("1,x\n2,3\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.row() == 1);
        CHECK(e.col() == 2);
    }
    CHECK_THROWS_AS(parse_csv("1,2\n3\n"), ParseError);
    CHECK_THROWS_AS(parse_csv("1,2\n"), ParseError);
    CHECK_THROWS_AS(parse_csv("1,nan\n2,3\n"), ParseError);
}

TEST_CASE("csv round trip is bit exact") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd(0.0, 1.0);
    Matrix<double> m(50, 4);
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) m(i, j) = nd(rng) * std::pow(10.0, static_cast<double>(j * 3 - 4));
    m(0, 0) = 0.1;
    m(1, 1) = -1e-300;
    m(2, 2) = 1e300;
    const MultivariateSeries s(m, {"a", "b", "c", "d"});
    const auto back = parse_csv(format_csv(s));
    REQUIRE(back.length() == s.length());
    REQUIRE(back.dim() == s.dim());
    CHECK(back.names() == s.names());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            CHECK(std::memcmp(&back.values()(i, j), &m(i, j), sizeof(double)) == 0);
}

TEST_CASE("series rejects degenerate input") {
    CHECK_THROWS(MultivariateSeries(Matrix<double>::Zero(1, 2)));
    Matrix<double> bad = Matrix<double>::Zero(3, 2);
    bad(1, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS(MultivariateSeries(bad));
}
