#include <gtest/gtest.h>

#include "support.hpp"

using namespace latinlab;

TEST(QGraph, Examples) {
    const auto L = LatinSquare::cyclic(5);
    const auto full = q_graph(L, {0, 1, 2, 3, 4});
    EXPECT_TRUE(full.is_regular());
    for (const auto& row : full.biadjacency) {
        for (auto v : row) EXPECT_EQ(v, 1);
    }
    const auto empty = q_graph(L, {});
    EXPECT_EQ(empty.degree, 0);
    EXPECT_TRUE(empty.is_regular());
    const auto two = q_graph(testing_support::square({{1, 2}, {2, 1}}), {0});
    EXPECT_EQ(two.biadjacency, (Matrix{{1, 0}, {0, 1}}));
    const auto three = q_graph(sample(SampleConfig{9, 1, -1, -1, 1}).front(), {1, 4, 6});
    EXPECT_TRUE(three.is_regular());
    EXPECT_EQ(three.edge_count({0, 1, 2, 3, 4, 5, 6, 7, 8}, {0, 1, 2, 3, 4, 5, 6, 7, 8}), 27u);
}

TEST(BoxStat, FullAndSingleCell) {
    const auto L = sample(SampleConfig{6, 2, -1, -1, 1}).front();
    const auto full = box_stat(L, Box::full(6));
    EXPECT_EQ(full.observed, 36u);
    EXPECT_DOUBLE_EQ(full.deviation, 0.0);
    const auto cell = box_stat(L, Box{{2}, {3}, {L.at(2, 3)}});
    EXPECT_EQ(cell.observed, 1u);
    EXPECT_DOUBLE_EQ(cell.expected, 1.0 / 6.0);
    const auto other = box_stat(L, Box{{2}, {3}, {(L.at(2, 3) + 1) % 6}});
    EXPECT_EQ(other.observed, 0u);
}

TEST(BoxScan, DeterministicAndStrategiesDiffer) {
    const auto L = sample(SampleConfig{12, 4, -1, -1, 1}).front();
    for (auto s : {BoxStrategy::uniform_element, BoxStrategy::size_grid, BoxStrategy::structured_intervals}) {
        const auto a = box_scan(L, s, 50, 9);
        const auto b = box_scan(L, s, 50, 9);
        ASSERT_EQ(a.size(), 50u);
        for (std::size_t t = 0; t < a.size(); ++t) {
            EXPECT_EQ(a[t].box, b[t].box);
            EXPECT_EQ(a[t].observed, incidence_count(L, a[t].box));
        }
        EXPECT_EQ(parse_strategy(strategy_name(s)), s);
    }
    for (const auto& st : box_scan(L, BoxStrategy::structured_intervals, 50, 1)) {
        for (const auto* set : {&st.box.rows, &st.box.columns, &st.box.symbols}) {
            for (std::size_t t = 1; t < set->size(); ++t) EXPECT_EQ((*set)[t], (*set)[t - 1] + 1);
        }
    }
    EXPECT_THROW(parse_strategy("nope"), Error);
}

TEST(BoxScan, RatioBelowOneAtThirty) {
    const auto L = sample(SampleConfig{30, 12, -1, -1, 1}).front();
    EXPECT_LT(max_ratio(box_scan(L, BoxStrategy::uniform_element, 2000, 5)), 1.0);
}

TEST(Cover, Examples) {
    const auto all = build_cover(6, 6, 5, 1);
    EXPECT_EQ(all.min_coverage(), 5u);
    EXPECT_EQ(all.max_coverage(), 5u);
    const auto pair = build_cover(2, 2, 7, 1);
    EXPECT_EQ(pair.coverage(0, 1), 7u);
    EXPECT_EQ(pair.coverage(1, 0), 7u);
    EXPECT_THROW(build_cover(5, 6, 1, 1), IndexError);
}

TEST(Cover, TotalsAndBand) {
    const auto f = build_cover(100, 20, 10000, 1);
    EXPECT_EQ(f.total_coverage(), 10000u * 190u);
    std::uint64_t pairs = 0;
    for (const auto& [v, c] : f.histogram) pairs += c;
    EXPECT_EQ(pairs, 4950u);
    const auto r = cover_report(f);
    EXPECT_TRUE(r.in_regime);
    EXPECT_TRUE(r.within_band);
    EXPECT_NEAR(r.exact_mean, 10000.0 * 20 * 19 / (100.0 * 99), 1e-9);
}
