#include <gtest/gtest.h>

#include "support.hpp"

using namespace latinlab;
using testing_support::rect;
using testing_support::square;

TEST(Parse, SmallestSquare) {
    const auto L = parse_square("2\n1 2\n2 1\n");
    EXPECT_EQ(L.order(), 2);
    EXPECT_EQ(L, square({{1, 2}, {2, 1}}));
}

TEST(Parse, TwoRowRectangle) {
    const auto L = parse_rectangle("2 5\n1 5 3 4 2\n4 3 5 2 1\n");
    EXPECT_EQ(L.rows(), 2);
    EXPECT_EQ(L.order(), 5);
    EXPECT_EQ(L.at(1, 0), 3);
}

TEST(Parse, ColumnRepeatReportsPosition) {
    try {
        parse_rectangle("2 2\n1 2\n1 2\n");
        FAIL() << "expected RepeatError";
    } catch (const RepeatError& e) {
        EXPECT_EQ(e.row(), 2);
        EXPECT_EQ(e.column(), 1);
    }
}

TEST(Parse, RejectsBadInput) {
    EXPECT_THROW(parse_rectangle("2\n1 2\n"), ShapeError);
    EXPECT_THROW(parse_rectangle("2\n1 3\n2 1\n"), SymbolError);
    EXPECT_THROW(parse_rectangle("2\n1 1\n2 2\n"), RepeatError);
    EXPECT_THROW(parse_rectangle("3 2\n1 2\n2 1\n1 2\n"), ShapeError);
    EXPECT_THROW(parse_rectangle(""), ShapeError);
    EXPECT_THROW(parse_rectangle("2\n1 x\n2 1\n"), Error);
    EXPECT_THROW(parse_rectangle_json("{\"n\": 2"), ShapeError);
}

TEST(Serialization, TextAndJsonRoundTrip) {
    const auto L = testing_support::turn_example();
    EXPECT_EQ(parse_square(to_text(L)), L);
    EXPECT_EQ(LatinSquare(parse_any(to_json(L).dump())), L);
    const auto R = rect({{1, 5, 3, 4, 2}, {4, 3, 5, 2, 1}});
    EXPECT_EQ(parse_any(to_text(R)), R);
    EXPECT_EQ(to_text(R), "2 5\n1 5 3 4 2\n4 3 5 2 1\n");
}

TEST(Lookups, StayConsistentUnderExchanges) {
    auto L = LatinSquare::cyclic(6);
    EXPECT_TRUE(L.lookups_consistent());
    const std::vector<int> all{0, 1, 2, 3, 4, 5};
    EXPECT_TRUE(L.exchange_rows(0, 3, all));
    EXPECT_TRUE(L.lookups_consistent());
    const std::vector<int> bad{0};
    EXPECT_FALSE(L.exchange_rows(0, 1, bad));
    EXPECT_TRUE(L.lookups_consistent());
    for (int i = 0; i < 6; ++i) {
        for (int x = 0; x < 6; ++x) {
            EXPECT_EQ(L.column_of(i, L.at(i, x)), x);
            EXPECT_EQ(L.row_of(x, L.at(i, x)), i);
        }
    }
}

TEST(Sigma, ExampleRowsGiveThreeAndTwoCycle) {
    const auto R = rect({{1, 5, 3, 4, 2}, {4, 3, 5, 2, 1}});
    const auto s = sigma_row_pair(R, 0, 1);
    ASSERT_EQ(s.cycles.size(), 2u);
    EXPECT_TRUE(s.is_cycle(std::vector<int>{0, 3, 4}));
    EXPECT_TRUE(s.is_cycle(std::vector<int>{1, 2}));
    EXPECT_EQ(s.apply(0), 3);
    EXPECT_EQ(s.apply(3), 4);
    EXPECT_EQ(s.cycle_type(), (std::vector<int>{2, 3}));
}

TEST(Sigma, SmallCases) {
    const auto two = sigma_row_pair(square({{1, 2}, {2, 1}}), 0, 1);
    EXPECT_EQ(two.count(2), 1);
    const auto three = sigma_row_pair(LatinSquare::cyclic(3), 0, 1);
    EXPECT_EQ(three.cycle_type(), (std::vector<int>{3}));
    EXPECT_TRUE(three.is_derangement());
    EXPECT_THROW(sigma_row_pair(LatinSquare::cyclic(3), 1, 1), IndexError);
}

TEST(Tau, SmallCases) {
    const auto two = tau_column_pair(square({{1, 2}, {2, 1}}), 0, 1);
    EXPECT_TRUE(two.is_cycle(std::vector<int>{0, 1}));
    const auto flip_pair = tau_column_pair(testing_support::flip_example(), 0, 2);
    EXPECT_FALSE(flip_pair.same_cycle(0, 1));
    const auto c4 = tau_column_pair(LatinSquare::cyclic(4), 0, 2);
    EXPECT_TRUE(c4.is_cycle(std::vector<int>{0, 2}));
    EXPECT_TRUE(c4.is_cycle(std::vector<int>{1, 3}));
}

TEST(Sigma, InverseAndPowers) {
    const auto s = sigma_row_pair(testing_support::turn_example(), 0, 1);
    const auto inv = s.inverse();
    for (int x = 0; x < 5; ++x) {
        EXPECT_EQ(inv.apply(s.apply(x)), x);
        EXPECT_EQ(s.apply(x, s.length_of_cycle_containing(x)), x);
    }
}

TEST(Box, IncidenceExamples) {
    const auto L = LatinSquare::cyclic(5);
    EXPECT_EQ(incidence_count(L, Box::full(5)), 25u);
    EXPECT_EQ(incidence_count(L, Box{{0}, {0, 1, 2, 3, 4}, {3}}), 1u);
    EXPECT_EQ(incidence_count(square({{1, 2}, {2, 1}}), Box{{0, 1}, {0}, {0, 1}}), 2u);
    EXPECT_THROW(incidence_count(L, Box{{0, 0}, {1}, {1}}), IndexError);
    EXPECT_THROW(incidence_count(L, Box{{5}, {1}, {1}}), IndexError);
}

TEST(Box, CountMatchesDefinitionOnRandomBoxes) {
    Rng rng(11);
    const auto L = sample(SampleConfig{9, 4, -1, -1, 1}).front();
    for (int t = 0; t < 200; ++t) {
        Box b{rng.half_subset(9), rng.half_subset(9), rng.half_subset(9)};
        std::uint64_t direct = 0;
        for (int i : b.rows) {
            for (int x : b.columns) {
                for (int q : b.symbols) direct += incidence(L, i, x, q) ? 1 : 0;
            }
        }
        EXPECT_EQ(incidence_count(L, b), direct);
    }
}

TEST(Rng, DeterministicAndInRange) {
    Rng a(42), b(42);
    for (int t = 0; t < 100; ++t) EXPECT_EQ(a.next(), b.next());
    Rng r(1);
    for (int t = 0; t < 1000; ++t) {
        const auto v = r.below(std::uint64_t{7});
        EXPECT_LT(v, 7u);
    }
    const auto s = r.subset(10, 4);
    EXPECT_EQ(s.size(), 4u);
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
}
