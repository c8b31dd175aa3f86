#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"

using namespace latinlab;

TEST(Oracle, SquareCounts) {
    EXPECT_EQ(enumerate_squares(1).total_count, 1u);
    EXPECT_EQ(enumerate_squares(2).total_count, 2u);
    EXPECT_EQ(enumerate_squares(3).total_count, 12u);
    const auto four = enumerate_squares(4);
    EXPECT_EQ(four.total_count, 576u);
    EXPECT_GE(four.min_n(), 1u);
    EXPECT_EQ(four.n_histogram, (std::map<std::uint64_t, std::uint64_t>{{4, 432}, {12, 144}}));
    EXPECT_EQ(four.class_sizes, (std::map<std::uint64_t, std::uint64_t>{{0, 288}, {2, 288}}));
}

TEST(Oracle, ReducedMatchesFull) {
    EnumerationOptions opt;
    opt.reduced = true;
    const auto r = enumerate_squares(4, opt);
    const auto f = enumerate_squares(4);
    EXPECT_EQ(r.total_count, f.total_count);
    EXPECT_EQ(r.n_histogram, f.n_histogram);
    EXPECT_EQ(r.class_sizes, f.class_sizes);
}

TEST(Oracle, OrderFive) {
    EnumerationOptions opt;
    opt.reduced = true;
    const auto five = enumerate_squares(5, opt);
    EXPECT_EQ(five.total_count, 161280u);
    EXPECT_EQ(five.min_n(), 0u);
    EXPECT_EQ(five.class_sizes, (std::map<std::uint64_t, std::uint64_t>{{0, 103680}, {1, 57600}}));
    const auto [num, den] = five.mean_n();
    EXPECT_EQ(num * 14, den * 50); // E[N] = 25/7
}

TEST(Oracle, VisitedSquaresAreDistinctAndValid) {
    const auto all = all_squares(4);
    ASSERT_EQ(all.size(), 576u);
    std::set<std::string> keys;
    for (const auto& L : all) {
        keys.insert(L.key());
        EXPECT_TRUE(L.columns_are_permutations());
        EXPECT_EQ(count_intercalates(L), testing_support::naive_intercalates(L));
    }
    EXPECT_EQ(keys.size(), 576u);
}

TEST(Oracle, Rectangles) {
    for (int n = 1; n <= 5; ++n) {
        const auto r = enumerate_rectangles(1, n);
        EXPECT_EQ(r.total_count, detail::factorial(n));
        EXPECT_EQ(r.n_histogram, (std::map<std::uint64_t, std::uint64_t>{{0, detail::factorial(n)}}));
    }
    EXPECT_EQ(enumerate_rectangles(2, 3).total_count, 12u);
    // 2 x n rectangles: n! times the derangement number.
    EXPECT_EQ(enumerate_rectangles(2, 4).total_count, 24u * 9u);
    EXPECT_EQ(enumerate_rectangles(2, 6).total_count, 720u * 265u);
    EXPECT_EQ(enumerate_rectangles(3, 4).total_count, 576u);
    const auto two_four = enumerate_rectangles(2, 4);
    EXPECT_EQ(two_four.n_histogram, (std::map<std::uint64_t, std::uint64_t>{{0, 24 * 6}, {2, 24 * 3}}));
}

TEST(Oracle, ParallelMatchesSerial) {
    EnumerationOptions par;
    par.workers = 3;
    par.batch_units = 7;
    const auto a = enumerate_rectangles(3, 6, par);
    const auto b = enumerate_rectangles(3, 6);
    EXPECT_EQ(a.total_count, b.total_count);
    EXPECT_EQ(a.n_histogram, b.n_histogram);
    EXPECT_EQ(a.class_sizes, b.class_sizes);
}

TEST(Oracle, Limits) {
    EXPECT_THROW(enumerate_squares(6), ResourceError);
    EXPECT_THROW(enumerate_rectangles(2, 7), ResourceError);
    EXPECT_THROW(enumerate_rectangles(3, 2), IndexError);
    EnumerationOptions tight;
    tight.node_budget = 100;
    EXPECT_THROW(enumerate_squares(5, tight), ResourceError);
}

TEST(Oracle, CheckpointResume) {
    const auto dir = std::filesystem::temp_directory_path() / "latinlab_oracle_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "ck.json").string();
    std::filesystem::remove(path);
    EnumerationOptions opt;
    opt.reduced = true;
    opt.checkpoint_path = path;
    opt.max_units = 5;
    opt.batch_units = 2;
    auto partial = enumerate_squares(5, opt);
    EXPECT_FALSE(partial.complete);
    EXPECT_EQ(partial.units_done, 5u);
    ASSERT_TRUE(std::filesystem::exists(path));
    opt.max_units = UINT64_MAX;
    const auto rest = enumerate_squares(5, opt);
    EXPECT_TRUE(rest.complete);
    EXPECT_EQ(rest.total_count, 161280u);
    EXPECT_EQ(rest.class_sizes.at(1), 57600u);
    // A checkpoint for another problem is refused.
    EnumerationOptions other;
    other.checkpoint_path = path;
    EXPECT_THROW(enumerate_squares(4, other), Error);
    std::filesystem::remove_all(dir);
}

TEST(Permanent, Examples) {
    Matrix id(4, std::vector<std::int64_t>(4, 0));
    for (int i = 0; i < 4; ++i) id[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    EXPECT_EQ(exact_permanent(id).value, 1);
    for (int n = 1; n <= 8; ++n) {
        const Matrix ones(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 1));
        EXPECT_EQ(exact_permanent(ones).value, BigInt(detail::factorial(n)));
    }
    for (int n = 2; n <= 7; ++n) {
        Matrix cyc(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
        for (int i = 0; i < n; ++i) {
            cyc[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
            cyc[static_cast<std::size_t>(i)][static_cast<std::size_t>((i + 1) % n)] = 1;
        }
        EXPECT_EQ(exact_permanent(cyc).value, 2) << n;
    }
    EXPECT_EQ(exact_permanent(Matrix{}).value, 1);
}

TEST(Permanent, MatchesDefinitionOnRandomMatrices) {
    Rng rng(5);
    for (int t = 0; t < 60; ++t) {
        const int n = 1 + static_cast<int>(rng.below(std::uint64_t{7}));
        Matrix a(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n)));
        for (auto& row : a) {
            for (auto& v : row) v = static_cast<std::int64_t>(rng.below(std::uint64_t{4}));
        }
        EXPECT_EQ(exact_permanent(a).value, BigInt(testing_support::naive_permanent(a)));
    }
}

TEST(Permanent, LargeEntriesUseBigIntegers) {
    const Matrix big(12, std::vector<std::int64_t>(12, 1'000'000));
    const auto r = exact_permanent(big);
    BigInt expected = BigInt(detail::factorial(12));
    for (int i = 0; i < 12; ++i) expected *= 1'000'000;
    EXPECT_EQ(r.value, expected);
    EXPECT_EQ(r.method, "ryser-gray/cpp_int");
    EXPECT_THROW(exact_permanent(Matrix(25, std::vector<std::int64_t>(25, 1))), ResourceError);
    EXPECT_THROW(exact_permanent(Matrix{{1, 2}}), IndexError);
}

TEST(RegularGraphs, Counts) {
    EXPECT_EQ(enumerate_regular_bipartite(3, 0), 1u);
    EXPECT_EQ(enumerate_regular_bipartite(3, 1), 6u);
    EXPECT_EQ(enumerate_regular_bipartite(3, 2), 6u);
    EXPECT_EQ(enumerate_regular_bipartite(4, 1), 24u);
    EXPECT_EQ(enumerate_regular_bipartite(4, 2), 90u);
    EXPECT_EQ(enumerate_regular_bipartite(4, 3), 24u);
    EXPECT_EQ(enumerate_regular_bipartite(4, 4), 1u);
    EXPECT_THROW(enumerate_regular_bipartite(5, 2), ResourceError);
}

TEST(RegularGraphs, MatchingsAndFactorizations) {
    for (const auto& g : enumerate_regular_bipartite_graphs(4, 2)) {
        const auto per = exact_permanent(g).value;
        EXPECT_EQ(BigInt(perfect_matchings(g).size()), per);
        // A 2-regular bipartite graph is a union of c even cycles: 2^c matchings
        // and 2^c ordered factorizations.
        EXPECT_EQ(count_one_factorizations(g), per);
    }
    const Matrix k3(3, std::vector<std::int64_t>(3, 1));
    EXPECT_EQ(count_one_factorizations(k3), 12); // ordered 1-factorizations of K_{3,3}
    for (const auto& g : enumerate_regular_bipartite_graphs(3, 2)) EXPECT_EQ(count_one_factorizations(g), 2);
}
