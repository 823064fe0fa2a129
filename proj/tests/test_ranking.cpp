#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rankfd/ranking.hpp"
#include "test_support.hpp"

using rankfd::IncompleteDataset;

TEST_CASE("midranks of small lists", "[ranking]") {
    const std::vector<double> a{1.0, 2.0, 3.0};
    CHECK(rankfd::midranks(a) == std::vector<double>{1.0, 2.0, 3.0});

    const std::vector<double> b{5.0, 5.0};
    CHECK(rankfd::midranks(b) == std::vector<double>{1.5, 1.5});

    const std::vector<double> c{2.0, 1.0, 2.0, 3.0};
    CHECK(rankfd::midranks(c) == std::vector<double>{2.5, 1.0, 2.5, 4.0});
}

TEST_CASE("midranks equal the counting-function oracle exactly", "[ranking]") {
    std::mt19937_64 eng(42);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> len(1, 50);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = len(eng);
        std::vector<double> xs;
        xs.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            if (!xs.empty() && unif(eng) < 0.3) {
                xs.push_back(xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(eng)]);
            } else {
                xs.push_back(unif(eng));
            }
        }
        const auto fast = rankfd::midranks(xs);
        const auto slow = oracle::midranks_counting(xs);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast[i] == slow[i]);
    }
}

TEST_CASE("relative effects on hand-checked layouts", "[ranking]") {
    // Single cell {1,2,3,4}: mean rank (N+1)/2 forces p = 1/2.
    IncompleteDataset one = rankfd::make_complete(1, 1, {4});
    one.groups[0].values << 1, 2, 3, 4;
    const auto [t1, p1] = rankfd::relative_effects(rankfd::validate(one));
    CHECK(p1(0) == Catch::Approx(0.5).margin(1e-15));

    // Two separated groups: ranks 1,2 | 3,4.
    IncompleteDataset two = rankfd::make_complete(2, 1, {2, 2});
    two.groups[0].values << 1, 2;
    two.groups[1].values << 3, 4;
    const auto [t2, p2] = rankfd::relative_effects(rankfd::validate(two));
    CHECK(p2(0) == Catch::Approx(0.25).margin(1e-15));
    CHECK(p2(1) == Catch::Approx(0.75).margin(1e-15));
}

TEST_CASE("identical groups share identical effects", "[ranking]") {
    IncompleteDataset data = rankfd::make_complete(2, 2, {3, 3});
    data.groups[0].values << 1, 4, 2, 5, 3, 6;
    data.groups[1].values = data.groups[0].values;
    data.groups[0].mask(2, 1) = 0;
    data.groups[1].mask(2, 1) = 0;
    const auto [table, p] = rankfd::relative_effects(rankfd::validate(data));
    CHECK(p(0) == p(2));
    CHECK(p(1) == p(3));
}

TEST_CASE("rank identities and effect range on random data", "[ranking]") {
    std::mt19937_64 eng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const auto data = support::random_dataset(eng, 2, 3, 3, 8, 0.25, 0.25);
        const auto v = rankfd::validate(data);
        const auto [table, p] = rankfd::relative_effects(v);
        const auto z = rankfd::centered_ranks(table, v);

        double rank_sum = 0.0;
        for (int i = 0; i < v.data.num_groups(); ++i) {
            rank_sum += table.ranks[static_cast<std::size_t>(i)].sum();
            for (int j = 0; j < v.data.num_occasions(); ++j) {
                double zsum = 0.0;
                for (int k = 0; k < v.data.group_size(i); ++k) {
                    if (v.data.observed(i, k, j)) zsum += z[static_cast<std::size_t>(i)](k, j);
                }
                CHECK(std::abs(zsum) < 1e-9);
            }
        }
        const double big_n = static_cast<double>(v.counts.observations);
        CHECK(rank_sum == Catch::Approx(big_n * (big_n + 1.0) / 2.0).margin(1e-9));

        for (Eigen::Index e = 0; e < p.size(); ++e) {
            CHECK(p(e) >= 1.0 / (2.0 * big_n) - 1e-12);
            CHECK(p(e) <= 1.0 - 1.0 / (2.0 * big_n) + 1e-12);
        }
    }
}

TEST_CASE("strictly increasing transforms leave ranks bit-identical", "[ranking]") {
    std::mt19937_64 eng(123);
    for (int trial = 0; trial < 20; ++trial) {
        const auto data = support::random_dataset(eng, 2, 2, 3, 6, 0.3, 0.2);
        auto transformed = data;
        for (auto& g : transformed.groups) {
            g.values = g.values.unaryExpr([](double x) { return std::exp(x); });
        }

        const auto [ta, pa] = rankfd::relative_effects(rankfd::validate(data));
        const auto [tb, pb] = rankfd::relative_effects(rankfd::validate(transformed));
        CHECK(pa == pb);
        for (std::size_t i = 0; i < ta.ranks.size(); ++i) CHECK(ta.ranks[i] == tb.ranks[i]);
        CHECK(ta.cell_mean == tb.cell_mean);
    }
}

TEST_CASE("centered ranks on hand cases", "[ranking]") {
    IncompleteDataset data = rankfd::make_complete(1, 1, {2});
    data.groups[0].values << 1, 2;
    const auto v = rankfd::validate(data);
    const auto table = rankfd::rank_table(v);
    const auto z = rankfd::centered_ranks(table, v);
    CHECK(z[0](0, 0) == -0.5);
    CHECK(z[0](1, 0) == 0.5);

    IncompleteDataset tied = rankfd::make_complete(1, 1, {3});
    tied.groups[0].values << 7, 7, 7;
    const auto vt = rankfd::validate(tied);
    const auto zt = rankfd::centered_ranks(rankfd::rank_table(vt), vt);
    CHECK(zt[0].norm() == 0.0);
}
