#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "hcross/index.hpp"

using namespace hcross;

TEST_CASE("block_of follows the dyadic segmentation") {
    CHECK(block_of({0}) == BlockLabel{0});
    CHECK(block_of({5}) == BlockLabel{3}); // 4 <= 5 < 8
    CHECK(block_of({-1, 3}) == BlockLabel{1, 2});
    CHECK(block_of({1}) == BlockLabel{1});
    CHECK(block_of({-8, 0, 7}) == BlockLabel{4, 0, 3});
}

TEST_CASE("block_of places every frequency in its own block") {
    // coordinate rule: j=0 iff k=0, else 2^{j-1} <= |k| < 2^j
    for (int k = -300; k <= 300; ++k) {
        const int j = block_coordinate(k);
        if (k == 0) {
            CHECK(j == 0);
        } else {
            const long long a = std::abs(static_cast<long long>(k));
            CHECK((1LL << (j - 1)) <= a);
            CHECK(a < (1LL << j));
        }
    }
}

TEST_CASE("enumerate_block returns the exact product set") {
    CHECK(enumerate_block({0, 0}) == std::vector<MultiIndex>{{0, 0}});
    CHECK(enumerate_block({1}) == std::vector<MultiIndex>{{-1}, {1}});

    auto b = enumerate_block({1, 2});
    REQUIRE(b.size() == 8); // 2^{1+2}
    std::set<MultiIndex> expect;
    for (int k1 : {-1, 1})
        for (int k2 : {-3, -2, 2, 3}) expect.insert({k1, k2});
    CHECK(std::set<MultiIndex>(b.begin(), b.end()) == expect);
}

TEST_CASE("enumerate_layer matches the union of blocks") {
    CHECK(enumerate_layer(0, 3) == std::vector<MultiIndex>{{0, 0, 0}});

    auto l = enumerate_layer(2, 2);
    CHECK(l.size() == 12); // blocks (0,2),(1,1),(2,0) of 4 points each

    auto one_dim = enumerate_layer(3, 1);
    std::set<MultiIndex> expect;
    for (int k : {-7, -6, -5, -4, 4, 5, 6, 7}) expect.insert({k});
    CHECK(std::set<MultiIndex>(one_dim.begin(), one_dim.end()) == expect);
}

TEST_CASE("enumerate_layer respects the cap") {
    CHECK_THROWS_AS(enumerate_layer(12, 3, 1000), CapExceeded);
}

TEST_CASE("layer_cardinality is 2^n * binom(n+d-1, n)") {
    CHECK(layer_cardinality(3, 2) == 32);
    CHECK(layer_cardinality(0, 1) == 1);
    CHECK(layer_cardinality(0, 7) == 1);
    CHECK(layer_cardinality(8, 3) == 11520);
    CHECK_THROWS_AS(layer_cardinality(80, 2), std::overflow_error);

    for (int d = 1; d <= 3; ++d)
        for (int n = 0; n <= 8; ++n)
            CHECK(enumerate_layer(n, d).size() == layer_cardinality(n, d));
}

TEST_CASE("weight is the product of (1+|k_i|)") {
    CHECK(weight({0, 0}) == 1);
    CHECK(weight({3, -4}) == 20);
    CHECK(weight({1, 1, 1}) == 8);
}

TEST_CASE("weights on a layer satisfy the dyadic sandwich") {
    for (int d = 1; d <= 3; ++d) {
        for (int n = 0; n <= 7; ++n) {
            for (const auto& k : enumerate_layer(n, d)) {
                const double w = static_cast<double>(weight(k));
                CHECK(w > std::exp2(n - d));
                CHECK(w <= std::exp2(n));
            }
        }
    }
}

TEST_CASE("layer partition covers each point exactly once") {
    // d=2: all labels with entries <= 6 tile [-63,63]^2
    std::set<MultiIndex> seen;
    std::uint64_t total = 0;
    for (int j1 = 0; j1 <= 6; ++j1) {
        for (int j2 = 0; j2 <= 6; ++j2) {
            for (const auto& k : enumerate_block({j1, j2})) {
                CHECK(block_of(k) == BlockLabel{j1, j2});
                seen.insert(k);
                ++total;
            }
        }
    }
    CHECK(total == 127ull * 127ull);
    CHECK(seen.size() == total);
}

TEST_CASE("count_weight_leq agrees with enumeration") {
    for (int d = 1; d <= 3; ++d) {
        for (std::uint64_t w : {1ull, 2ull, 5ull, 17ull, 64ull}) {
            CHECK(count_weight_leq(w, d) == enumerate_weight_leq(w, d).size());
        }
    }
    CHECK(count_weight_leq(3, 1) == 5);
}

TEST_CASE("sorted_frequencies orders by weight with lexicographic ties") {
    auto f = sorted_frequencies(5, 1);
    CHECK(f == std::vector<MultiIndex>{{0}, {-1}, {1}, {-2}, {2}});

    CHECK(sorted_frequencies(1, 3) == std::vector<MultiIndex>{{0, 0, 0}});

    auto g = sorted_frequencies(2000, 2);
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const Weight wa = weight(g[i]), wb = weight(g[i + 1]);
        CHECK(wa <= wb);
        if (wa == wb) CHECK(g[i] < g[i + 1]);
    }
    // position weights agree with the counting route
    for (std::size_t pos : {1ul, 7ul, 100ul, 1999ul})
        CHECK(weight(g[pos - 1]) == weight_at_position(pos, 2));
}

TEST_CASE("layer ordering: weights between layers n-d and n do not cross") {
    const int d = 2;
    for (int n = d; n <= 8; ++n) {
        Weight sup_lower = 0, inf_upper = UINT64_MAX;
        for (const auto& k : enumerate_layer(n - d, d)) sup_lower = std::max(sup_lower, weight(k));
        for (const auto& k : enumerate_layer(n, d)) inf_upper = std::min(inf_upper, weight(k));
        CHECK(sup_lower <= inf_upper);
    }
}

TEST_CASE("index text round-trip") {
    auto layer = enumerate_layer(3, 2);
    std::stringstream ss;
    write_indices(ss, layer);
    auto back = read_indices(ss);
    CHECK(back == layer);
}
