#include <doctest.h>

#include "hopspec/hierarchy.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace hopspec;

namespace {

std::vector<int> as_vector(std::span<const int> k) { return {k.begin(), k.end()}; }

// plain odometer over [0, e_max]^m, keeping sum <= e_max
std::set<std::vector<int>> brute_force(int m, int e_max) {
    std::set<std::vector<int>> out;
    std::vector<int> k(static_cast<std::size_t>(m), 0);
    while (true) {
        int sum = 0;
        for (int v : k) sum += v;
        if (sum <= e_max) out.insert(k);
        int i = 0;
        while (i < m && ++k[static_cast<std::size_t>(i)] > e_max) k[static_cast<std::size_t>(i++)] = 0;
        if (i == m) break;
    }
    return out;
}

}  // namespace

TEST_CASE("basis sizes") {
    CHECK(enumerate_basis(1, 12).size() == 13);
    CHECK(enumerate_basis(2, 1).size() == 3);
    CHECK(enumerate_basis(4, 12).size() == 1820);
    CHECK(enumerate_basis(3, 0).size() == 1);
}

TEST_CASE("small basis listing and order") {
    auto b = enumerate_basis(2, 1);
    CHECK(as_vector(b.index(0)) == std::vector<int>{0, 0});
    CHECK(as_vector(b.index(1)) == std::vector<int>{1, 0});
    CHECK(as_vector(b.index(2)) == std::vector<int>{0, 1});

    auto b2 = enumerate_basis(2, 2);
    CHECK(as_vector(b2.index(3)) == std::vector<int>{2, 0});
    CHECK(as_vector(b2.index(4)) == std::vector<int>{1, 1});
    CHECK(as_vector(b2.index(5)) == std::vector<int>{0, 2});
    for (std::size_t i = 1; i < b2.size(); ++i) CHECK(b2.depth(i - 1) <= b2.depth(i));
}

TEST_CASE("neighbours") {
    auto b = enumerate_basis(2, 1);
    auto up = b.neighbor(0, 0, Direction::Up);
    REQUIRE(up);
    CHECK(as_vector(b.index(*up)) == std::vector<int>{1, 0});
    CHECK_FALSE(b.neighbor(0, 0, Direction::Down));
    for (std::size_t i = 1; i < b.size(); ++i)
        for (int s = 0; s < 2; ++s) CHECK_FALSE(b.neighbor(i, s, Direction::Up));
    CHECK_THROWS_AS(b.neighbor(0, 2, Direction::Up), std::out_of_range);
    CHECK_THROWS_AS(b.neighbor(3, 0, Direction::Up), std::out_of_range);
}

TEST_CASE("up then down returns home") {
    auto b = enumerate_basis(4, 6);
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (int s = 0; s < 4; ++s) {
            auto up = b.neighbor(i, s, Direction::Up);
            if (!up) {
                CHECK(b.depth(i) == 6);
                continue;
            }
            CHECK(b.depth(*up) == b.depth(i) + 1);
            CHECK(b.neighbor(*up, s, Direction::Down) == i);
        }
    }
}

TEST_CASE("enumeration matches brute force and depth histogram") {
    for (int m = 1; m <= 4; ++m) {
        for (int e = 0; e <= 12; ++e) {
            auto b = enumerate_basis(m, e);
            auto ref = brute_force(m, e);
            REQUIRE(b.size() == ref.size());
            CHECK(b.size() == binomial(static_cast<std::uint64_t>(e + m), static_cast<std::uint64_t>(m)));
            std::set<std::vector<int>> seen;
            std::vector<std::size_t> hist(static_cast<std::size_t>(e + 1), 0);
            for (std::size_t i = 0; i < b.size(); ++i) {
                seen.insert(as_vector(b.index(i)));
                ++hist[static_cast<std::size_t>(b.depth(i))];
                CHECK(b.ordinal_of(b.index(i)) == i);
            }
            CHECK(seen == ref);
            for (int d = 0; d <= e; ++d)
                CHECK(hist[static_cast<std::size_t>(d)] ==
                      binomial(static_cast<std::uint64_t>(d + m - 1), static_cast<std::uint64_t>(m - 1)));
        }
    }
}

TEST_CASE("lookup rejects outside indices") {
    auto b = enumerate_basis(3, 2);
    std::vector<int> deep{1, 1, 1};
    std::vector<int> wrong_len{0, 0};
    CHECK_FALSE(b.ordinal_of(deep));
    CHECK_FALSE(b.ordinal_of(wrong_len));
}

TEST_CASE("custom order") {
    auto b = enumerate_basis(3, 3);
    std::vector<std::vector<int>> idx;
    for (std::size_t i = 0; i < b.size(); ++i) idx.push_back(as_vector(b.index(i)));
    std::mt19937 rng(7);
    std::shuffle(idx.begin(), idx.end(), rng);
    auto p = HierarchyBasis::from_indices(3, 3, idx);
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(as_vector(p.index(i)) == idx[i]);
        for (int s = 0; s < 3; ++s) {
            auto up = p.neighbor(i, s, Direction::Up);
            auto ref = b.neighbor(*b.ordinal_of(idx[i]), s, Direction::Up);
            REQUIRE(up.has_value() == ref.has_value());
            if (up) CHECK(as_vector(p.index(*up)) == as_vector(b.index(*ref)));
        }
    }

    auto dup = idx;
    dup.back() = dup.front();
    CHECK_THROWS_AS(HierarchyBasis::from_indices(3, 3, dup), std::invalid_argument);
    idx.pop_back();
    CHECK_THROWS_AS(HierarchyBasis::from_indices(3, 3, idx), std::invalid_argument);
}

TEST_CASE("resource guard") {
    CHECK_THROWS_AS(enumerate_basis(8, 30, 4), std::length_error);
    CHECK_THROWS_AS(enumerate_basis(4, 12, 4, 7279), std::length_error);
    CHECK(enumerate_basis(4, 12, 4, 7280).size() == 1820);
    CHECK_THROWS_AS(enumerate_basis(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_basis(2, -1), std::invalid_argument);
}

TEST_CASE("binomial") {
    CHECK(binomial(16, 4) == 1820);
    CHECK(binomial(5, 0) == 1);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(66, 33) == 7219428434016265740ULL);
    CHECK_THROWS_AS(binomial(200, 100), std::overflow_error);
}
