#include <doctest.h>

#include <cmath>
#include <optional>

#include "polymac/distributions.hpp"
#include "polymac/errors.hpp"
#include "polymac/random.hpp"

using namespace polymac;

namespace {

Distribution dist(std::initializer_list<Rational> probs) { return Distribution(std::vector<Rational>(probs)); }

}  // namespace

TEST_CASE("uniform") {
    const auto u = Distribution::uniform(4);
    REQUIRE(u.size() == 4);
    for (const auto& x : u.probs()) CHECK(x == Rational(1, 4));
    CHECK(Distribution::uniform(1)[0] == Rational(1));
    CHECK(stat_distance(u, u) == Rational(0));
    CHECK_THROWS_AS(Distribution::uniform(0), PreconditionError);
}

TEST_CASE("distribution validation") {
    CHECK_THROWS_AS(dist({Rational(1, 2), Rational(1, 3)}), PreconditionError);
    CHECK_THROWS_AS(dist({Rational(3, 2), Rational(-1, 2)}), PreconditionError);
    CHECK_THROWS_AS(Distribution(std::vector<Rational>{}), PreconditionError);
}

TEST_CASE("stat_distance") {
    const auto u4 = Distribution::uniform(4);
    CHECK(stat_distance(Distribution::point_mass(4, 0), u4) == Rational(3, 4));
    const auto p = dist({Rational(1, 2), Rational(1, 5), Rational(1, 5), Rational(1, 10), Rational(0)});
    CHECK(stat_distance(p, Distribution::uniform(5)) == Rational(3, 10));
    CHECK(stat_distance(p, p) == Rational(0));
}

TEST_CASE("stat_distance rejects mismatched supports") {
    CHECK_THROWS_AS(stat_distance(Distribution::uniform(3), Distribution::uniform(4)), PreconditionError);
}

TEST_CASE("distance values are range checked") {
    CHECK_NOTHROW(DistanceValue(Rational(3, 4), 4));
    CHECK_THROWS_AS(DistanceValue(Rational(4, 5), 4), PreconditionError);
    CHECK_THROWS_AS(DistanceValue(Rational(-1, 5), 4), PreconditionError);
    CHECK_NOTHROW(DistanceValue(Rational(0), 1));
    CHECK_THROWS_AS(DistanceValue(Rational(1, 2), 1), PreconditionError);
}

TEST_CASE("partition") {
    const auto p = dist({Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 8), Rational(0)});
    // uniform level 1/5
    const auto part = partition(p);
    CHECK(part.above == std::vector<std::size_t>{0, 1});
    CHECK(part.below == std::vector<std::size_t>{2, 3});
    CHECK(part.equal.empty());
    CHECK(part.zero == std::vector<std::size_t>{4});
}

TEST_CASE("pmax_closed") {
    CHECK(pmax_closed(10, 3, DistanceValue(Rational(1, 5), 10)) == Rational(1, 2));
    CHECK(pmax_closed(10, 9, DistanceValue(Rational(1, 5), 10)) == Rational(1));
    CHECK(pmax_closed(10, 8, DistanceValue(Rational(1, 5), 10)) == Rational(1));  // boundary s = n(1-delta)
    CHECK(pmax_closed(10, 3, DistanceValue(Rational(0), 10)) == Rational(3, 10));

    CHECK_THROWS_AS(pmax_closed(10, 0, DistanceValue(Rational(0), 10)), PreconditionError);
    CHECK_THROWS_AS(pmax_closed(10, 10, DistanceValue(Rational(0), 10)), PreconditionError);
    CHECK_THROWS_AS(pmax_closed(10, 3, DistanceValue(Rational(0), 9)), PreconditionError);

    SUBCASE("non-decreasing in s and delta, never above 1") {
        for (std::size_t n = 2; n <= 9; ++n) {
            for (std::int64_t j = 0; j <= 4 * static_cast<std::int64_t>(n - 1); ++j) {
                const DistanceValue d(Rational(j, 4 * static_cast<std::int64_t>(n)), n);
                Rational previous;
                for (std::size_t s = 1; s < n; ++s) {
                    const Rational v = pmax_closed(n, s, d);
                    CHECK(v <= Rational(1));
                    CHECK(v >= previous);
                    previous = v;
                    if (j > 0) {
                        const DistanceValue smaller(Rational(j - 1, 4 * static_cast<std::int64_t>(n)), n);
                        CHECK(pmax_closed(n, s, smaller) <= v);
                    }
                }
            }
        }
    }
}

TEST_CASE("extremal_distribution") {
    CHECK(extremal_distribution(5, DistanceValue(Rational(3, 10), 5)) ==
          dist({Rational(1, 2), Rational(1, 5), Rational(1, 5), Rational(1, 10), Rational(0)}));
    CHECK(extremal_distribution(5, DistanceValue(Rational(0), 5)) == Distribution::uniform(5));
    CHECK(extremal_distribution(5, DistanceValue(Rational(2, 5), 5)) ==
          dist({Rational(3, 5), Rational(1, 5), Rational(1, 5), Rational(0), Rational(0)}));
    CHECK(extremal_distribution(5, DistanceValue(Rational(4, 5), 5)) == Distribution::point_mass(5, 0));
    CHECK(extremal_distribution(1, DistanceValue(Rational(0), 1)) == Distribution::uniform(1));

    SUBCASE("sits at the requested distance and attains pmax for every s") {
        for (std::size_t n = 2; n <= 8; ++n) {
            const auto nn = static_cast<std::int64_t>(n);
            for (std::int64_t j = 0; j <= 12 * (nn - 1); ++j) {
                const DistanceValue d(Rational(j, 12 * nn), n);
                const auto e = extremal_distribution(n, d);  // constructor checks sum == 1
                REQUIRE(distance_to_uniform(e) == d.value());
                Rational prefix;
                for (std::size_t s = 1; s < n; ++s) {
                    prefix += e[s - 1];
                    REQUIRE(prefix == pmax_closed(n, s, d));
                }
                const auto part = partition(e);
                CHECK(part.above.size() <= 1);
                CHECK(part.below.size() <= 1);
            }
        }
    }
}

TEST_CASE("pmax_oracle") {
    CHECK(pmax_oracle(4, 2, DistanceValue(Rational(1, 4), 4), 8) == Rational(3, 4));
    CHECK(pmax_oracle(3, 1, DistanceValue(Rational(0), 3), 3) == Rational(1, 3));
    CHECK_THROWS_AS(pmax_oracle(3, 1, DistanceValue(Rational(1, 7), 3), 3), NoGridDistribution);
    CHECK_THROWS_AS(pmax_oracle(3, 3, DistanceValue(Rational(0), 3), 3), PreconditionError);

    SUBCASE("at_most filter is at least the exact filter") {
        const DistanceValue d(Rational(1, 4), 4);
        CHECK(pmax_oracle(4, 2, d, 8, DistanceFilter::at_most) == pmax_oracle(4, 2, d, 8));
    }

    SUBCASE("never exceeds the closed form") {
        for (std::size_t n = 2; n <= 4; ++n)
            for (std::uint64_t g = 1; g <= 12; ++g)
                for (std::int64_t j = 0; j <= 2 * static_cast<std::int64_t>(n * g); ++j) {
                    const Rational delta(j, 2 * static_cast<std::int64_t>(n * g));
                    if (delta > Rational(1) - Rational(1, static_cast<std::int64_t>(n))) break;
                    const DistanceValue d(delta, n);
                    for (std::size_t s = 1; s < n; ++s) {
                        std::optional<Rational> oracle;
                        try {
                            oracle = pmax_oracle(n, s, d, g);
                        } catch (const NoGridDistribution&) {
                        }
                        if (oracle) CHECK(*oracle <= pmax_closed(n, s, d));
                    }
                }
    }
}

TEST_CASE("closed form dominates every grid distribution (n <= 5, grid <= 24)") {
    std::size_t checked = 0;
    for (std::size_t n = 2; n <= 5; ++n) {
        for (std::uint64_t g = 1; g <= 24; ++g) {
            for (const auto& p : grid_distributions(n, g)) {
                const DistanceValue d(distance_to_uniform(p), n);
                const auto sorted = t_sort(p);
                Rational prefix;
                for (std::size_t s = 1; s < n; ++s) {
                    prefix += sorted[s - 1];
                    REQUIRE(prefix <= pmax_closed(n, s, d));
                }
                ++checked;
            }
        }
    }
    CHECK(checked > 100000);
}

TEST_CASE("grid enumeration") {
    CHECK(grid_distributions(3, 4).size() == 15);  // C(6, 2)
    std::size_t count = 0;
    for_each_composition(4, 6, [&](std::span<const std::uint64_t> parts) {
        std::uint64_t sum = 0;
        for (auto c : parts) sum += c;
        CHECK(sum == 6);
        ++count;
    });
    CHECK(count == 84);  // C(9, 3)
}

TEST_CASE("rotation") {
    const auto p = dist({Rational(1, 2), Rational(1, 3), Rational(1, 6)});
    CHECK(p.rotated(1) == dist({Rational(1, 6), Rational(1, 2), Rational(1, 3)}));
    CHECK(distance_to_uniform(p.rotated(2)) == distance_to_uniform(p));
}

TEST_CASE("sampling") {
    SplitMix64 rng(7);
    const auto point = Distribution::point_mass(5, 2);
    for (int i = 0; i < 1000; ++i) REQUIRE(sample(point, rng) == 2);

    constexpr int kDraws = 100000;
    auto within_4_sigma = [](int hits, double prob) {
        const double sigma = std::sqrt(kDraws * prob * (1 - prob));
        return std::abs(hits - kDraws * prob) <= 4 * sigma;
    };

    SUBCASE("uniform frequencies") {
        const Sampler sampler(Distribution::uniform(4));
        std::vector<int> hits(4, 0);
        for (int i = 0; i < kDraws; ++i) ++hits[sampler(rng)];
        for (int h : hits) CHECK(within_4_sigma(h, 0.25));
    }
    SUBCASE("extremal head frequency") {
        const Sampler sampler(extremal_distribution(5, DistanceValue(Rational(3, 10), 5)));
        int head = 0;
        int last = 0;
        for (int i = 0; i < kDraws; ++i) {
            const auto k = sampler(rng);
            head += k == 0;
            last += k == 4;
        }
        CHECK(within_4_sigma(head, 0.5));
        CHECK(last == 0);
    }
    SUBCASE("deterministic for a fixed seed") {
        SplitMix64 a(99), b(99);
        const auto d = extremal_distribution(7, DistanceValue(Rational(2, 7), 7));
        for (int i = 0; i < 100; ++i) REQUIRE(sample(d, a) == sample(d, b));
    }
}
