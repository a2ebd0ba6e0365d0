#include <doctest.h>

#include "oracles.hpp"
#include "polymac/bounds.hpp"
#include "polymac/errors.hpp"

using namespace polymac;

namespace {

DistanceValue dv(Rational r, std::uint64_t p) { return DistanceValue(r, p); }

}  // namespace

TEST_CASE("uniform bound") {
    CHECK(bound_uniform(101, 3).raw == Rational(4, 101));
    const auto vacuous = bound_uniform(5, 4);
    CHECK(vacuous.raw == Rational(1));
    CHECK(vacuous.effective == Rational(1));
    CHECK(vacuous.vacuous());
    CHECK(formula_id(vacuous.formula) == "eq2");
}

TEST_CASE("general bound") {
    CHECK(bound_general(5, 1, dv(0, 5), dv(0, 5)).raw == Rational(2, 5));
    const auto skewed = bound_general(5, 1, dv(Rational(1, 5), 5), dv(Rational(1, 5), 5));
    CHECK(skewed.raw == Rational(6, 5));
    CHECK(skewed.effective == Rational(1));
    CHECK(skewed.applicable);
    CHECK(bound_general(11, 2, dv(Rational(1, 11), 11), dv(0, 11)).raw == Rational(4, 11));

    SUBCASE("saturated prefix factor is noted, not thrown") {
        const auto b = bound_general(3, 2, dv(0, 3), dv(0, 3));
        CHECK(b.raw == Rational(1));
        CHECK(b.applicable);
        CHECK_FALSE(b.reason.empty());
    }
    CHECK_THROWS_AS(bound_general(5, 1, dv(0, 7), dv(0, 5)), PreconditionError);
}

TEST_CASE("simplified bound") {
    const auto uniform = bound_simplified(5, 1, dv(0, 5), dv(0, 5));
    CHECK(uniform.applicable);
    CHECK(uniform.raw == Rational(2, 5));

    const auto violated = bound_simplified(5, 3, dv(Rational(1, 4), 5), dv(0, 5));
    CHECK_FALSE(violated.applicable);
    CHECK(violated.reason.find("l+1") != std::string::npos);
}

TEST_CASE("mu bound") {
    CHECK(bound_mu(101, 1, 1, 1).raw == Rational(6, 101));
    for (std::uint64_t l = 1; l <= 5; ++l) CHECK(bound_mu(101, l, 0, 0).raw == bound_uniform(101, l).raw);
    CHECK_THROWS_AS(bound_mu(5, 1, 5, 0), PreconditionError);
    CHECK_THROWS_AS(bound_mu(5, 1, 0, -1), PreconditionError);
}

TEST_CASE("specialisation chain at zero distance") {
    for (std::uint64_t p = 3; p <= 101; ++p) {
        if (!testing::trial_division_prime(p)) continue;
        for (std::uint64_t l = 1; l + 1 < p; ++l) {
            const auto u = bound_uniform(p, l).raw;
            REQUIRE(bound_general(p, l, dv(0, p), dv(0, p)).raw == u);
            REQUIRE(bound_simplified(p, l, dv(0, p), dv(0, p)).raw == u);
            REQUIRE(bound_mu(p, l, 0, 0).raw == u);
        }
    }
}

TEST_CASE("simplified equals general wherever it applies; general is monotone") {
    for (std::uint64_t p : {3u, 5u, 7u, 11u, 13u}) {
        const auto n = static_cast<std::int64_t>(p);
        for (std::uint64_t l = 1; l <= p; ++l) {
            for (std::int64_t i = 0; i <= 2 * (n - 1); ++i) {
                for (std::int64_t j = 0; j <= 2 * (n - 1); ++j) {
                    const auto d1 = dv(Rational(i, 2 * n), p);
                    const auto d2 = dv(Rational(j, 2 * n), p);
                    const auto general = bound_general(p, l, d1, d2);
                    const auto simplified = bound_simplified(p, l, d1, d2);
                    if (simplified.applicable) REQUIRE(simplified.raw == general.raw);
                    if (i > 0) REQUIRE(bound_general(p, l, dv(Rational(i - 1, 2 * n), p), d2).raw <= general.raw);
                    if (j > 0) REQUIRE(bound_general(p, l, d1, dv(Rational(j - 1, 2 * n), p)).raw <= general.raw);
                    if (l > 1) REQUIRE(bound_general(p, l - 1, d1, d2).raw <= general.raw);
                    REQUIRE(general.effective <= Rational(1));
                    REQUIRE(general.effective <= general.raw);
                }
            }
        }
    }
}

TEST_CASE("mu form restates the simplified bound") {
    for (std::uint64_t p : {5u, 7u, 101u}) {
        const auto n = static_cast<std::int64_t>(p);
        for (std::uint64_t l = 1; l + 1 < p; ++l)
            for (std::int64_t m1 = 0; m1 <= 2; ++m1)
                for (std::int64_t m2 = 0; m2 <= 2; ++m2) {
                    const auto simplified = bound_simplified(p, l, dv(Rational(m1, n), p), dv(Rational(m2, n), p));
                    if (simplified.applicable) REQUIRE(bound_mu(p, l, m1, m2).raw == simplified.raw);
                }
    }
}
