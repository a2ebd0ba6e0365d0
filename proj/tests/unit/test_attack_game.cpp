#include <doctest.h>

#include "oracles.hpp"
#include "polymac/attack_game.hpp"
#include "polymac/bounds.hpp"
#include "polymac/errors.hpp"

using namespace polymac;

namespace {

Message msg(PrimeModulus m, std::vector<std::uint64_t> values) { return Message::from_values(m, values); }

Distribution extremal(std::size_t n, Rational delta) { return extremal_distribution(n, DistanceValue(delta, n)); }

std::vector<Rational> as_vector(const Distribution& d) { return {d.probs().begin(), d.probs().end()}; }

/// Uniform, two extremal skews, a rotated skew and a point mass on Z_p.
std::vector<Distribution> key_family(std::size_t p) {
    const auto n = static_cast<std::int64_t>(p);
    return {Distribution::uniform(p), extremal(p, Rational(1, n)), extremal(p, Rational(2, n)).rotated(1),
            Distribution::point_mass(p, 1)};
}

}  // namespace

TEST_CASE("consistent_keys") {
    const PrimeModulus m(5);
    const MacParams params(m, 2);
    for (const auto& values : testing::all_value_messages(5, 2)) {
        const auto a = msg(m, values);
        for (std::uint64_t t = 0; t < 5; ++t) {
            const Tag t0{FieldElement(m, t)};
            const auto set = consistent_keys(params, a, t0);
            REQUIRE(set.size() == 5);
            for (const auto& key : set.members) {
                REQUIRE(sign(params, key, a) == t0);
                REQUIRE(key.k2 == t0.t - eval_f(params, a, key.k1));
            }
            // The same key cannot sign a to a second tag.
            const auto other = consistent_keys(params, a, Tag{t0.t + FieldElement::one(m)});
            for (const auto& key : set.members)
                for (const auto& k : other.members) REQUIRE_FALSE(key == k);
        }
    }
}

TEST_CASE("forgery_win_prob") {
    const PrimeModulus m(5);
    const MacParams params(m, 2);
    const auto u = Distribution::uniform(5);
    for (const auto& values : testing::all_value_messages(5, 2))
        for (std::uint64_t t = 0; t < 5; ++t)
            REQUIRE(forgery_win_prob(params, u, u, msg(m, values), Tag{FieldElement(m, t)}) == Rational(1, 5));

    SUBCASE("point-mass k2 leaves the k1 mass of the root set") {
        const auto c = Distribution::point_mass(5, 3);
        const auto key1 = extremal(5, Rational(3, 10));
        const auto b = msg(m, {2, 1});
        for (std::uint64_t t = 0; t < 5; ++t) {
            Rational roots;
            for (std::uint64_t k1 = 0; k1 < 5; ++k1) {
                if (eval_f(params, b, FieldElement(m, k1)) == FieldElement(m, t) - FieldElement(m, 3)) roots += key1[k1];
            }
            CHECK(forgery_win_prob(params, key1, c, b, Tag{FieldElement(m, t)}) == roots);
        }
    }
    SUBCASE("uniform k2 makes any k1 skew irrelevant") {
        const MacParams l1(m, 1);
        for (std::uint64_t t = 0; t < 5; ++t)
            CHECK(forgery_win_prob(l1, extremal(5, Rational(1, 5)), u, msg(m, {1}), Tag{FieldElement(m, t)}) ==
                  Rational(1, 5));
    }
    CHECK_THROWS_AS(forgery_win_prob(params, Distribution::uniform(4), u, msg(m, {1}), Tag{FieldElement(m, 0)}),
                    PreconditionError);
}

TEST_CASE("tag probabilities over an observed message sum to one") {
    for (std::uint64_t p : {3u, 5u}) {
        const PrimeModulus m(p);
        const MacParams params(m, 2);
        for (const auto& k1 : key_family(p))
            for (const auto& k2 : key_family(p))
                for (const auto& values : testing::all_value_messages(p, 2)) {
                    Rational sum;
                    for (const auto& x : tag_distribution(params, k1, k2, msg(m, values))) sum += x;
                    REQUIRE(sum == Rational(1));
                }
    }
}

TEST_CASE("exact oblivious advantage") {
    for (std::uint64_t p : {3u, 5u, 7u})
        for (std::size_t l : {1u, 2u}) {
            const MacParams params(PrimeModulus(p), l);
            const auto u = Distribution::uniform(p);
            CHECK(exact_advantage_oblivious(params, u, u, l) == Rational(1, static_cast<std::int64_t>(p)));
        }
    const MacParams params(PrimeModulus(5), 1);
    // Frozen from an independent fractions-based enumeration; a quadratic has at most two roots.
    CHECK(exact_advantage_oblivious(params, Distribution::uniform(5), Distribution::point_mass(5, 2), 1) ==
          Rational(2, 5));
    CHECK(exact_advantage_oblivious(params, extremal(5, Rational(1, 5)), Distribution::uniform(5), 1) ==
          Rational(1, 5));
}

TEST_CASE("exact adaptive advantage") {
    CHECK(exact_advantage_adaptive(MacParams(PrimeModulus(3), 1), Distribution::uniform(3), Distribution::uniform(3),
                                   1) == Rational(1, 3));
    const MacParams p5l2(PrimeModulus(5), 2);
    const auto u5 = Distribution::uniform(5);
    const Rational single = exact_advantage_adaptive(p5l2, u5, u5, 2);
    const Rational full = exact_advantage_adaptive(p5l2, u5, u5, 2, ProbeMode::full_length);
    CHECK(single == Rational(3, 5));
    CHECK(full == Rational(3, 5));
    CHECK(full <= Rational(3, 5));

    CHECK(exact_advantage_adaptive(MacParams(PrimeModulus(5), 1), extremal(5, Rational(1, 5)), u5, 1) ==
          Rational(2, 5));

    const MacParams p7l2(PrimeModulus(7), 2);
    const auto k1 = extremal(7, Rational(2, 7));
    const auto k2 = extremal(7, Rational(1, 7));
    CHECK(exact_advantage_adaptive(p7l2, k1, k2, 2, ProbeMode::full_length) == Rational(40, 49));
    CHECK(exact_advantage_oblivious(p7l2, k1, k2, 2) == Rational(12, 49));

    SUBCASE("a known key is always forged") {
        CHECK(exact_advantage_adaptive(p5l2, Distribution::point_mass(5, 3), Distribution::point_mass(5, 1), 2) ==
              Rational(1));
    }
}

TEST_CASE("enumeration agrees with the brute-force conditional-probability oracle") {
    for (std::uint64_t p : {3u, 5u}) {
        for (std::size_t l : {1u, 2u}) {
            if (p == 5 && l == 2) continue;  // covered by the frozen values above; slow in the oracle
            const MacParams params(PrimeModulus(p), l);
            for (const auto& k1 : key_family(p))
                for (const auto& k2 : key_family(p)) {
                    const auto v1 = as_vector(k1);
                    const auto v2 = as_vector(k2);
                    REQUIRE(exact_advantage_oblivious(params, k1, k2, l) == testing::brute_oblivious(p, l, v1, v2));
                    REQUIRE(exact_advantage_adaptive(params, k1, k2, l) ==
                            testing::brute_adaptive(p, l, v1, v2, true));
                    REQUIRE(exact_advantage_adaptive(params, k1, k2, l, ProbeMode::full_length) ==
                            testing::brute_adaptive(p, l, v1, v2, false));
                }
        }
    }
}

TEST_CASE("advantages respect the general bound and adaptive dominates oblivious") {
    for (std::uint64_t p : {3u, 5u, 7u})
        for (std::size_t l : {1u, 2u}) {
            const MacParams params(PrimeModulus(p), l);
            for (const auto& k1 : key_family(p))
                for (const auto& k2 : key_family(p)) {
                    const auto bound = bound_general(p, l, DistanceValue(distance_to_uniform(k1), p),
                                                     DistanceValue(distance_to_uniform(k2), p));
                    const auto oblivious = exact_advantage_oblivious(params, k1, k2, l);
                    const auto adaptive = exact_advantage_adaptive(params, k1, k2, l);
                    CHECK(oblivious <= bound.effective);
                    CHECK(adaptive <= bound.effective);
                    CHECK(oblivious <= adaptive);
                }
        }
}

TEST_CASE("advantage under a growing k1 skew (observed, not a theorem)") {
    const MacParams params(PrimeModulus(5), 1);
    const auto u = Distribution::uniform(5);
    Rational previous;
    for (std::int64_t j = 0; j <= 8; ++j) {
        const Rational adv = exact_advantage_adaptive(params, extremal(5, Rational(j, 10)), u, 1);
        CHECK(adv >= previous);
        previous = adv;
    }
}

TEST_CASE("threaded enumeration matches the serial result") {
    const MacParams params(PrimeModulus(7), 2);
    const auto k1 = extremal(7, Rational(3, 14));
    const auto k2 = extremal(7, Rational(1, 7)).rotated(3);
    EnumerationOptions serial{.max_len = 2, .probe = ProbeMode::full_length};
    EnumerationOptions threaded = serial;
    threaded.threads = 4;
    const auto a = optimal_adaptive(params, k1, k2, serial);
    const auto b = optimal_adaptive(params, k1, k2, threaded);
    CHECK(a.value == b.value);
    CHECK(a.probe == b.probe);
}

TEST_CASE("enumeration limits") {
    const MacParams params(PrimeModulus(1009), 2);
    const auto u = Distribution::uniform(1009);
    CHECK_THROWS_AS(exact_advantage_oblivious(params, u, u, 2), BudgetExceeded);
    CHECK_THROWS_AS(exact_advantage_oblivious(MacParams(PrimeModulus(5), 1), Distribution::uniform(5),
                                              Distribution::uniform(5), 2),
                    PreconditionError);
}

TEST_CASE("play_game") {
    const PrimeModulus m(5);
    const MacParams params(m, 2);
    const KeyPair key{FieldElement(m, 4), FieldElement(m, 2)};

    SUBCASE("an adversary holding the key wins") {
        const auto cheat = AdversaryStrategy::custom(msg(m, {1}), [&](const Message&, const Tag&) {
            const auto b = msg(m, {3, 3});
            return Forgery{b, sign(params, key, b)};
        });
        const auto transcript = play_game_with_key(params, key, cheat);
        CHECK(transcript.won);
        CHECK(transcript.t0 == sign(params, key, msg(m, {1})));
    }
    SUBCASE("forging on the probe message is refused") {
        const auto replay = AdversaryStrategy::custom(
            msg(m, {1}), [](const Message& a, const Tag& t0) { return Forgery{a, t0}; });
        CHECK_THROWS_AS(play_game_with_key(params, key, replay), PreconditionError);
    }
    SUBCASE("the adaptive plan responds to every tag") {
        const auto u = Distribution::uniform(5);
        const auto plan = optimal_adaptive(params, u, u, {.max_len = 2});
        CHECK(plan.response.size() == 5);
        for (const auto& f : plan.response) CHECK_FALSE(f.message == plan.probe);
        SplitMix64 rng(3);
        const auto t = play_game(params, u, u, AdversaryStrategy::adaptive_optimal(plan), rng);
        CHECK(t.a == plan.probe);
        CHECK_FALSE(t.b == t.a);
    }
}

TEST_CASE("monte carlo") {
    const PrimeModulus m(5);
    const MacParams params(m, 1);
    const auto u = Distribution::uniform(5);

    const auto oblivious = optimal_oblivious(params, u, u, {.max_len = 1});
    const auto one = monte_carlo_advantage(params, u, u, AdversaryStrategy::oblivious(oblivious), 1, 11);
    CHECK((one.point == 0.0 || one.point == 1.0));
    CHECK_THROWS_AS(monte_carlo_advantage(params, u, u, AdversaryStrategy::oblivious(oblivious), 0, 11),
                    PreconditionError);

    SUBCASE("uniform keys, oblivious forger") {
        const auto e = monte_carlo_advantage(params, u, u, AdversaryStrategy::oblivious(oblivious), 100000, 5);
        CHECK(e.ci99.contains(0.2));
        CHECK(e.ci95.low <= e.point);
        CHECK(e.point <= e.ci95.high);
        CHECK(e.ci99.low <= e.ci95.low);
    }
    SUBCASE("skewed keys, adaptive forger") {
        const auto k = extremal(5, Rational(1, 5));
        const auto plan = optimal_adaptive(params, k, k, {.max_len = 1});
        const auto e = monte_carlo_advantage(params, k, k, AdversaryStrategy::adaptive_optimal(plan), 100000, 9);
        CHECK(e.ci99.contains(plan.value.to_double()));
    }
    SUBCASE("p=3 adaptive") {
        const MacParams p3(PrimeModulus(3), 1);
        const auto u3 = Distribution::uniform(3);
        const auto plan = optimal_adaptive(p3, u3, u3, {.max_len = 1});
        const auto e = monte_carlo_advantage(p3, u3, u3, AdversaryStrategy::adaptive_optimal(plan), 100000, 1);
        CHECK(e.ci99.contains(1.0 / 3.0));
    }
    SUBCASE("results do not depend on the thread count") {
        const auto plan = optimal_adaptive(params, u, u, {.max_len = 1});
        const auto s = AdversaryStrategy::adaptive_optimal(plan);
        const auto a = monte_carlo_advantage(params, u, u, s, 20000, 77, 1);
        const auto b = monte_carlo_advantage(params, u, u, s, 20000, 77, 3);
        CHECK(a.wins == b.wins);
    }
}

TEST_CASE("wilson interval") {
    const auto zero = wilson_interval(0, 10, kZ95);
    CHECK(zero.low == 0.0);
    CHECK(zero.high > 0.0);
    const auto all = wilson_interval(10, 10, kZ95);
    CHECK(all.high == 1.0);
    // Textbook value: 10 of 20 at 95% gives roughly [0.2993, 0.7007].
    const auto half = wilson_interval(10, 20, kZ95);
    CHECK(half.low == doctest::Approx(0.2993).epsilon(1e-3));
    CHECK(half.high == doctest::Approx(0.7007).epsilon(1e-3));
    CHECK_THROWS_AS(wilson_interval(1, 0, kZ95), PreconditionError);
}
