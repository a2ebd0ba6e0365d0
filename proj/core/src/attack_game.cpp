#include "polymac/attack_game.hpp"

#include <algorithm>
#include <string>
#include <thread>

#include "polymac/errors.hpp"

namespace polymac {
namespace {

void require_key_support(const MacParams& params, const Distribution& key1, const Distribution& key2) {
    const std::uint64_t p = params.modulus.value();
    if (key1.size() != p || key2.size() != p) {
        throw PreconditionError("key distributions must have support size p = " + std::to_string(p));
    }
}

std::uint64_t message_count(std::uint64_t p, std::size_t max_len, std::uint64_t budget) {
    std::uint64_t total = 0;
    std::uint64_t layer = 1;
    for (std::size_t len = 1; len <= max_len; ++len) {
        layer *= p;
        total += layer;
        if (total > budget) {
            throw BudgetExceeded("enumerating " + std::to_string(max_len) + "-element messages over Z_" +
                                 std::to_string(p) + " exceeds the budget of " + std::to_string(budget) +
                                 " messages; lower p or l");
        }
    }
    return total;
}

/// Key distributions as integer weights over a shared scale, plus the
/// f(m, .) table of every candidate message.
struct Tables {
    std::uint64_t p;
    std::vector<std::uint64_t> w1;
    std::vector<std::uint64_t> w2;
    std::int64_t scale;  // common denominator of every joint key probability
    std::vector<Message> messages;
    std::vector<std::vector<std::uint32_t>> f;

    Tables(const MacParams& params, const Distribution& key1, const Distribution& key2,
           const EnumerationOptions& options)
        : p(params.modulus.value()), w1(key1.integer_weights()), w2(key2.integer_weights()) {
        require_key_support(params, key1, key2);
        if (options.max_len == 0 || options.max_len > params.max_len) {
            throw PreconditionError("enumeration length must be within [1, l]");
        }
        message_count(p, options.max_len, options.message_budget);
        const unsigned __int128 s =
            static_cast<unsigned __int128>(key1.common_denominator()) * key2.common_denominator();
        if (s > static_cast<unsigned __int128>(INT64_MAX)) {
            throw std::overflow_error("joint key denominator overflows 63 bits");
        }
        scale = static_cast<std::int64_t>(s);
        messages = all_messages(params.modulus, options.max_len);
        f.reserve(messages.size());
        for (const auto& m : messages) {
            std::vector<std::uint32_t> row(p);
            for (std::uint64_t k1 = 0; k1 < p; ++k1) {
                row[k1] = static_cast<std::uint32_t>(eval_f(params, m, FieldElement(params.modulus, k1)).value());
            }
            f.push_back(std::move(row));
        }
    }
};

struct ProbeResult {
    std::uint64_t value = 0;
    std::vector<std::size_t> best_b;
    std::vector<std::uint64_t> best_t1;
};

ProbeResult evaluate_probe(const Tables& tab, std::size_t a) {
    const std::uint64_t p = tab.p;
    ProbeResult r;
    std::vector<std::uint64_t> best(p, 0);
    r.best_b.assign(p, a == 0 ? 1 : 0);
    r.best_t1.assign(p, 0);
    std::vector<std::uint64_t> joint(p * p);
    const auto& fa = tab.f[a];
    for (std::size_t b = 0; b < tab.messages.size(); ++b) {
        if (b == a) continue;
        const auto& fb = tab.f[b];
        std::fill(joint.begin(), joint.end(), 0);
        for (std::uint64_t k1 = 0; k1 < p; ++k1) {
            const std::uint64_t w1 = tab.w1[k1];
            if (w1 == 0) continue;
            const std::uint64_t shift = (fb[k1] + p - fa[k1]) % p;
            for (std::uint64_t k2 = 0; k2 < p; ++k2) {
                const std::uint64_t w2 = tab.w2[k2];
                if (w2 == 0) continue;
                const std::uint64_t t0 = (fa[k1] + k2) % p;
                const std::uint64_t t1 = (t0 + shift) % p;
                joint[t0 * p + t1] += w1 * w2;
            }
        }
        for (std::uint64_t t0 = 0; t0 < p; ++t0) {
            for (std::uint64_t t1 = 0; t1 < p; ++t1) {
                if (joint[t0 * p + t1] > best[t0]) {
                    best[t0] = joint[t0 * p + t1];
                    r.best_b[t0] = b;
                    r.best_t1[t0] = t1;
                }
            }
        }
    }
    for (auto v : best) r.value += v;
    return r;
}

}  // namespace

KeyConstraintSet consistent_keys(const MacParams& params, const Message& a, const Tag& t0) {
    KeyConstraintSet set;
    const std::uint64_t p = params.modulus.value();
    for (std::uint64_t k1 = 0; k1 < p; ++k1) {
        const FieldElement x(params.modulus, k1);
        set.members.push_back({x, t0.t - eval_f(params, a, x)});
    }
    return set;
}

Rational forgery_win_prob(const MacParams& params, const Distribution& key1, const Distribution& key2,
                          const Message& b, const Tag& t1) {
    require_key_support(params, key1, key2);
    Rational total;
    for (std::uint64_t k1 = 0; k1 < params.modulus.value(); ++k1) {
        if (key1[k1] == 0) continue;
        const FieldElement needed = t1.t - eval_f(params, b, FieldElement(params.modulus, k1));
        total += key1[k1] * key2[needed.value()];
    }
    return total;
}

std::vector<Rational> tag_distribution(const MacParams& params, const Distribution& key1,
                                       const Distribution& key2, const Message& a) {
    std::vector<Rational> out;
    out.reserve(params.modulus.value());
    for (std::uint64_t t = 0; t < params.modulus.value(); ++t) {
        out.push_back(forgery_win_prob(params, key1, key2, a, Tag{FieldElement(params.modulus, t)}));
    }
    return out;
}

ObliviousPlan optimal_oblivious(const MacParams& params, const Distribution& key1,
                                const Distribution& key2, const EnumerationOptions& options) {
    const Tables tab(params, key1, key2, options);
    const std::uint64_t p = tab.p;
    std::uint64_t best = 0;
    std::size_t best_b = 0;
    std::uint64_t best_t1 = 0;
    bool found = false;
    for (std::size_t b = 0; b < tab.messages.size(); ++b) {
        for (std::uint64_t t1 = 0; t1 < p; ++t1) {
            std::uint64_t score = 0;
            for (std::uint64_t k1 = 0; k1 < p; ++k1) {
                score += tab.w1[k1] * tab.w2[(t1 + p - tab.f[b][k1]) % p];
            }
            if (!found || score > best) {
                found = true;
                best = score;
                best_b = b;
                best_t1 = t1;
            }
        }
    }
    // Any other message will do as the probe; p >= 2 guarantees one exists.
    const std::size_t probe = best_b == 0 ? 1 : 0;
    return {Rational(static_cast<std::int64_t>(best), tab.scale), tab.messages[probe],
            Forgery{tab.messages[best_b], Tag{FieldElement(params.modulus, best_t1)}}};
}

AdaptivePlan optimal_adaptive(const MacParams& params, const Distribution& key1,
                              const Distribution& key2, const EnumerationOptions& options) {
    const Tables tab(params, key1, key2, options);
    std::size_t probe_count = tab.messages.size();
    if (options.probe == ProbeMode::single_element) probe_count = static_cast<std::size_t>(tab.p);

    std::vector<ProbeResult> results(probe_count);
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(probe_count)));
    if (threads == 1) {
        for (std::size_t a = 0; a < probe_count; ++a) results[a] = evaluate_probe(tab, a);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t a = t; a < probe_count; a += threads) results[a] = evaluate_probe(tab, a);
            });
        }
    }

    std::size_t best_a = 0;
    for (std::size_t a = 1; a < probe_count; ++a) {
        if (results[a].value > results[best_a].value) best_a = a;
    }
    const ProbeResult& win = results[best_a];
    std::vector<Forgery> response;
    response.reserve(tab.p);
    for (std::uint64_t t0 = 0; t0 < tab.p; ++t0) {
        response.push_back(
            Forgery{tab.messages[win.best_b[t0]], Tag{FieldElement(params.modulus, win.best_t1[t0])}});
    }
    return {Rational(static_cast<std::int64_t>(win.value), tab.scale), tab.messages[best_a],
            std::move(response)};
}

Rational exact_advantage_oblivious(const MacParams& params, const Distribution& key1,
                                   const Distribution& key2, std::size_t max_len) {
    return optimal_oblivious(params, key1, key2, EnumerationOptions{.max_len = max_len}).value;
}

Rational exact_advantage_adaptive(const MacParams& params, const Distribution& key1,
                                  const Distribution& key2, std::size_t max_len, ProbeMode probe) {
    return optimal_adaptive(params, key1, key2, EnumerationOptions{.max_len = max_len, .probe = probe}).value;
}

AdversaryStrategy AdversaryStrategy::oblivious(const ObliviousPlan& plan) {
    return {Kind::oblivious, plan.probe,
            [forgery = plan.forgery](const Message&, const Tag&) { return forgery; }};
}

AdversaryStrategy AdversaryStrategy::adaptive_optimal(const AdaptivePlan& plan) {
    return {Kind::adaptive_optimal, plan.probe,
            [response = plan.response](const Message&, const Tag& t0) { return response.at(t0.t.value()); }};
}

AdversaryStrategy AdversaryStrategy::custom(Message probe, Responder responder) {
    return {Kind::custom, std::move(probe), std::move(responder)};
}

Challenger::Challenger(PrimeModulus modulus, const Distribution& key1, const Distribution& key2)
    : modulus_(modulus), first_(key1), second_(key2) {
    if (key1.size() != modulus.value() || key2.size() != modulus.value()) {
        throw PreconditionError("key distributions must have support size p = " +
                                std::to_string(modulus.value()));
    }
}

GameTranscript play_game_with_key(const MacParams& params, const KeyPair& key,
                                  const AdversaryStrategy& strategy) {
    const Message& a = strategy.probe();
    const Tag t0 = sign(params, key, a);
    Forgery forgery = strategy.respond(t0);
    if (forgery.message == a) throw PreconditionError("forged message must differ from the probe");
    const bool won = verify(params, key, forgery.message, forgery.tag) == Verdict::accept;
    return {a, t0, std::move(forgery.message), forgery.tag, won};
}

GameTranscript play_game(const MacParams& params, const Challenger& challenger,
                         const AdversaryStrategy& strategy, SplitMix64& rng) {
    return play_game_with_key(params, challenger.draw(rng), strategy);
}

GameTranscript play_game(const MacParams& params, const Distribution& key1, const Distribution& key2,
                         const AdversaryStrategy& strategy, SplitMix64& rng) {
    return play_game(params, Challenger(params.modulus, key1, key2), strategy, rng);
}

AdvantageEstimate monte_carlo_advantage(const MacParams& params, const Distribution& key1,
                                        const Distribution& key2, const AdversaryStrategy& strategy,
                                        std::uint64_t trials, std::uint64_t seed, unsigned threads) {
    if (trials == 0) throw PreconditionError("monte carlo needs at least one trial");
    const Challenger challenger(params.modulus, key1, key2);
    threads = std::max(1u, threads);
    std::vector<std::uint64_t> wins(threads, 0);
    auto run = [&](unsigned worker) {
        std::uint64_t local = 0;
        for (std::uint64_t i = worker; i < trials; i += threads) {
            SplitMix64 rng = SplitMix64::for_stream(seed, i);
            if (play_game(params, challenger, strategy, rng).won) ++local;
        }
        wins[worker] = local;
    };
    if (threads == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run, t);
    }
    std::uint64_t total = 0;
    for (auto w : wins) total += w;
    return AdvantageEstimate::from_counts(total, trials);
}

}  // namespace polymac
