#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "polymac/distributions.hpp"
#include "polymac/estimate.hpp"
#include "polymac/mac.hpp"
#include "polymac/random.hpp"
#include "polymac/rational.hpp"

namespace polymac {

/// Keys (k1, k2) under which message a signs to t0.
struct KeyConstraintSet {
    std::vector<KeyPair> members;

    [[nodiscard]] std::size_t size() const noexcept { return members.size(); }
};

KeyConstraintSet consistent_keys(const MacParams& params, const Message& a, const Tag& t0);

/// Pr[tag(b) = t1] for independent k1 ~ key1, k2 ~ key2:
/// the sum over k1 of key1(k1) * key2(t1 - f(b, k1)).
Rational forgery_win_prob(const MacParams& params, const Distribution& key1, const Distribution& key2,
                          const Message& b, const Tag& t1);

/// Distribution of the tag of a, indexed by tag value.
std::vector<Rational> tag_distribution(const MacParams& params, const Distribution& key1,
                                       const Distribution& key2, const Message& a);

enum class ProbeMode {
    single_element,  ///< probe messages of length 1 only
    full_length,     ///< every message of length 1..max_len
};

struct EnumerationOptions {
    static constexpr std::uint64_t kDefaultBudget = 1'000'000;

    std::size_t max_len = 1;
    ProbeMode probe = ProbeMode::single_element;
    std::uint64_t message_budget = kDefaultBudget;
    unsigned threads = 1;
};

struct Forgery {
    Message message;
    Tag tag;
};

/// The best forgery that ignores the observed tag, with its exact success probability.
struct ObliviousPlan {
    Rational value;
    Message probe;
    Forgery forgery;
};

/// The optimal adaptive adversary: one probe message and, for each possible
/// observed tag t0 (the vector index), the forgery maximizing the conditional
/// win probability given the consistent-key set of (probe, t0).
struct AdaptivePlan {
    Rational value;
    Message probe;
    std::vector<Forgery> response;
};

ObliviousPlan optimal_oblivious(const MacParams& params, const Distribution& key1,
                                const Distribution& key2, const EnumerationOptions& options);
AdaptivePlan optimal_adaptive(const MacParams& params, const Distribution& key1,
                              const Distribution& key2, const EnumerationOptions& options);

Rational exact_advantage_oblivious(const MacParams& params, const Distribution& key1,
                                   const Distribution& key2, std::size_t max_len);
Rational exact_advantage_adaptive(const MacParams& params, const Distribution& key1,
                                  const Distribution& key2, std::size_t max_len,
                                  ProbeMode probe = ProbeMode::single_element);

class AdversaryStrategy {
public:
    enum class Kind { oblivious, adaptive_optimal, custom };
    using Responder = std::function<Forgery(const Message& probe, const Tag& t0)>;

    static AdversaryStrategy oblivious(const ObliviousPlan& plan);
    static AdversaryStrategy adaptive_optimal(const AdaptivePlan& plan);
    static AdversaryStrategy custom(Message probe, Responder responder);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] const Message& probe() const noexcept { return probe_; }
    [[nodiscard]] Forgery respond(const Tag& t0) const { return responder_(probe_, t0); }

private:
    AdversaryStrategy(Kind kind, Message probe, Responder responder)
        : kind_(kind), probe_(std::move(probe)), responder_(std::move(responder)) {}

    Kind kind_;
    Message probe_;
    Responder responder_;
};

/// Draws (k1, k2) independently from the two key distributions.
class Challenger {
public:
    Challenger(PrimeModulus modulus, const Distribution& key1, const Distribution& key2);

    KeyPair draw(SplitMix64& rng) const {
        return {FieldElement(modulus_, first_(rng)), FieldElement(modulus_, second_(rng))};
    }

private:
    PrimeModulus modulus_;
    Sampler first_;
    Sampler second_;
};

struct GameTranscript {
    Message a;
    Tag t0;
    Message b;
    Tag t1;
    bool won = false;
};

/// Steps 2 and 3 of the game against a known key. Throws PreconditionError
/// when the strategy forges on its own probe message.
GameTranscript play_game_with_key(const MacParams& params, const KeyPair& key,
                                  const AdversaryStrategy& strategy);

GameTranscript play_game(const MacParams& params, const Challenger& challenger,
                         const AdversaryStrategy& strategy, SplitMix64& rng);
GameTranscript play_game(const MacParams& params, const Distribution& key1, const Distribution& key2,
                         const AdversaryStrategy& strategy, SplitMix64& rng);

/// Win frequency over `trials` games. Trial i uses SplitMix64::for_stream(seed, i),
/// so the result does not depend on `threads`.
AdvantageEstimate monte_carlo_advantage(const MacParams& params, const Distribution& key1,
                                        const Distribution& key2, const AdversaryStrategy& strategy,
                                        std::uint64_t trials, std::uint64_t seed, unsigned threads = 1);

}  // namespace polymac
