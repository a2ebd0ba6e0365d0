#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "polymac/prime_field.hpp"

namespace polymac {

/// Which power of k1 leads the tag polynomial.
enum class LeadingExponent {
    message_length,  ///< k1^(nu+1) for a message of length nu (default)
    max_length,      ///< k1^(l+1) regardless of the message length
};

struct MacParams {
    PrimeModulus modulus;
    std::size_t max_len;  ///< l, the longest admissible message
    LeadingExponent leading = LeadingExponent::message_length;

    MacParams(PrimeModulus m, std::size_t l, LeadingExponent lead = LeadingExponent::message_length);
};

/// A message (a_1, ..., a_nu) of field elements.
class Message {
public:
    explicit Message(std::vector<FieldElement> elements);
    static Message from_values(PrimeModulus m, std::span<const std::uint64_t> values);

    [[nodiscard]] std::size_t length() const noexcept { return elements_.size(); }
    [[nodiscard]] std::span<const FieldElement> elements() const noexcept { return elements_; }

    friend bool operator==(const Message&, const Message&) = default;

private:
    std::vector<FieldElement> elements_;
};

struct KeyPair {
    FieldElement k1;
    FieldElement k2;

    friend bool operator==(const KeyPair&, const KeyPair&) = default;
};

struct Tag {
    FieldElement t;

    friend bool operator==(const Tag&, const Tag&) = default;
};

enum class Verdict { accept, reject };

/// f(m, k1) = k1^(nu+1) + a_1 k1^nu + ... + a_nu k1, by Horner's scheme.
/// Throws PreconditionError for an empty message or one longer than l.
FieldElement eval_f(const MacParams& params, const Message& m, const FieldElement& k1);

/// Tag f(m, k1) + k2. Deterministic.
Tag sign(const MacParams& params, const KeyPair& key, const Message& m);

Verdict verify(const MacParams& params, const KeyPair& key, const Message& m, const Tag& t);

/// Every message of length 1..max_len in length-then-lexicographic order.
std::vector<Message> all_messages(PrimeModulus m, std::size_t max_len);

}  // namespace polymac
