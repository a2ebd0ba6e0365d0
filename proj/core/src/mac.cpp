#include "polymac/mac.hpp"

#include <string>

#include "polymac/errors.hpp"

namespace polymac {
namespace {

void require_message(const MacParams& params, const Message& m) {
    if (m.length() == 0) throw PreconditionError("empty message");
    if (m.length() > params.max_len) {
        throw PreconditionError("message length " + std::to_string(m.length()) +
                                " exceeds maximum " + std::to_string(params.max_len));
    }
    if (!(m.elements().front().modulus() == params.modulus)) {
        throw ModulusMismatch("message is not over Z_" + std::to_string(params.modulus.value()));
    }
}

}  // namespace

MacParams::MacParams(PrimeModulus m, std::size_t l, LeadingExponent lead)
    : modulus(m), max_len(l), leading(lead) {
    if (l == 0) throw PreconditionError("maximum message length must be at least 1");
}

Message::Message(std::vector<FieldElement> elements) : elements_(std::move(elements)) {
    for (const auto& e : elements_) {
        if (!(e.modulus() == elements_.front().modulus())) {
            throw ModulusMismatch("message mixes elements of different fields");
        }
    }
}

Message Message::from_values(PrimeModulus m, std::span<const std::uint64_t> values) {
    std::vector<FieldElement> elements;
    elements.reserve(values.size());
    for (auto v : values) elements.emplace_back(m, v);
    return Message(std::move(elements));
}

FieldElement eval_f(const MacParams& params, const Message& m, const FieldElement& k1) {
    require_message(params, m);
    if (params.leading == LeadingExponent::message_length) {
        // k1 * (...(k1 * (k1 + a_1) + a_2)... + a_nu)
        FieldElement acc = FieldElement::one(params.modulus);
        for (const auto& a : m.elements()) acc = acc * k1 + a;
        // acc now holds k1^nu + a_1 k1^(nu-1) + ... + a_nu; one more factor of k1.
        return acc * k1;
    }
    FieldElement acc = FieldElement::zero(params.modulus);
    for (const auto& a : m.elements()) acc = acc * k1 + a;
    return acc * k1 + k1.pow(params.max_len + 1);
}

Tag sign(const MacParams& params, const KeyPair& key, const Message& m) {
    return Tag{eval_f(params, m, key.k1) + key.k2};
}

Verdict verify(const MacParams& params, const KeyPair& key, const Message& m, const Tag& t) {
    return sign(params, key, m) == t ? Verdict::accept : Verdict::reject;
}

std::vector<Message> all_messages(PrimeModulus m, std::size_t max_len) {
    std::vector<Message> out;
    const std::uint64_t p = m.value();
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<std::uint64_t> digits(len, 0);
        bool more = true;
        while (more) {
            out.push_back(Message::from_values(m, digits));
            // Odometer increment; wraps to all zeros after the last message.
            more = false;
            for (std::size_t pos = len; pos-- > 0;) {
                if (++digits[pos] < p) {
                    more = true;
                    break;
                }
                digits[pos] = 0;
            }
        }
    }
    return out;
}

}  // namespace polymac
