#include "polymac/prime_field.hpp"

#include <array>
#include <ostream>
#include <string>

#include "polymac/errors.hpp"

namespace polymac {
namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (e > 0) {
        if (e & 1) result = mulmod64(result, base, m);
        base = mulmod64(base, base, m);
        e >>= 1;
    }
    return result;
}

void require_same(const FieldElement& a, const FieldElement& b) {
    if (!(a.modulus() == b.modulus())) {
        throw ModulusMismatch("field elements from Z_" + std::to_string(a.modulus().value()) +
                              " and Z_" + std::to_string(b.modulus().value()));
    }
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    // These witnesses make Miller-Rabin deterministic below 3.3e24.
    constexpr std::array<std::uint64_t, 12> witnesses{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (auto w : witnesses) {
        if (n % w == 0) return n == w;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (auto w : witnesses) {
        std::uint64_t x = powmod64(w, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PrimeModulus::PrimeModulus(std::uint64_t p) : p_(p) {
    if (p >= kMaxExclusive) {
        throw PreconditionError("modulus " + std::to_string(p) + " is not below 2^31");
    }
    if (!is_prime(p)) {
        throw PreconditionError("modulus " + std::to_string(p) + " is not prime");
    }
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    require_same(a, b);
    const std::uint64_t p = a.modulus_.value();
    std::uint64_t s = a.value_ + b.value_;
    if (s >= p) s -= p;
    return {a.modulus_, s};
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    require_same(a, b);
    const std::uint64_t p = a.modulus_.value();
    return {a.modulus_, a.value_ >= b.value_ ? a.value_ - b.value_ : a.value_ + p - b.value_};
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    require_same(a, b);
    return {a.modulus_, a.value_ * b.value_ % a.modulus_.value()};
}

FieldElement FieldElement::operator-() const noexcept {
    return {modulus_, value_ == 0 ? 0 : modulus_.value() - value_};
}

FieldElement FieldElement::pow(std::uint64_t exponent) const noexcept {
    return {modulus_, powmod64(value_, exponent, modulus_.value())};
}

std::ostream& operator<<(std::ostream& os, const FieldElement& x) {
    return os << x.value();
}

}  // namespace polymac
