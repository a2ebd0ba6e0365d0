#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>

namespace polymac {

/// Deterministic primality test, exact for every 64-bit input.
bool is_prime(std::uint64_t n) noexcept;

/// The modulus of Z_p. Construction rejects composites and p >= 2^31, so
/// products of two canonical residues always fit in 64 bits.
class PrimeModulus {
public:
    static constexpr std::uint64_t kMaxExclusive = std::uint64_t{1} << 31;

    explicit PrimeModulus(std::uint64_t p);

    [[nodiscard]] std::uint64_t value() const noexcept { return p_; }

    friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

private:
    std::uint64_t p_;
};

/// An element of Z_p held as its canonical representative in [0, p).
class FieldElement {
public:
    FieldElement(PrimeModulus modulus, std::uint64_t value) noexcept
        : modulus_(modulus), value_(value % modulus.value()) {}

    static FieldElement zero(PrimeModulus m) noexcept { return {m, 0}; }
    static FieldElement one(PrimeModulus m) noexcept { return {m, 1}; }

    [[nodiscard]] std::uint64_t value() const noexcept { return value_; }
    [[nodiscard]] PrimeModulus modulus() const noexcept { return modulus_; }

    // All binary operators throw ModulusMismatch when the moduli differ.
    friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
    FieldElement operator-() const noexcept;

    FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
    FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
    FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

    /// Square-and-multiply. 0^0 is 1.
    [[nodiscard]] FieldElement pow(std::uint64_t exponent) const noexcept;

    friend bool operator==(const FieldElement&, const FieldElement&) = default;

private:
    PrimeModulus modulus_;
    std::uint64_t value_;
};

std::ostream& operator<<(std::ostream& os, const FieldElement& x);

}  // namespace polymac
