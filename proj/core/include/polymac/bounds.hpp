#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "polymac/distributions.hpp"
#include "polymac/rational.hpp"

namespace polymac {

enum class BoundFormula {
    uniform_eq2,      ///< (l+1)/p for uniform keys
    general_eq9,      ///< p * Pmax^{l+1}(delta1) * Pmax^1(delta2)
    simplified_eq10,  ///< p * (delta1 + (l+1)/p) * (delta2 + 1/p), when both first cases hold
    mu_comment,       ///< (mu1 + l + 1)(mu2 + 1)/p with delta_i = mu_i/p
};

/// Short identifier used in reports: "eq2", "eq9", "eq10", "mu".
std::string_view formula_id(BoundFormula f) noexcept;

/// A closed-form upper bound on the forging advantage.
///
/// `raw` is the formula's value and may exceed 1, in which case the bound is
/// vacuous; `effective` is min(raw, 1). When `applicable` is false the
/// formula's preconditions fail and `reason` names the failing condition.
/// An applicable bound may still carry a note in `reason`.
struct AdvantageBound {
    BoundFormula formula;
    Rational raw;
    Rational effective;
    bool applicable = true;
    std::string reason;

    [[nodiscard]] bool vacuous() const { return raw >= 1; }
};

AdvantageBound bound_uniform(std::uint64_t p, std::uint64_t l);
AdvantageBound bound_general(std::uint64_t p, std::uint64_t l, const DistanceValue& delta1,
                             const DistanceValue& delta2);
AdvantageBound bound_simplified(std::uint64_t p, std::uint64_t l, const DistanceValue& delta1,
                                const DistanceValue& delta2);
/// Throws PreconditionError when mu_i / p is not an achievable distance.
AdvantageBound bound_mu(std::uint64_t p, std::uint64_t l, const Rational& mu1, const Rational& mu2);

/// pmax_closed extended to s >= n, where the whole support carries mass 1.
Rational pmax_saturating(std::size_t n, std::size_t s, const DistanceValue& delta);

}  // namespace polymac
