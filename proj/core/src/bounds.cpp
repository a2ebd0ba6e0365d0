#include "polymac/bounds.hpp"

#include <algorithm>

#include "polymac/errors.hpp"

namespace polymac {
namespace {

AdvantageBound make_bound(BoundFormula f, Rational raw, bool applicable = true, std::string reason = {}) {
    return {f, raw, std::min(raw, Rational(1)), applicable, std::move(reason)};
}

void require_prime_support(std::uint64_t p, const DistanceValue& d) {
    if (d.support_size() != p) {
        throw PreconditionError("key distance must be measured on a support of size p = " + std::to_string(p));
    }
}

}  // namespace

std::string_view formula_id(BoundFormula f) noexcept {
    switch (f) {
        case BoundFormula::uniform_eq2: return "eq2";
        case BoundFormula::general_eq9: return "eq9";
        case BoundFormula::simplified_eq10: return "eq10";
        case BoundFormula::mu_comment: return "mu";
    }
    return "?";
}

Rational pmax_saturating(std::size_t n, std::size_t s, const DistanceValue& delta) {
    if (s >= n) return 1;
    return pmax_closed(n, s, delta);
}

AdvantageBound bound_uniform(std::uint64_t p, std::uint64_t l) {
    return make_bound(BoundFormula::uniform_eq2,
                      Rational(static_cast<std::int64_t>(l + 1), static_cast<std::int64_t>(p)));
}

AdvantageBound bound_general(std::uint64_t p, std::uint64_t l, const DistanceValue& delta1,
                             const DistanceValue& delta2) {
    require_prime_support(p, delta1);
    require_prime_support(p, delta2);
    const auto n = static_cast<std::size_t>(p);
    const Rational raw = Rational(static_cast<std::int64_t>(p)) *
                         pmax_saturating(n, static_cast<std::size_t>(l + 1), delta1) *
                         pmax_closed(n, 1, delta2);
    std::string note;
    if (l + 1 >= p) note = "l+1 >= p: the k1 prefix factor covers the whole support and is taken as 1";
    return make_bound(BoundFormula::general_eq9, raw, true, std::move(note));
}

AdvantageBound bound_simplified(std::uint64_t p, std::uint64_t l, const DistanceValue& delta1,
                                const DistanceValue& delta2) {
    require_prime_support(p, delta1);
    require_prime_support(p, delta2);
    const Rational pp(static_cast<std::int64_t>(p));
    const Rational lead(static_cast<std::int64_t>(l + 1));
    const Rational raw = pp * (delta1.value() + lead / pp) * (delta2.value() + Rational(1) / pp);

    std::string reason;
    if (lead > pp * (Rational(1) - delta1.value())) {
        reason = "l+1 > p(1-delta1)";
    }
    if (Rational(1) > pp * (Rational(1) - delta2.value())) {
        if (!reason.empty()) reason += "; ";
        reason += "1 > p(1-delta2)";
    }
    const bool applicable = reason.empty();
    return make_bound(BoundFormula::simplified_eq10, raw, applicable, std::move(reason));
}

AdvantageBound bound_mu(std::uint64_t p, std::uint64_t l, const Rational& mu1, const Rational& mu2) {
    const Rational pp(static_cast<std::int64_t>(p));
    // Range validation only; throws for mu_i / p outside [0, 1 - 1/p].
    (void)DistanceValue(mu1 / pp, p);
    (void)DistanceValue(mu2 / pp, p);
    const Rational raw = (mu1 + static_cast<std::int64_t>(l + 1)) * (mu2 + 1) / pp;
    return make_bound(BoundFormula::mu_comment, raw);
}

}  // namespace polymac
