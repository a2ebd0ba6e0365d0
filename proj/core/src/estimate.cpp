#include "polymac/estimate.hpp"

#include <algorithm>
#include <cmath>

#include "polymac/errors.hpp"

namespace polymac {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) throw PreconditionError("wilson interval needs at least one trial");
    if (successes > trials) throw PreconditionError("more successes than trials");
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    // Rounding can push an endpoint past the point estimate at 0 or 1 successes.
    return {std::clamp(std::min(centre - half, phat), 0.0, 1.0),
            std::clamp(std::max(centre + half, phat), 0.0, 1.0)};
}

AdvantageEstimate AdvantageEstimate::from_counts(std::uint64_t wins, std::uint64_t trials) {
    AdvantageEstimate e;
    e.wins = wins;
    e.trials = trials;
    e.point = static_cast<double>(wins) / static_cast<double>(trials);
    e.ci95 = wilson_interval(wins, trials, kZ95);
    e.ci99 = wilson_interval(wins, trials, kZ99);
    return e;
}

}  // namespace polymac
