#pragma once

#include <cstdint>
#include <string_view>

namespace polymac {

struct Interval {
    double low = 0.0;
    double high = 1.0;

    [[nodiscard]] bool contains(double x) const noexcept { return low <= x && x <= high; }
};

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

/// Wilson score interval for a binomial proportion, clamped to [0, 1].
/// Requires trials > 0.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z);

/// A frequency estimate of an advantage with 95% and 99% Wilson intervals.
struct AdvantageEstimate {
    static constexpr std::string_view method = "wilson";

    double point = 0.0;
    Interval ci95;
    Interval ci99;
    std::uint64_t wins = 0;
    std::uint64_t trials = 0;

    static AdvantageEstimate from_counts(std::uint64_t wins, std::uint64_t trials);
};

}  // namespace polymac
