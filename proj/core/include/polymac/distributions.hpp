#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "polymac/random.hpp"
#include "polymac/rational.hpp"

namespace polymac {

/// A probability distribution on the finite support {0, ..., n-1}, held exactly.
class Distribution {
public:
    /// Validates non-negativity, n >= 1 and a sum of exactly 1.
    explicit Distribution(std::vector<Rational> probs);

    static Distribution uniform(std::size_t n);
    static Distribution point_mass(std::size_t n, std::size_t index);

    [[nodiscard]] std::size_t size() const noexcept { return probs_.size(); }
    [[nodiscard]] const Rational& operator[](std::size_t i) const { return probs_[i]; }
    [[nodiscard]] std::span<const Rational> probs() const noexcept { return probs_; }

    /// The least common denominator of all entries.
    [[nodiscard]] std::uint64_t common_denominator() const;
    /// Entries scaled by common_denominator(); they sum to it exactly.
    [[nodiscard]] std::vector<std::uint64_t> integer_weights() const;

    /// Entry i of the result is entry (i - shift) mod n of this one.
    [[nodiscard]] Distribution rotated(std::size_t shift) const;

    friend bool operator==(const Distribution&, const Distribution&) = default;

private:
    std::vector<Rational> probs_;
};

/// A distance-to-uniform value tied to its support size; 0 <= delta <= 1 - 1/n.
class DistanceValue {
public:
    DistanceValue(Rational delta, std::size_t support_size);

    [[nodiscard]] const Rational& value() const noexcept { return delta_; }
    [[nodiscard]] std::size_t support_size() const noexcept { return n_; }

private:
    Rational delta_;
    std::size_t n_;
};

/// Indices classified against the uniform level 1/n.
struct SupportPartition {
    std::vector<std::size_t> above;   // P(i) > 1/n
    std::vector<std::size_t> below;   // 0 < P(i) < 1/n
    std::vector<std::size_t> equal;   // P(i) = 1/n
    std::vector<std::size_t> zero;    // P(i) = 0
};

SupportPartition partition(const Distribution& p);

/// Half the L1 distance. Throws PreconditionError on a support-size mismatch.
Rational stat_distance(const Distribution& p, const Distribution& q);
Rational distance_to_uniform(const Distribution& p);

/// Largest mass any s support points can carry at distance delta from
/// uniform: delta + s/n if s <= n(1 - delta), else 1. Requires 1 <= s < n.
Rational pmax_closed(std::size_t n, std::size_t s, const DistanceValue& delta);

/// The distribution attaining pmax_closed for every s simultaneously:
/// (delta + 1/n, 1/n, ..., 1/n, (1 - frac(delta n))/n, 0, ..., 0) with the
/// remainder at position n - floor(delta n) - 1.
Distribution extremal_distribution(std::size_t n, const DistanceValue& delta);

// Distance-preserving rewrites used to reach the extremal form.

/// Sort non-increasing; ties keep their original order.
Distribution t_sort(const Distribution& p);
/// Fold the second-largest above-uniform entry's excess onto the largest.
/// Requires at least two above-uniform entries.
Distribution t_plus(const Distribution& p);
/// Merge the two positive below-uniform entries with the largest deficits,
/// then sort. Requires at least two such entries.
Distribution t_minus(const Distribution& p);
/// t_plus until at most one entry is above uniform, then t_minus until at
/// most one positive entry is below uniform; the result is sorted.
Distribution t_final(const Distribution& p);

enum class DistanceFilter { exact, at_most };

/// Brute-force counterpart of pmax_closed: the best top-s mass over every
/// distribution whose entries are multiples of 1/grid_denominator and whose
/// distance to uniform equals (or, with at_most, does not exceed) delta.
/// Throws NoGridDistribution when the grid has no such distribution.
Rational pmax_oracle(std::size_t n, std::size_t s, const DistanceValue& delta,
                     std::uint64_t grid_denominator,
                     DistanceFilter filter = DistanceFilter::exact);

/// Calls fn with every composition of `total` into n non-negative parts,
/// in lexicographic order.
void for_each_composition(std::size_t n, std::uint64_t total,
                          const std::function<void(std::span<const std::uint64_t>)>& fn);

/// Every distribution on n points whose entries are multiples of 1/grid_denominator.
std::vector<Distribution> grid_distributions(std::size_t n, std::uint64_t grid_denominator);

/// Inverse-CDF sampler over exact integer cumulative weights.
class Sampler {
public:
    explicit Sampler(const Distribution& p);

    template <class Rng>
    std::size_t operator()(Rng& rng) const {
        return locate(uniform_below(rng, total_));
    }

    [[nodiscard]] std::size_t size() const noexcept { return cumulative_.size(); }

private:
    [[nodiscard]] std::size_t locate(std::uint64_t u) const noexcept;

    std::vector<std::uint64_t> cumulative_;
    std::uint64_t total_;
};

template <class Rng>
std::size_t sample(const Distribution& p, Rng& rng) {
    return Sampler(p)(rng);
}

}  // namespace polymac
