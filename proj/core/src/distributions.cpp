#include "polymac/distributions.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "polymac/errors.hpp"

namespace polymac {
namespace {

Rational uniform_level(std::size_t n) { return Rational(1, static_cast<std::int64_t>(n)); }

std::size_t count_above(const Distribution& p) {
    const Rational u = uniform_level(p.size());
    return static_cast<std::size_t>(
        std::count_if(p.probs().begin(), p.probs().end(), [&](const Rational& x) { return x > u; }));
}

std::size_t count_below(const Distribution& p) {
    const Rational u = uniform_level(p.size());
    return static_cast<std::size_t>(std::count_if(p.probs().begin(), p.probs().end(),
                                                  [&](const Rational& x) { return x > 0 && x < u; }));
}

void require_pmax_domain(std::size_t n, std::size_t s, const DistanceValue& delta) {
    if (delta.support_size() != n) {
        throw PreconditionError("distance value is for support " + std::to_string(delta.support_size()) +
                                ", not " + std::to_string(n));
    }
    if (s < 1 || s >= n) {
        throw PreconditionError("prefix size s=" + std::to_string(s) + " outside [1, " +
                                std::to_string(n) + ")");
    }
}

}  // namespace

Distribution::Distribution(std::vector<Rational> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw PreconditionError("distribution needs a non-empty support");
    Rational total;
    for (const auto& x : probs_) {
        if (x < 0) throw PreconditionError("negative probability " + x.to_string());
        total += x;
    }
    if (total != 1) throw PreconditionError("probabilities sum to " + total.to_string() + ", not 1");
}

Distribution Distribution::uniform(std::size_t n) {
    if (n == 0) throw PreconditionError("uniform distribution needs n >= 1");
    return Distribution(std::vector<Rational>(n, uniform_level(n)));
}

Distribution Distribution::point_mass(std::size_t n, std::size_t index) {
    if (index >= n) throw PreconditionError("point mass index outside the support");
    std::vector<Rational> probs(n, Rational(0));
    probs[index] = 1;
    return Distribution(std::move(probs));
}

std::uint64_t Distribution::common_denominator() const {
    unsigned __int128 l = 1;
    for (const auto& x : probs_) {
        const auto d = static_cast<std::uint64_t>(x.den());
        l = l / std::gcd(static_cast<std::uint64_t>(l), d) * d;
        if (l > static_cast<unsigned __int128>(INT64_MAX)) {
            throw std::overflow_error("common denominator of the distribution overflows 63 bits");
        }
    }
    return static_cast<std::uint64_t>(l);
}

std::vector<std::uint64_t> Distribution::integer_weights() const {
    const std::uint64_t d = common_denominator();
    std::vector<std::uint64_t> w;
    w.reserve(probs_.size());
    for (const auto& x : probs_) {
        w.push_back(static_cast<std::uint64_t>(x.num()) * (d / static_cast<std::uint64_t>(x.den())));
    }
    return w;
}

Distribution Distribution::rotated(std::size_t shift) const {
    const std::size_t n = probs_.size();
    std::vector<Rational> out(n);
    for (std::size_t i = 0; i < n; ++i) out[(i + shift) % n] = probs_[i];
    return Distribution(std::move(out));
}

DistanceValue::DistanceValue(Rational delta, std::size_t support_size)
    : delta_(delta), n_(support_size) {
    if (support_size == 0) throw PreconditionError("distance value needs a support size >= 1");
    const Rational max = Rational(1) - uniform_level(support_size);
    if (delta < 0 || delta > max) {
        throw PreconditionError("distance " + delta.to_string() + " outside [0, " + max.to_string() +
                                "] for support " + std::to_string(support_size));
    }
}

SupportPartition partition(const Distribution& p) {
    const Rational u = uniform_level(p.size());
    SupportPartition part;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Rational& x = p[i];
        if (x == 0) {
            part.zero.push_back(i);
        } else if (x < u) {
            part.below.push_back(i);
        } else if (x == u) {
            part.equal.push_back(i);
        } else {
            part.above.push_back(i);
        }
    }
    return part;
}

Rational stat_distance(const Distribution& p, const Distribution& q) {
    if (p.size() != q.size()) {
        throw PreconditionError("support sizes differ: " + std::to_string(p.size()) + " vs " +
                                std::to_string(q.size()));
    }
    Rational sum;
    for (std::size_t i = 0; i < p.size(); ++i) sum += (p[i] - q[i]).abs();
    return sum / 2;
}

Rational distance_to_uniform(const Distribution& p) {
    return stat_distance(p, Distribution::uniform(p.size()));
}

Rational pmax_closed(std::size_t n, std::size_t s, const DistanceValue& delta) {
    require_pmax_domain(n, s, delta);
    const auto nn = static_cast<std::int64_t>(n);
    const auto ss = static_cast<std::int64_t>(s);
    if (Rational(ss) <= Rational(nn) * (Rational(1) - delta.value())) {
        return delta.value() + Rational(ss, nn);
    }
    return 1;
}

Distribution extremal_distribution(std::size_t n, const DistanceValue& delta) {
    if (delta.support_size() != n) throw PreconditionError("distance value is for a different support");
    const auto nn = static_cast<std::int64_t>(n);
    const Rational u = uniform_level(n);
    const Rational scaled = delta.value() * nn;
    const std::int64_t whole = scaled.floor();
    const Rational frac = scaled - whole;
    const auto k = static_cast<std::size_t>(nn - whole);

    std::vector<Rational> probs(n, Rational(0));
    probs[0] = delta.value() + u;
    for (std::size_t i = 1; i + 1 < k; ++i) probs[i] = u;
    if (k >= 2) probs[k - 1] = (Rational(1) - frac) / nn;
    return Distribution(std::move(probs));
}

Distribution t_sort(const Distribution& p) {
    std::vector<Rational> probs(p.probs().begin(), p.probs().end());
    std::stable_sort(probs.begin(), probs.end(), std::greater<>{});
    return Distribution(std::move(probs));
}

Distribution t_plus(const Distribution& p) {
    if (count_above(p) <= 1) {
        throw PreconditionError("t_plus needs at least two entries above uniform");
    }
    const Distribution sorted = t_sort(p);
    std::vector<Rational> probs(sorted.probs().begin(), sorted.probs().end());
    const Rational u = uniform_level(p.size());
    probs[0] += probs[1] - u;
    probs[1] = u;
    return Distribution(std::move(probs));
}

Distribution t_minus(const Distribution& p) {
    const SupportPartition part = partition(p);
    if (part.below.size() <= 1) {
        throw PreconditionError("t_minus needs at least two positive entries below uniform");
    }
    std::vector<std::size_t> order = part.below;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    // order[0] has the largest deficit (tau2), order[1] the next (tau1 <= tau2).
    const std::size_t j = order[0];
    const std::size_t i = order[1];
    const Rational u = uniform_level(p.size());
    const Rational tau_sum = (u - p[i]) + (u - p[j]);

    std::vector<Rational> probs(p.probs().begin(), p.probs().end());
    if (tau_sum <= u) {
        probs[i] = u;
        probs[j] = u - tau_sum;
    } else {
        probs[i] = 0;
        probs[j] = u * 2 - tau_sum;
    }
    return t_sort(Distribution(std::move(probs)));
}

Distribution t_final(const Distribution& p) {
    Distribution current = t_sort(p);
    while (count_above(current) > 1) current = t_plus(current);
    while (count_below(current) > 1) current = t_minus(current);
    return t_sort(current);
}

void for_each_composition(std::size_t n, std::uint64_t total,
                          const std::function<void(std::span<const std::uint64_t>)>& fn) {
    if (n == 0) return;
    std::vector<std::uint64_t> parts(n, 0);
    // Recursive fill of parts[0..n-2]; the last part takes what remains.
    auto recurse = [&](auto&& self, std::size_t pos, std::uint64_t remaining) -> void {
        if (pos + 1 == n) {
            parts[pos] = remaining;
            fn(parts);
            return;
        }
        for (std::uint64_t v = 0; v <= remaining; ++v) {
            parts[pos] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    recurse(recurse, 0, total);
}

std::vector<Distribution> grid_distributions(std::size_t n, std::uint64_t grid_denominator) {
    if (grid_denominator == 0) throw PreconditionError("grid denominator must be positive");
    std::vector<Distribution> out;
    const auto g = static_cast<std::int64_t>(grid_denominator);
    for_each_composition(n, grid_denominator, [&](std::span<const std::uint64_t> parts) {
        std::vector<Rational> probs;
        probs.reserve(parts.size());
        for (auto c : parts) probs.emplace_back(static_cast<std::int64_t>(c), g);
        out.emplace_back(std::move(probs));
    });
    return out;
}

Rational pmax_oracle(std::size_t n, std::size_t s, const DistanceValue& delta,
                     std::uint64_t grid_denominator, DistanceFilter filter) {
    require_pmax_domain(n, s, delta);
    if (grid_denominator == 0) throw PreconditionError("grid denominator must be positive");

    // With entries c_i / G, twice n*G times the distance is sum |n c_i - G|.
    const auto g = static_cast<std::int64_t>(grid_denominator);
    const auto nn = static_cast<std::int64_t>(n);
    const Rational target = delta.value() * (2 * nn * g);

    std::optional<std::uint64_t> best;
    std::vector<std::uint64_t> sorted(n);
    for_each_composition(n, grid_denominator, [&](std::span<const std::uint64_t> parts) {
        std::int64_t spread = 0;
        for (auto c : parts) spread += std::abs(nn * static_cast<std::int64_t>(c) - g);
        const bool admitted = filter == DistanceFilter::exact ? Rational(spread) == target
                                                              : Rational(spread) <= target;
        if (!admitted) return;
        std::copy(parts.begin(), parts.end(), sorted.begin());
        std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(s), sorted.end(),
                          std::greater<>{});
        const std::uint64_t top = std::accumulate(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(s),
                                                  std::uint64_t{0});
        if (!best || top > *best) best = top;
    });
    if (!best) {
        throw NoGridDistribution("no distribution on the 1/" + std::to_string(grid_denominator) +
                                 " grid over " + std::to_string(n) + " points is at distance " +
                                 delta.value().to_string());
    }
    return {static_cast<std::int64_t>(*best), g};
}

Sampler::Sampler(const Distribution& p) : total_(p.common_denominator()) {
    const auto weights = p.integer_weights();
    cumulative_.resize(weights.size());
    std::partial_sum(weights.begin(), weights.end(), cumulative_.begin());
}

std::size_t Sampler::locate(std::uint64_t u) const noexcept {
    return static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) -
                                    cumulative_.begin());
}

}  // namespace polymac
