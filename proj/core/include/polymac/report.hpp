#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polymac/attack_game.hpp"
#include "polymac/bounds.hpp"
#include "polymac/distributions.hpp"
#include "polymac/estimate.hpp"
#include "polymac/mac.hpp"
#include "polymac/rational.hpp"

namespace polymac {

/// Textual description of a key distribution over Z_p:
///   uniform | extremal:<delta> | shifted:<delta> | point:<index> | probs:<r0>,<r1>,...
/// "shifted" is the extremal distribution rotated one place, so its heavy
/// point sits on index 1 instead of 0.
class KeySpec {
public:
    enum class Kind { uniform, extremal, shifted, point, explicit_probs };

    static KeySpec parse(std::string_view text);
    static KeySpec uniform();
    static KeySpec extremal(Rational delta);
    static KeySpec shifted(Rational delta);
    static KeySpec point(std::size_t index);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] Distribution materialize(std::uint64_t p) const;
    [[nodiscard]] std::string to_string() const;

private:
    Kind kind_ = Kind::uniform;
    Rational delta_;
    std::size_t index_ = 0;
    std::vector<Rational> probs_;
};

enum class AdversaryVariant { oblivious, adaptive };

std::string_view variant_name(AdversaryVariant v) noexcept;
AdversaryVariant parse_variant(std::string_view text);

struct ExperimentConfig {
    std::uint64_t p = 5;
    std::size_t l = 1;
    LeadingExponent leading = LeadingExponent::message_length;
    KeySpec key1 = KeySpec::uniform();
    KeySpec key2 = KeySpec::uniform();
    std::vector<AdversaryVariant> variants{AdversaryVariant::oblivious, AdversaryVariant::adaptive};
    bool exact = true;
    std::uint64_t mc_trials = 0;
    std::uint64_t seed = 0;
    ProbeMode probe = ProbeMode::single_element;
    unsigned threads = 1;
};

struct VariantResult {
    AdversaryVariant variant;
    std::optional<Rational> exact;
    std::optional<AdvantageEstimate> monte_carlo;
};

struct BoundComparison {
    AdversaryVariant variant;
    BoundFormula formula;
    bool pass = true;
};

struct AdvantageReport {
    ExperimentConfig config;
    Rational delta1;  // measured from the materialized key distributions
    Rational delta2;
    std::vector<VariantResult> results;
    std::vector<AdvantageBound> bounds;
    std::vector<BoundComparison> comparisons;
    bool all_pass = true;
    double exact_seconds = 0.0;
    double monte_carlo_seconds = 0.0;
};

/// The four bounds for (p, l, delta1, delta2). The mu form is marked
/// inapplicable whenever the simplified form is, since it restates it.
std::vector<AdvantageBound> all_bounds(std::uint64_t p, std::uint64_t l, const Rational& delta1,
                                       const Rational& delta2);

/// Whether a bound constrains this experiment: eq2 only for uniform keys,
/// eq10 and mu only when their conditions hold, eq9 always.
bool bound_in_force(const AdvantageBound& bound, const Rational& delta1, const Rational& delta2);

AdvantageReport run_experiment(const ExperimentConfig& config);

std::string report_json(const AdvantageReport& report, bool include_timings = false);
std::string report_human(const AdvantageReport& report, bool include_timings = false);

// Sweeps over a grid of (p, l, key family, distance) cells.

enum class KeyFamily { extremal, shifted };

std::string_view family_name(KeyFamily f) noexcept;
KeyFamily parse_family(std::string_view text);

/// A distance written in units of 1/p: a non-negative integer, or "max" for p - 1.
struct MuToken {
    std::optional<std::uint64_t> value;  // empty means "max"

    static MuToken parse(std::string_view text);
    [[nodiscard]] std::uint64_t resolve(std::uint64_t p) const { return value ? *value : p - 1; }
    [[nodiscard]] std::string to_string() const { return value ? std::to_string(*value) : "max"; }
};

struct SweepConfig {
    std::vector<std::uint64_t> primes{3, 5};
    std::vector<std::size_t> lengths{1, 2};
    std::vector<MuToken> mus{{0}, {1}, {2}};
    std::vector<KeyFamily> families{KeyFamily::extremal};
    ProbeMode probe = ProbeMode::single_element;
    LeadingExponent leading = LeadingExponent::message_length;
    unsigned threads = 1;
};

struct SweepRow {
    std::uint64_t p = 0;
    std::size_t l = 0;
    KeyFamily family1 = KeyFamily::extremal;
    KeyFamily family2 = KeyFamily::extremal;
    std::string mu1;
    std::string mu2;
    Rational delta1;
    Rational delta2;
    Rational exact_oblivious;
    Rational exact_adaptive;
    Rational bound_eq2;
    Rational bound_eq9;
    bool bound_eq10_applicable = false;
    Rational bound_eq10;
    Rational bound_mu;
    bool all_pass = false;
    std::string error;
};

/// Rows in grid order: p, l, family1, mu1, family2, mu2. A failing cell is
/// recorded with `error` set and all_pass false; the sweep continues.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const std::vector<SweepRow>& rows);

}  // namespace polymac
