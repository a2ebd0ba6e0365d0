#include "polymac/report.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "polymac/errors.hpp"

namespace polymac {
namespace {

using json = nlohmann::ordered_json;

std::string trim(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return std::string(s);
}

std::size_t parse_index(std::string_view s) {
    const Rational r = Rational::parse(s);
    if (!r.is_integer() || r < 0) throw PreconditionError("not an index: '" + std::string(s) + "'");
    return static_cast<std::size_t>(r.num());
}

json rational_json(const Rational& r) { return json{{"exact", r.to_string()}, {"decimal", r.to_double()}}; }

json interval_json(const Interval& i) { return json::array({i.low, i.high}); }

std::string decimal(const Rational& r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", r.to_double());
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string_view probe_name(ProbeMode m) {
    return m == ProbeMode::single_element ? "single" : "full";
}

std::string_view leading_name(LeadingExponent e) {
    return e == LeadingExponent::message_length ? "nu+1" : "l+1";
}

bool compare_all(const std::vector<AdvantageBound>& bounds, const Rational& d1, const Rational& d2,
                 const Rational& advantage) {
    for (const auto& b : bounds) {
        if (bound_in_force(b, d1, d2) && advantage > b.effective) return false;
    }
    return true;
}

}  // namespace

// --- KeySpec -----------------------------------------------------------------

KeySpec KeySpec::parse(std::string_view text) {
    const std::string t = trim(text);
    const auto colon = t.find(':');
    const std::string head = t.substr(0, colon);
    const std::string tail = colon == std::string::npos ? std::string{} : t.substr(colon + 1);
    if (head == "uniform" && colon == std::string::npos) return uniform();
    if (colon == std::string::npos || tail.empty()) {
        throw PreconditionError("unrecognised key distribution '" + t +
                                "' (expected uniform, extremal:<delta>, shifted:<delta>, point:<i> or probs:<list>)");
    }
    if (head == "extremal") return extremal(Rational::parse(tail));
    if (head == "shifted") return shifted(Rational::parse(tail));
    if (head == "point") return point(parse_index(tail));
    if (head == "probs") {
        KeySpec k;
        k.kind_ = Kind::explicit_probs;
        std::stringstream ss(tail);
        std::string item;
        while (std::getline(ss, item, ',')) k.probs_.push_back(Rational::parse(item));
        return k;
    }
    throw PreconditionError("unrecognised key distribution '" + t + "'");
}

KeySpec KeySpec::uniform() { return KeySpec{}; }

KeySpec KeySpec::extremal(Rational delta) {
    KeySpec k;
    k.kind_ = Kind::extremal;
    k.delta_ = delta;
    return k;
}

KeySpec KeySpec::shifted(Rational delta) {
    KeySpec k = extremal(delta);
    k.kind_ = Kind::shifted;
    return k;
}

KeySpec KeySpec::point(std::size_t index) {
    KeySpec k;
    k.kind_ = Kind::point;
    k.index_ = index;
    return k;
}

Distribution KeySpec::materialize(std::uint64_t p) const {
    const auto n = static_cast<std::size_t>(p);
    switch (kind_) {
        case Kind::uniform: return Distribution::uniform(n);
        case Kind::extremal: return extremal_distribution(n, DistanceValue(delta_, n));
        case Kind::shifted: return extremal_distribution(n, DistanceValue(delta_, n)).rotated(1);
        case Kind::point: return Distribution::point_mass(n, index_);
        case Kind::explicit_probs: {
            if (probs_.size() != n) {
                throw PreconditionError("explicit key distribution has " + std::to_string(probs_.size()) +
                                        " entries, expected p = " + std::to_string(p));
            }
            return Distribution(probs_);
        }
    }
    throw PreconditionError("bad key distribution kind");
}

std::string KeySpec::to_string() const {
    switch (kind_) {
        case Kind::uniform: return "uniform";
        case Kind::extremal: return "extremal:" + delta_.to_string();
        case Kind::shifted: return "shifted:" + delta_.to_string();
        case Kind::point: return "point:" + std::to_string(index_);
        case Kind::explicit_probs: {
            std::string s = "probs:";
            for (std::size_t i = 0; i < probs_.size(); ++i) s += (i ? "," : "") + probs_[i].to_string();
            return s;
        }
    }
    return "?";
}

std::string_view variant_name(AdversaryVariant v) noexcept {
    return v == AdversaryVariant::oblivious ? "oblivious" : "adaptive";
}

AdversaryVariant parse_variant(std::string_view text) {
    if (text == "oblivious") return AdversaryVariant::oblivious;
    if (text == "adaptive") return AdversaryVariant::adaptive;
    throw PreconditionError("unknown adversary variant '" + std::string(text) + "'");
}

// --- bounds in a report ------------------------------------------------------

std::vector<AdvantageBound> all_bounds(std::uint64_t p, std::uint64_t l, const Rational& delta1,
                                       const Rational& delta2) {
    const DistanceValue d1(delta1, p);
    const DistanceValue d2(delta2, p);
    const Rational pp(static_cast<std::int64_t>(p));
    std::vector<AdvantageBound> out{bound_uniform(p, l), bound_general(p, l, d1, d2), bound_simplified(p, l, d1, d2),
                                    bound_mu(p, l, delta1 * pp, delta2 * pp)};
    if (!out[2].applicable) {
        out[3].applicable = false;
        out[3].reason = "restates eq10, whose conditions fail: " + out[2].reason;
    }
    return out;
}

bool bound_in_force(const AdvantageBound& bound, const Rational& delta1, const Rational& delta2) {
    if (!bound.applicable) return false;
    if (bound.formula == BoundFormula::uniform_eq2) return delta1 == 0 && delta2 == 0;
    return true;
}

// --- experiments -------------------------------------------------------------

AdvantageReport run_experiment(const ExperimentConfig& config) {
    using clock = std::chrono::steady_clock;
    const MacParams params(PrimeModulus(config.p), config.l, config.leading);
    const Distribution key1 = config.key1.materialize(config.p);
    const Distribution key2 = config.key2.materialize(config.p);

    AdvantageReport report;
    report.config = config;
    report.delta1 = distance_to_uniform(key1);
    report.delta2 = distance_to_uniform(key2);
    report.bounds = all_bounds(config.p, config.l, report.delta1, report.delta2);

    const EnumerationOptions options{.max_len = config.l, .probe = config.probe, .threads = config.threads};
    for (const auto variant : config.variants) {
        VariantResult result{variant, std::nullopt, std::nullopt};
        if (!config.exact && config.mc_trials == 0) {
            report.results.push_back(result);
            continue;
        }
        const auto t0 = clock::now();
        std::optional<AdversaryStrategy> strategy;
        if (variant == AdversaryVariant::oblivious) {
            const ObliviousPlan plan = optimal_oblivious(params, key1, key2, options);
            result.exact = plan.value;
            strategy = AdversaryStrategy::oblivious(plan);
        } else {
            const AdaptivePlan plan = optimal_adaptive(params, key1, key2, options);
            result.exact = plan.value;
            strategy = AdversaryStrategy::adaptive_optimal(plan);
        }
        report.exact_seconds += std::chrono::duration<double>(clock::now() - t0).count();
        if (!config.exact) result.exact.reset();

        if (config.mc_trials > 0) {
            const auto t1 = clock::now();
            result.monte_carlo = monte_carlo_advantage(params, key1, key2, *strategy, config.mc_trials,
                                                       config.seed, config.threads);
            report.monte_carlo_seconds += std::chrono::duration<double>(clock::now() - t1).count();
        }
        if (result.exact) {
            for (const auto& b : report.bounds) {
                if (!bound_in_force(b, report.delta1, report.delta2)) continue;
                const bool pass = *result.exact <= b.effective;
                report.comparisons.push_back({variant, b.formula, pass});
                report.all_pass = report.all_pass && pass;
            }
        }
        report.results.push_back(result);
    }
    return report;
}

std::string report_json(const AdvantageReport& report, bool include_timings) {
    const auto& c = report.config;
    json variants = json::array();
    for (auto v : c.variants) variants.push_back(variant_name(v));
    json j;
    j["config"] = {{"p", c.p},
                   {"l", c.l},
                   {"leading_exponent", leading_name(c.leading)},
                   {"key1", c.key1.to_string()},
                   {"key2", c.key2.to_string()},
                   {"variants", variants},
                   {"exact", c.exact},
                   {"mc_trials", c.mc_trials},
                   {"seed", c.seed},
                   {"probe", probe_name(c.probe)}};
    j["measured"] = {{"delta1", rational_json(report.delta1)}, {"delta2", rational_json(report.delta2)}};

    json results = json::object();
    for (const auto& r : report.results) {
        json entry = json::object();
        entry["exact"] = r.exact ? rational_json(*r.exact) : json(nullptr);
        if (r.monte_carlo) {
            const auto& e = *r.monte_carlo;
            json mc = {{"method", AdvantageEstimate::method},
                       {"trials", e.trials},
                       {"wins", e.wins},
                       {"point", e.point},
                       {"ci95", interval_json(e.ci95)},
                       {"ci99", interval_json(e.ci99)}};
            if (r.exact) mc["exact_inside_ci99"] = e.ci99.contains(r.exact->to_double());
            entry["monte_carlo"] = mc;
        } else {
            entry["monte_carlo"] = nullptr;
        }
        results[std::string(variant_name(r.variant))] = entry;
    }
    j["advantage"] = results;

    json bounds = json::array();
    for (const auto& b : report.bounds) {
        bounds.push_back({{"id", formula_id(b.formula)},
                          {"raw", rational_json(b.raw)},
                          {"effective", rational_json(b.effective)},
                          {"applicable", b.applicable},
                          {"vacuous", b.vacuous()},
                          {"reason", b.reason}});
    }
    j["bounds"] = bounds;

    json comparisons = json::array();
    for (const auto& cmp : report.comparisons) {
        comparisons.push_back(
            {{"variant", variant_name(cmp.variant)}, {"bound", formula_id(cmp.formula)}, {"pass", cmp.pass}});
    }
    j["comparisons"] = comparisons;
    j["all_pass"] = report.all_pass;
    if (include_timings) {
        j["timings"] = {{"exact_seconds", report.exact_seconds},
                        {"monte_carlo_seconds", report.monte_carlo_seconds}};
    }
    return j.dump(2) + "\n";
}

std::string report_human(const AdvantageReport& report, bool include_timings) {
    const auto& c = report.config;
    std::ostringstream os;
    os << "attack game  p=" << c.p << "  l=" << c.l << "  leading exponent " << leading_name(c.leading)
       << "  probe=" << probe_name(c.probe) << "  seed=" << c.seed << "\n";
    os << "  key1 " << c.key1.to_string() << "  measured delta1 = " << report.delta1 << " (" << decimal(report.delta1)
       << ")\n";
    os << "  key2 " << c.key2.to_string() << "  measured delta2 = " << report.delta2 << " (" << decimal(report.delta2)
       << ")\n";
    os << "advantage\n";
    for (const auto& r : report.results) {
        os << "  " << std::left << std::setw(10) << variant_name(r.variant);
        if (r.exact) os << " exact " << *r.exact << " (" << decimal(*r.exact) << ")";
        if (r.monte_carlo) {
            const auto& e = *r.monte_carlo;
            os << " mc " << e.point << " over " << e.trials << " trials, " << AdvantageEstimate::method
               << " 95% [" << e.ci95.low << ", " << e.ci95.high << "] 99% [" << e.ci99.low << ", " << e.ci99.high
               << "]";
        }
        os << "\n";
    }
    os << "bounds\n";
    for (const auto& b : report.bounds) {
        os << "  " << std::left << std::setw(5) << formula_id(b.formula) << " raw " << b.raw << " (" << decimal(b.raw)
           << ")  effective " << b.effective;
        if (!b.applicable) os << "  not applicable: " << b.reason;
        else if (b.vacuous()) os << "  vacuous";
        if (b.applicable && !b.reason.empty()) os << "  note: " << b.reason;
        os << "\n";
    }
    if (!report.comparisons.empty()) {
        os << "comparisons\n";
        for (const auto& cmp : report.comparisons) {
            os << "  " << variant_name(cmp.variant) << " <= " << formula_id(cmp.formula) << "  "
               << (cmp.pass ? "pass" : "FAIL") << "\n";
        }
    }
    if (include_timings) {
        os << "timings  exact " << report.exact_seconds << " s  monte carlo " << report.monte_carlo_seconds << " s\n";
    }
    os << "result " << (report.all_pass ? "PASS" : "FAIL") << "\n";
    return os.str();
}

// --- sweeps ------------------------------------------------------------------

std::string_view family_name(KeyFamily f) noexcept { return f == KeyFamily::extremal ? "extremal" : "shifted"; }

KeyFamily parse_family(std::string_view text) {
    if (text == "extremal") return KeyFamily::extremal;
    if (text == "shifted") return KeyFamily::shifted;
    throw PreconditionError("unknown key family '" + std::string(text) + "' (expected extremal or shifted)");
}

MuToken MuToken::parse(std::string_view text) {
    const std::string t = trim(text);
    if (t == "max") return MuToken{std::nullopt};
    return MuToken{static_cast<std::uint64_t>(parse_index(t))};
}

namespace {

SweepRow run_cell(const SweepConfig& config, std::uint64_t p, std::size_t l, KeyFamily f1, const MuToken& m1,
                  KeyFamily f2, const MuToken& m2) {
    SweepRow row;
    row.p = p;
    row.l = l;
    row.family1 = f1;
    row.family2 = f2;
    row.mu1 = m1.to_string();
    row.mu2 = m2.to_string();
    try {
        const MacParams params(PrimeModulus(p), l, config.leading);
        const auto spec_for = [p](KeyFamily f, const MuToken& m) {
            const Rational delta(static_cast<std::int64_t>(m.resolve(p)), static_cast<std::int64_t>(p));
            return f == KeyFamily::extremal ? KeySpec::extremal(delta) : KeySpec::shifted(delta);
        };
        const Distribution key1 = spec_for(f1, m1).materialize(p);
        const Distribution key2 = spec_for(f2, m2).materialize(p);
        row.delta1 = distance_to_uniform(key1);
        row.delta2 = distance_to_uniform(key2);

        const EnumerationOptions options{.max_len = l, .probe = config.probe};
        row.exact_oblivious = optimal_oblivious(params, key1, key2, options).value;
        row.exact_adaptive = optimal_adaptive(params, key1, key2, options).value;

        const auto bounds = all_bounds(p, l, row.delta1, row.delta2);
        row.bound_eq2 = bounds[0].raw;
        row.bound_eq9 = bounds[1].raw;
        row.bound_eq10_applicable = bounds[2].applicable;
        row.bound_eq10 = bounds[2].raw;
        row.bound_mu = bounds[3].raw;
        row.all_pass = compare_all(bounds, row.delta1, row.delta2, row.exact_oblivious) &&
                       compare_all(bounds, row.delta1, row.delta2, row.exact_adaptive);
    } catch (const std::exception& e) {
        row.all_pass = false;
        row.error = e.what();
    }
    return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    struct Cell {
        std::uint64_t p;
        std::size_t l;
        KeyFamily f1;
        MuToken m1;
        KeyFamily f2;
        MuToken m2;
    };
    std::vector<Cell> cells;
    for (auto p : config.primes)
        for (auto l : config.lengths)
            for (auto f1 : config.families)
                for (const auto& m1 : config.mus)
                    for (auto f2 : config.families)
                        for (const auto& m2 : config.mus) cells.push_back({p, l, f1, m1, f2, m2});

    std::vector<SweepRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const auto& c = cells[i];
            rows[i] = run_cell(config, c.p, c.l, c.f1, c.m1, c.f2, c.m2);
        }
    };
    const unsigned threads = std::max(1u, config.threads);
    if (threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "p,l,family1,mu1,family2,mu2,delta1,delta1_exact,delta2,delta2_exact,"
          "exact_oblivious,exact_oblivious_exact,exact_adaptive,exact_adaptive_exact,"
          "bound_eq2,bound_eq2_exact,bound_eq9,bound_eq9_exact,bound_eq10_applicable,"
          "bound_eq10,bound_eq10_exact,mu_bound,mu_bound_exact,all_pass,error\n";
    for (const auto& r : rows) {
        os << r.p << ',' << r.l << ',' << family_name(r.family1) << ',' << r.mu1 << ',' << family_name(r.family2)
           << ',' << r.mu2 << ',';
        if (!r.error.empty()) {
            os << ",,,,,,,,,,,,,,,,," << "false," << csv_quote(r.error) << "\n";
            continue;
        }
        for (const Rational* v : {&r.delta1, &r.delta2, &r.exact_oblivious, &r.exact_adaptive, &r.bound_eq2,
                                  &r.bound_eq9}) {
            os << decimal(*v) << ',' << v->to_string() << ',';
        }
        os << (r.bound_eq10_applicable ? "true" : "false") << ',';
        os << decimal(r.bound_eq10) << ',' << r.bound_eq10.to_string() << ',';
        os << decimal(r.bound_mu) << ',' << r.bound_mu.to_string() << ',';
        os << (r.all_pass ? "true" : "false") << ",\n";
    }
    return os.str();
}

std::string sweep_json(const std::vector<SweepRow>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
        json j = {{"p", r.p}, {"l", r.l}, {"family1", family_name(r.family1)}, {"mu1", r.mu1},
                  {"family2", family_name(r.family2)}, {"mu2", r.mu2}};
        if (!r.error.empty()) {
            j["all_pass"] = false;
            j["error"] = r.error;
        } else {
            j["delta1"] = rational_json(r.delta1);
            j["delta2"] = rational_json(r.delta2);
            j["exact_oblivious"] = rational_json(r.exact_oblivious);
            j["exact_adaptive"] = rational_json(r.exact_adaptive);
            j["bound_eq2"] = rational_json(r.bound_eq2);
            j["bound_eq9"] = rational_json(r.bound_eq9);
            j["bound_eq10_applicable"] = r.bound_eq10_applicable;
            j["bound_eq10"] = rational_json(r.bound_eq10);
            j["mu_bound"] = rational_json(r.bound_mu);
            j["all_pass"] = r.all_pass;
        }
        out.push_back(j);
    }
    return out.dump(2) + "\n";
}

}  // namespace polymac
