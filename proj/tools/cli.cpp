#include "cli.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "polymac/attack_game.hpp"
#include "polymac/bounds.hpp"
#include "polymac/distributions.hpp"
#include "polymac/errors.hpp"
#include "polymac/mac.hpp"
#include "polymac/report.hpp"

namespace polymac::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSeed = 1;

struct Globals {
    std::uint64_t seed = kDefaultSeed;
    std::string format;
    std::string config;
};

void add_globals(CLI::App* cmd, Globals& g, const std::string& default_format,
                 const std::vector<std::string>& formats) {
    g.format = default_format;
    cmd->add_option("--seed", g.seed, "64-bit seed for every random draw")->capture_default_str();
    cmd->add_option("--format", g.format, "output format")
        ->check(CLI::IsMember(formats))
        ->capture_default_str();
    cmd->add_option("--config", g.config, "JSON file of option values; flags on the command line win");
}

std::vector<std::string> split(const std::string& text, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::uint64_t parse_u64(const std::string& s) {
    std::size_t used = 0;
    if (s.empty() || s.front() == '-') throw PreconditionError("not a non-negative integer: '" + s + "'");
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw PreconditionError("not a non-negative integer: '" + s + "'");
    return v;
}

std::vector<std::uint64_t> parse_field_values(const std::string& text, std::uint64_t p, const char* what) {
    std::vector<std::uint64_t> values;
    for (const auto& item : split(text)) {
        const auto v = parse_u64(item);
        if (v >= p) {
            throw PreconditionError(std::string(what) + " value " + item + " is not in Z_" + std::to_string(p));
        }
        values.push_back(v);
    }
    return values;
}

std::uint64_t field_value(std::uint64_t v, std::uint64_t p, const char* what) {
    if (v >= p) throw PreconditionError(std::string(what) + " = " + std::to_string(v) + " is not in Z_" + std::to_string(p));
    return v;
}

std::vector<Rational> parse_rationals(const std::string& text) {
    std::vector<Rational> out;
    for (const auto& item : split(text)) out.push_back(Rational::parse(item));
    return out;
}

LeadingExponent parse_leading(const std::string& s) {
    return s == "l" ? LeadingExponent::max_length : LeadingExponent::message_length;
}

ProbeMode parse_probe(const std::string& s) {
    return s == "full" ? ProbeMode::full_length : ProbeMode::single_element;
}

json rational_json(const Rational& r) { return json{{"exact", r.to_string()}, {"decimal", r.to_double()}}; }

/// Turns the --config file into "--key=value" tokens placed right after the
/// subcommand, so anything given explicitly later on the command line wins.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::optional<std::string> path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (!path) return args;
    std::ifstream in(*path);
    if (!in) throw PreconditionError("cannot open config file '" + *path + "'");
    const json doc = json::parse(in);
    if (!doc.is_object()) throw PreconditionError("config file must hold a JSON object");

    const auto scalar = [](const json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    };
    std::vector<std::string> out{args.front()};
    for (const auto& [key, value] : doc.items()) {
        if (key == "config") continue;
        std::string text;
        if (value.is_array()) {
            for (std::size_t i = 0; i < value.size(); ++i) text += (i ? "," : "") + scalar(value[i]);
        } else {
            text = scalar(value);
        }
        out.push_back("--" + key + "=" + text);
    }
    out.insert(out.end(), args.begin() + 1, args.end());
    return out;
}

// --- subcommands -------------------------------------------------------------

struct MacArgs {
    std::uint64_t p = 0;
    std::size_t l = 1;
    std::uint64_t k1 = 0;
    std::uint64_t k2 = 0;
    std::string msg;
    std::uint64_t tag = 0;
    std::string leading = "nu";
};

void add_mac_options(CLI::App* cmd, MacArgs& a) {
    cmd->add_option("--p", a.p, "prime modulus")->required();
    cmd->add_option("--l", a.l, "maximum message length")->capture_default_str();
    cmd->add_option("--k1", a.k1, "first key component")->required();
    cmd->add_option("--k2", a.k2, "second key component")->required();
    cmd->add_option("--msg", a.msg, "message as comma-separated field elements")->required();
    cmd->add_option("--leading", a.leading, "leading power of k1: nu (nu+1) or l (l+1)")
        ->check(CLI::IsMember({"nu", "l"}))
        ->capture_default_str();
}

Tag compute_tag(const MacArgs& a, MacParams& params_out, KeyPair& key_out, std::optional<Message>& msg_out) {
    params_out = MacParams(PrimeModulus(a.p), a.l, parse_leading(a.leading));
    const auto m = params_out.modulus;
    key_out = {FieldElement(m, field_value(a.k1, a.p, "k1")), FieldElement(m, field_value(a.k2, a.p, "k2"))};
    msg_out = Message::from_values(m, parse_field_values(a.msg, a.p, "message"));
    return sign(params_out, key_out, *msg_out);
}

int cmd_sign(const MacArgs& a, const Globals& g, std::ostream& out) {
    MacParams params(PrimeModulus(2), 1);
    KeyPair key{FieldElement::zero(params.modulus), FieldElement::zero(params.modulus)};
    std::optional<Message> msg;
    const Tag t = compute_tag(a, params, key, msg);
    if (g.format == "json") {
        out << json{{"p", a.p}, {"l", a.l}, {"tag", t.t.value()}}.dump() << "\n";
    } else {
        out << t.t.value() << "\n";
    }
    return kSuccess;
}

int cmd_verify(const MacArgs& a, const Globals& g, std::ostream& out) {
    MacParams params(PrimeModulus(2), 1);
    KeyPair key{FieldElement::zero(params.modulus), FieldElement::zero(params.modulus)};
    std::optional<Message> msg;
    compute_tag(a, params, key, msg);
    const Tag claimed{FieldElement(params.modulus, field_value(a.tag, a.p, "tag"))};
    const Verdict v = verify(params, key, *msg, claimed);
    const char* word = v == Verdict::accept ? "accept" : "reject";
    if (g.format == "json") {
        out << json{{"verdict", word}}.dump() << "\n";
    } else {
        out << word << "\n";
    }
    return v == Verdict::accept ? kSuccess : kVerifyReject;
}

struct DistanceArgs {
    std::string probs;
    std::string q;
};

int cmd_distance(const DistanceArgs& a, const Globals& g, std::ostream& out) {
    const Distribution p(parse_rationals(a.probs));
    const Distribution q = a.q.empty() ? Distribution::uniform(p.size()) : Distribution(parse_rationals(a.q));
    const Rational d = stat_distance(p, q);
    if (g.format == "json") {
        out << json{{"n", p.size()}, {"against", a.q.empty() ? "uniform" : "q"}, {"distance", rational_json(d)}}.dump()
            << "\n";
    } else if (g.format == "csv") {
        out << "n,distance,distance_exact\n" << p.size() << ',' << d.to_double() << ',' << d << "\n";
    } else {
        out << d << " (" << d.to_double() << ")\n";
    }
    return kSuccess;
}

struct PmaxArgs {
    std::size_t n = 0;
    std::string delta;
    std::size_t s = 0;
    std::size_t s_min = 0;
    std::size_t s_max = 0;
    std::uint64_t oracle = 0;
    bool at_most = false;
};

int cmd_pmax(const PmaxArgs& a, const Globals& g, std::ostream& out) {
    const DistanceValue delta(Rational::parse(a.delta), a.n);
    std::size_t lo = a.s_min ? a.s_min : 1;
    std::size_t hi = a.s_max ? a.s_max : a.n - 1;
    if (a.s) lo = hi = a.s;
    struct Line {
        std::size_t s;
        Rational closed;
        std::optional<Rational> oracle;
    };
    std::vector<Line> lines;
    for (std::size_t s = lo; s <= hi; ++s) {
        Line line{s, pmax_closed(a.n, s, delta), std::nullopt};
        if (a.oracle) {
            try {
                line.oracle = pmax_oracle(a.n, s, delta, a.oracle,
                                          a.at_most ? DistanceFilter::at_most : DistanceFilter::exact);
            } catch (const NoGridDistribution& e) {
                throw PreconditionError(std::string("oracle grid incompatible with delta: ") + e.what());
            }
        }
        lines.push_back(line);
    }
    if (g.format == "json") {
        json rows = json::array();
        for (const auto& l : lines) {
            json row = {{"s", l.s}, {"closed", rational_json(l.closed)}};
            if (l.oracle) {
                row["oracle"] = rational_json(*l.oracle);
                row["match"] = *l.oracle == l.closed;
            }
            rows.push_back(row);
        }
        out << json{{"n", a.n}, {"delta", delta.value().to_string()}, {"rows", rows}}.dump(2) << "\n";
    } else if (g.format == "csv") {
        out << "s,closed,closed_exact" << (a.oracle ? ",oracle,oracle_exact,match" : "") << "\n";
        for (const auto& l : lines) {
            out << l.s << ',' << l.closed.to_double() << ',' << l.closed;
            if (l.oracle) out << ',' << l.oracle->to_double() << ',' << *l.oracle << ',' << (*l.oracle == l.closed ? "true" : "false");
            out << "\n";
        }
    } else {
        out << "Pmax^s for n=" << a.n << ", delta=" << delta.value() << "\n";
        out << std::left << std::setw(6) << "s" << std::setw(14) << "closed";
        if (a.oracle) out << std::setw(14) << ("oracle/" + std::to_string(a.oracle)) << "match";
        out << "\n";
        for (const auto& l : lines) {
            out << std::setw(6) << l.s << std::setw(14) << l.closed.to_string();
            if (l.oracle) out << std::setw(14) << l.oracle->to_string() << (*l.oracle == l.closed ? "yes" : "no");
            out << "\n";
        }
    }
    return kSuccess;
}

struct ExtremalArgs {
    std::size_t n = 0;
    std::string delta;
};

int cmd_extremal(const ExtremalArgs& a, const Globals& g, std::ostream& out) {
    const DistanceValue delta(Rational::parse(a.delta), a.n);
    const Distribution d = extremal_distribution(a.n, delta);
    const Rational measured = distance_to_uniform(d);
    if (g.format == "json") {
        json probs = json::array();
        for (const auto& x : d.probs()) probs.push_back(x.to_string());
        out << json{{"n", a.n}, {"probs", probs}, {"distance", rational_json(measured)}}.dump() << "\n";
    } else if (g.format == "csv") {
        out << "index,prob,prob_exact\n";
        for (std::size_t i = 0; i < d.size(); ++i) out << i << ',' << d[i].to_double() << ',' << d[i] << "\n";
    } else {
        for (std::size_t i = 0; i < d.size(); ++i) out << (i ? "," : "") << d[i];
        out << "\ndistance to uniform " << measured << "\n";
    }
    return kSuccess;
}

struct AttackArgs {
    std::uint64_t p = 5;
    std::size_t l = 1;
    std::string key1 = "uniform";
    std::string key2 = "uniform";
    std::string variants = "oblivious,adaptive";
    bool exact = true;
    std::uint64_t mc_trials = 0;
    std::string probe = "single";
    std::string leading = "nu";
    unsigned threads = 1;
    bool timings = false;
};

int cmd_attack(const AttackArgs& a, const Globals& g, std::ostream& out) {
    ExperimentConfig config;
    config.p = a.p;
    config.l = a.l;
    config.leading = parse_leading(a.leading);
    config.key1 = KeySpec::parse(a.key1);
    config.key2 = KeySpec::parse(a.key2);
    config.variants.clear();
    for (const auto& v : split(a.variants)) config.variants.push_back(parse_variant(v));
    config.exact = a.exact;
    config.mc_trials = a.mc_trials;
    config.seed = g.seed;
    config.probe = parse_probe(a.probe);
    config.threads = a.threads;
    const AdvantageReport report = run_experiment(config);
    out << (g.format == "json" ? report_json(report, a.timings) : report_human(report, a.timings));
    return report.all_pass ? kSuccess : kBoundViolation;
}

struct SweepArgs {
    std::string primes = "3,5";
    std::string ls = "1,2";
    std::string mu = "0,1,2";
    std::string families = "extremal";
    std::string probe = "single";
    std::string leading = "nu";
    unsigned threads = 1;
};

int cmd_sweep(const SweepArgs& a, const Globals& g, std::ostream& out) {
    SweepConfig config;
    config.primes.clear();
    for (const auto& s : split(a.primes)) config.primes.push_back(parse_u64(s));
    config.lengths.clear();
    for (const auto& s : split(a.ls)) config.lengths.push_back(static_cast<std::size_t>(parse_u64(s)));
    config.mus.clear();
    for (const auto& s : split(a.mu)) config.mus.push_back(MuToken::parse(s));
    config.families.clear();
    for (const auto& s : split(a.families)) config.families.push_back(parse_family(s));
    config.probe = parse_probe(a.probe);
    config.leading = parse_leading(a.leading);
    config.threads = a.threads;
    if (config.primes.empty() || config.lengths.empty() || config.mus.empty() || config.families.empty()) {
        throw PreconditionError("sweep needs at least one prime, length, mu and family");
    }

    const auto rows = run_sweep(config);
    out << (g.format == "json" ? sweep_json(rows) : sweep_csv(rows));
    bool violation = false;
    bool cell_error = false;
    for (const auto& r : rows) {
        if (!r.error.empty()) cell_error = true;
        else if (!r.all_pass) violation = true;
    }
    if (violation) return kBoundViolation;
    return cell_error ? kUsageError : kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"polymac: one-time polynomial MAC workbench", "polymac"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    // One set of global flags per subcommand so their format defaults stay independent.
    std::array<Globals, 7> globals;
    MacArgs mac;
    auto* sign_cmd = app.add_subcommand("sign", "compute the tag of a message");
    add_mac_options(sign_cmd, mac);
    add_globals(sign_cmd, globals[0], "human", {"human", "json"});

    auto* verify_cmd = app.add_subcommand("verify", "check a tag; exit 2 on reject");
    add_mac_options(verify_cmd, mac);
    verify_cmd->add_option("--tag", mac.tag, "claimed tag")->required();
    add_globals(verify_cmd, globals[1], "human", {"human", "json"});

    DistanceArgs dist;
    auto* distance_cmd = app.add_subcommand("distance", "statistical distance to uniform (or to --q)");
    distance_cmd->add_option("--probs", dist.probs, "comma-separated probabilities, e.g. 1/2,1/4,1/4")->required();
    distance_cmd->add_option("--q", dist.q, "second distribution (default uniform)");
    add_globals(distance_cmd, globals[2], "human", {"human", "json", "csv"});

    PmaxArgs pm;
    auto* pmax_cmd = app.add_subcommand("pmax", "closed-form largest s-point mass, optionally against brute force");
    pmax_cmd->add_option("--n", pm.n, "support size")->required();
    pmax_cmd->add_option("--delta", pm.delta, "distance to uniform, e.g. 1/5")->required();
    pmax_cmd->add_option("--s", pm.s, "single prefix size");
    pmax_cmd->add_option("--s-min", pm.s_min, "smallest prefix size (default 1)");
    pmax_cmd->add_option("--s-max", pm.s_max, "largest prefix size (default n-1)");
    pmax_cmd->add_option("--oracle", pm.oracle, "also brute-force on the 1/G probability grid");
    pmax_cmd->add_flag("--at-most", pm.at_most, "oracle admits distance <= delta instead of = delta");
    add_globals(pmax_cmd, globals[3], "human", {"human", "json", "csv"});

    ExtremalArgs ex;
    auto* extremal_cmd = app.add_subcommand("extremal", "the extremal distribution at a given distance");
    extremal_cmd->add_option("--n", ex.n, "support size")->required();
    extremal_cmd->add_option("--delta", ex.delta, "distance to uniform")->required();
    add_globals(extremal_cmd, globals[4], "human", {"human", "json", "csv"});

    AttackArgs at;
    auto* attack_cmd = app.add_subcommand("attack", "exact and Monte Carlo advantage against every bound");
    attack_cmd->add_option("--p", at.p, "prime modulus")->capture_default_str();
    attack_cmd->add_option("--l", at.l, "maximum message length")->capture_default_str();
    attack_cmd->add_option("--key1", at.key1, "k1 distribution: uniform | extremal:<d> | shifted:<d> | point:<i> | probs:<list>")
        ->capture_default_str();
    attack_cmd->add_option("--key2", at.key2, "k2 distribution")->capture_default_str();
    attack_cmd->add_option("--variants", at.variants, "comma-separated: oblivious,adaptive")->capture_default_str();
    attack_cmd->add_flag("--exact,!--no-exact", at.exact, "run exact enumeration")->capture_default_str();
    attack_cmd->add_option("--mc-trials", at.mc_trials, "Monte Carlo games per variant (0 = none)")
        ->capture_default_str();
    attack_cmd->add_option("--probe", at.probe, "adaptive probe messages: single or full")
        ->check(CLI::IsMember({"single", "full"}))
        ->capture_default_str();
    attack_cmd->add_option("--leading", at.leading, "leading power of k1: nu or l")
        ->check(CLI::IsMember({"nu", "l"}))
        ->capture_default_str();
    attack_cmd->add_option("--threads", at.threads, "worker threads")->capture_default_str();
    attack_cmd->add_flag("--timings", at.timings, "include wall-clock timings (output no longer reproducible)");
    add_globals(attack_cmd, globals[5], "human", {"human", "json"});

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "CSV of exact advantages and bounds over a grid");
    sweep_cmd->add_option("--primes", sw.primes, "comma-separated primes")->capture_default_str();
    sweep_cmd->add_option("--ls", sw.ls, "comma-separated maximum lengths")->capture_default_str();
    sweep_cmd->add_option("--mu", sw.mu, "distances in units of 1/p; 'max' is p-1")->capture_default_str();
    sweep_cmd->add_option("--families", sw.families, "comma-separated: extremal,shifted")->capture_default_str();
    sweep_cmd->add_option("--probe", sw.probe, "adaptive probe messages: single or full")
        ->check(CLI::IsMember({"single", "full"}))
        ->capture_default_str();
    sweep_cmd->add_option("--leading", sw.leading, "leading power of k1: nu or l")
        ->check(CLI::IsMember({"nu", "l"}))
        ->capture_default_str();
    sweep_cmd->add_option("--threads", sw.threads, "worker threads")->capture_default_str();
    add_globals(sweep_cmd, globals[6], "csv", {"csv", "json", "human"});

    std::vector<std::string> args;
    try {
        args = raw_args.empty() ? raw_args : expand_config(raw_args);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    std::vector<const char*> argv{"polymac"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (*sign_cmd) return cmd_sign(mac, globals[0], out);
        if (*verify_cmd) return cmd_verify(mac, globals[1], out);
        if (*distance_cmd) return cmd_distance(dist, globals[2], out);
        if (*pmax_cmd) return cmd_pmax(pm, globals[3], out);
        if (*extremal_cmd) return cmd_extremal(ex, globals[4], out);
        if (*attack_cmd) return cmd_attack(at, globals[5], out);
        if (*sweep_cmd) return cmd_sweep(sw, globals[6], out);
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace polymac::cli
