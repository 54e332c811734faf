#include "ietlab/cli.hpp"

#include "ietlab/confrac.hpp"
#include "ietlab/corpus.hpp"
#include "ietlab/dimension.hpp"
#include "ietlab/iet.hpp"
#include "ietlab/mobius.hpp"
#include "ietlab/words.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>

namespace ietlab::cli {

namespace {

// ---- argument parsing helpers

std::string inline_or_file(const std::string& source) {
    std::error_code ec;
    if (!source.empty() && std::filesystem::is_regular_file(source, ec)) {
        std::ifstream f(source);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }
    return source;
}

json parse_json_arg(const std::string& source, const char* what) {
    std::string text = inline_or_file(source);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("cannot parse ") + what + ": " + e.what());
    }
}

long to_long(const std::string& text) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("not an integer: '" + text + "'");
    }
    if (used != text.size()) throw ConfigError("not an integer: '" + text + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// Inline "n,m,eps;n,m,eps" or a file / JSON text holding [[n,m,eps], ...].
std::vector<ExpansionTriple> parse_triples(const std::string& source) {
    std::string text = inline_or_file(source);
    std::vector<ExpansionTriple> out;
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        json j = parse_json_arg(text, "triples");
        for (const auto& t : j) {
            if (!t.is_array() || t.size() != 3) throw ConfigError("each triple must be [n, m, eps]");
            out.push_back({t[0].get<long>(), t[1].get<long>(), t[2].get<int>()});
        }
    } else {
        for (const auto& part : split(text, ';')) {
            if (part.empty()) continue;
            auto f = split(part, ',');
            if (f.size() != 3) throw ConfigError("triple '" + part + "' must be n,m,eps");
            out.push_back({to_long(f[0]), to_long(f[1]), static_cast<int>(to_long(f[2]))});
        }
    }
    for (const auto& t : out)
        if (t.n < 1 || t.m < 1 || (t.eps != 1 && t.eps != -1)) throw ConfigError("triples need n, m >= 1, eps = +-1");
    if (out.empty()) throw ConfigError("no triples given");
    return out;
}

// [[eps, a], ...]
Srcf parse_srcf(const std::string& source) {
    json j = parse_json_arg(source, "SRCF");
    Srcf out;
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 2) throw ConfigError("each SRCF term must be [eps, a]");
        out.push_back({t[0].get<int>(), t[1].get<long>()});
    }
    return out;
}

// [a1, a2, ...] or "a1,a2,..."
Digits parse_digits(const std::string& source) {
    std::string text = inline_or_file(source);
    Digits out;
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        for (const auto& v : parse_json_arg(text, "digits")) out.push_back(v.get<long>());
    } else {
        for (const auto& part : split(text, ','))
            if (!part.empty()) out.push_back(to_long(part));
    }
    return out;
}

std::vector<long> parse_checkpoints(const std::string& text) {
    std::vector<long> out;
    for (const auto& part : split(text, ',')) {
        if (part.empty()) continue;
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            throw ConfigError("bad checkpoint '" + part + "'");
        }
        if (used != part.size() || v < 1 || v != std::floor(v)) throw ConfigError("bad checkpoint '" + part + "'");
        out.push_back(static_cast<long>(v));
    }
    if (out.empty()) throw ConfigError("no checkpoints given");
    return out;
}

LengthTriple parse_init(const std::string& text) {
    auto f = split(text, ',');
    if (f.size() != 3) throw ConfigError("--init must be a,b,c");
    return {to_long(f[0]), to_long(f[1]), to_long(f[2])};
}

// ---- JSON helpers

json triple_json(const ExpansionTriple& t) { return json::array({t.n, t.m, t.eps}); }

json triples_json(const std::vector<ExpansionTriple>& ts) {
    json out = json::array();
    for (const auto& t : ts) out.push_back(triple_json(t));
    return out;
}

int decimal_digits(int bits) { return std::max(6, static_cast<int>(bits * 0.30103) - 2); }

json real_json(const Real& r, int bits) {
    Ball b = r.at(bits);
    json j = {{"expr", r.label()}, {"value", b.mid_string(decimal_digits(bits))}, {"radius", b.rad_double()}};
    if (r.exact()) j["exact"] = r.exact()->get_str();
    return j;
}

std::string mpz_str(const mpz_class& v) { return v.get_str(); }

json reduction_json(const ReductionRecord& r) {
    json steps = json::array();
    for (auto s : r.steps) steps.push_back(to_string(s));
    return {{"steps", steps}, {"prefix_s", r.prefix_s}, {"suffix_t", r.suffix_t}, {"f_powers", r.f_powers}};
}

json validity_json(const ValidityReport& v) {
    return {{"digits_ok", v.digits_ok},
            {"length", v.length},
            {"forbidden_n", v.forbidden_n},
            {"forbidden_m", v.forbidden_m},
            {"forbidden_n_frequency", v.forbidden_n_frequency},
            {"forbidden_m_frequency", v.forbidden_m_frequency},
            {"admissible_so_far", v.admissible_so_far}};
}

json dimension_json(const DimensionReport& r) {
    return {{"c0", r.c0},
            {"lambda", r.lambda},
            {"zeta", r.zeta},
            {"k0", r.k0},
            {"zeta0", r.zeta0},
            {"good_lower_bound", r.good},
            {"lower_bound", r.lower_bound},
            {"t", r.t},
            {"q", r.q},
            {"truncation_band", r.truncation_band},
            {"upper_bound", r.upper_bound},
            {"gradient_nonvanishing", r.gradient_nonvanishing},
            {"lebesgue_measure_zero", r.lebesgue_null},
            {"ok", r.ok}};
}

json claim_json(const ClaimReport& r) {
    return {{"c_lower", r.c_lower},
            {"eps_upper", r.eps_upper.get_str()},
            {"tau_upper", r.tau_upper.get_str()},
            {"eps_upper_is_tau_over_4", r.eps_is_tau_over_4},
            {"log_x_c", r.log_x_c},
            {"x_c_exceeds_24_pow_12", r.x_c_exceeds_24_12},
            {"f_at_x_c", r.f_at_x_c},
            {"x_c_times_f_prime_at_x_c", r.f_prime_at_x_c},
            {"log_root", r.log_root},
            {"amgm_tuples", r.amgm_tuples},
            {"amgm_failures", r.amgm_failures},
            {"ok", r.ok()}};
}

json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}}; }

// ---- options

struct Options {
    std::string alpha, beta, x0 = "1/sqrt(2)", triples, init = "2,1,3", value, srcf, digits, obs = "centered1",
                checkpoints = "1e3,1e4,1e5,1e6";
    long depth = 10, max_steps = 10000, repeat = 1, steps = 100, idoc_depth = 0, digit_min = 40, digit_max = 4000,
         max_window = 2, burn_in = 2, cutoff = 64, nodes = 32, samples = 1000, window_s = 0, out_digits = 0;
    double lambda = 0, c0 = 20, zeta = 0;
    bool code = false, strings = false;
    std::vector<std::string> skip;
};

struct Context {
    RunConfig cfg;
    PrecisionPolicy policy;
    Options opt;
};

Report make_report(json body, int code = kOk) {
    Report r;
    r.body = std::move(body);
    r.exit_code = code;
    return r;
}

// ---- commands

Report cmd_expand(const Context& c) {
    ParamPoint p = ParamPoint::parse(c.opt.alpha, c.opt.beta);
    if (c.opt.depth < 0) throw ConfigError("--depth must be nonnegative");
    Reduction red = reduce_to_D(p, c.opt.max_steps, c.policy);
    if (red.status == Reduction::Status::StepLimitExceeded) throw ConfigError("reduction exceeded --max-steps");
    ExpansionSeq seq = full_expansion(p, static_cast<std::size_t>(c.opt.depth), c.policy);
    json body = {{"point", {{"alpha", real_json(p.alpha, c.policy.initial_bits)},
                            {"beta", real_json(p.beta, c.policy.initial_bits)}}},
                 {"reduction", reduction_json(seq.reduction)},
                 {"triples", triples_json(seq.triples)},
                 {"degeneracy", nullptr},
                 {"validity", validity_json(validate_expansion(seq.triples))}};
    int code = kOk;
    if (seq.degeneracy) {
        body["degeneracy"] = {{"index", seq.degeneracy->index},
                              {"bits", seq.degeneracy->bits},
                              {"reason", seq.degeneracy->reason}};
        code = kDegenerate;
    }
    return make_report(body, code);
}

Report cmd_construct(const Context& c) {
    auto base = parse_triples(c.opt.triples);
    if (c.opt.repeat < 1) throw ConfigError("--repeat must be at least 1");
    std::vector<ExpansionTriple> ts;
    for (long r = 0; r < c.opt.repeat; ++r) ts.insert(ts.end(), base.begin(), base.end());
    ParamPoint p = point_from_expansion(ts, c.policy);
    const int bits = c.policy.initial_bits;
    const int digits = c.opt.out_digits > 0 ? static_cast<int>(c.opt.out_digits) : decimal_digits(bits);
    Ball a = p.alpha.at(bits), b = p.beta.at(bits);
    ExpansionSeq check = full_expansion(p, ts.size(), c.policy);
    json body = {{"triples", triples_json(ts)},
                 {"alpha", a.mid_string(digits)},
                 {"beta", b.mid_string(digits)},
                 {"alpha_radius", a.rad_double()},
                 {"beta_radius", b.rad_double()},
                 {"bits", bits},
                 {"round_trip", check.triples == ts}};
    return make_report(body);
}

Report cmd_orbit(const Context& c) {
    ParamPoint p = ParamPoint::parse(c.opt.alpha, c.opt.beta);
    IETState state(p, c.policy);
    if (c.opt.steps < 1) throw ConfigError("--steps must be positive");
    Coding coding = code_trajectory(state, Real::parse(c.opt.x0), static_cast<std::size_t>(c.opt.steps), c.policy);
    Table t;
    t.columns = c.opt.code ? std::vector<std::string>{"step", "value", "symbol"}
                           : std::vector<std::string>{"step", "value"};
    for (std::size_t n = 0; n < coding.symbols.size(); ++n) {
        std::vector<json> row{n, coding.values[n]};
        if (c.opt.code) row.push_back(coding.symbols[n]);
        t.rows.push_back(row);
    }
    json body = {{"steps", coding.symbols.size()},
                 {"symbols", coding.symbols},
                 {"ambiguous_at", coding.ambiguous_at ? json(*coding.ambiguous_at) : json(nullptr)}};
    if (c.opt.idoc_depth > 0) {
        IdocEvidence ev = idoc_evidence(state, static_cast<std::size_t>(c.opt.idoc_depth), 0, c.policy);
        json idx = json::array();
        for (auto [orbit, n] : ev.indices) idx.push_back({orbit, n});
        body["idoc"] = {{"status", to_string(ev.status)}, {"indices", idx}, {"bits", ev.bits}};
    }
    Report r = make_report(body, coding.ambiguous_at ? kDegenerate : kOk);
    r.table = std::move(t);
    r.default_format = "csv";
    return r;
}

Report cmd_words(const Context& c) {
    auto ts = parse_triples(c.opt.triples);
    if (c.opt.depth > 0) {
        if (static_cast<std::size_t>(c.opt.depth) > ts.size()) {
            // repeat the given triples periodically up to the requested depth
            std::vector<ExpansionTriple> longer;
            while (longer.size() < static_cast<std::size_t>(c.opt.depth)) longer.push_back(ts[longer.size() % ts.size()]);
            ts = std::move(longer);
        } else {
            ts.resize(static_cast<std::size_t>(c.opt.depth));
        }
    }
    LengthTriple init = parse_init(c.opt.init);
    auto verdicts = verify_growth(ts, init);
    Table t;
    t.columns = {"k", "a", "b", "c", "min_ratio", "bound", "ok"};
    json rows = json::array();
    bool invariants = true;
    for (const auto& v : verdicts) {
        t.rows.push_back({v.k, mpz_str(v.lengths.a), mpz_str(v.lengths.b), mpz_str(v.lengths.c), v.min_ratio, v.bound, v.ok});
        rows.push_back({{"k", v.k},
                        {"lengths", {mpz_str(v.lengths.a), mpz_str(v.lengths.b), mpz_str(v.lengths.c)}},
                        {"min_ratio", v.min_ratio},
                        {"bound", v.bound},
                        {"ok", v.ok},
                        {"invariants", v.lengths.satisfies_invariants()}});
        invariants = invariants && v.lengths.satisfies_invariants();
    }
    json body = {{"init", {mpz_str(init.a), mpz_str(init.b), mpz_str(init.c)}},
                 {"triples", triples_json(ts)},
                 {"growth", rows},
                 {"invariants_hold", invariants}};
    if (c.opt.window_s > 0)
        body["beta_expansion"] = {{"s", c.opt.window_s},
                                  {"c0", c.opt.c0},
                                  {"holds", beta_expansion_check(ts, init, static_cast<std::size_t>(c.opt.window_s), c.opt.c0)}};
    if (c.opt.strings) {
        WordTriple w{"12", "3", "123"};
        if (!(init == w.lengths())) throw ConfigError("--strings uses the initial words 12, 3, 123 (init 2,1,3)");
        for (const auto& tr : ts) {
            w = substitute(w, tr);
            if (w.A.size() + w.B.size() + w.C.size() > 10'000'000) throw ConfigError("words exceed 10^7 symbols");
        }
        body["words"] = {{"A", w.A}, {"B", w.B}, {"C", w.C}};
    }
    Report r = make_report(body);
    r.table = std::move(t);
    r.default_format = "csv";
    return r;
}

Report cmd_cf_convert(const Context& c) {
    Srcf s = parse_srcf(c.opt.srcf);
    RcfConversion conv = srcf_to_rcf(s);
    mpq_class v = srcf_value(s);
    return make_report({{"digits", conv.digits},
                        {"open_run", conv.open_run},
                        {"value", v.get_str()},
                        {"value_preserved", rcf_value(conv.digits) == v}});
}

Report cmd_cf_expand(const Context& c) {
    if (c.opt.depth < 1) throw ConfigError("--depth must be positive");
    Real x = Real::parse(c.opt.value);
    RcfExpansion e = rcf_expand(x, static_cast<std::size_t>(c.opt.depth), c.policy);
    json body = {{"value", real_json(x, c.policy.initial_bits)},
                 {"digits", e.digits},
                 {"terminated", e.terminated},
                 {"truncated_at", e.truncated_at ? json(*e.truncated_at) : json(nullptr)},
                 {"bits", e.bits}};
    return make_report(body, e.truncated_at ? kDegenerate : kOk);
}

Report cmd_cf_window(const Context& c) {
    Digits d = parse_digits(c.opt.digits);
    if (c.opt.max_window < 1) throw ConfigError("--max-window must be positive");
    if (!(c.opt.lambda > 0)) throw ConfigError("--lambda must be positive");
    auto r = window_product_check(d, c.opt.lambda, static_cast<std::size_t>(c.opt.max_window),
                                  static_cast<std::size_t>(c.opt.burn_in));
    json body = {{"ok", r.ok},
                 {"ok_from", r.ok_from},
                 {"burn_in", c.opt.burn_in},
                 {"window_sizes", r.window_sizes},
                 {"failed_at", r.failed_at ? json(*r.failed_at) : json(nullptr)}};
    if (!r.ok) body["status"] = "fail";
    return make_report(body);
}

Report cmd_mobius_series(const Context& c) {
    auto checkpoints = parse_checkpoints(c.opt.checkpoints);
    long top = *std::max_element(checkpoints.begin(), checkpoints.end());
    MobiusTable table(std::max(top, 1L));
    IETState state(ParamPoint::parse(c.opt.alpha, c.opt.beta), c.policy);
    Observable obs = Observable::parse(c.opt.obs);
    auto series = disjointness_series(table, state, Real::parse(c.opt.x0), obs, checkpoints, c.policy);
    Table t;
    t.columns = {"N", "re", "im", "abs"};
    json rows = json::array();
    for (const auto& s : series) {
        t.rows.push_back({s.n, s.value.real(), s.value.imag(), std::abs(s.value)});
        json row = complex_json(s.value);
        row["N"] = s.n;
        rows.push_back(row);
    }
    Report r = make_report({{"observable", obs.name()}, {"series", rows}});
    r.table = std::move(t);
    r.default_format = "csv";
    return r;
}

Report cmd_mobius_claim(const Context& c) {
    ClaimReport r = verify_claim_constants(static_cast<std::size_t>(c.opt.samples), c.cfg.seed);
    return make_report(claim_json(r), r.ok() ? kOk : kNumericalFailure);
}

Report cmd_dimension_good(const Context& c) {
    return make_report({{"c0", c.opt.c0},
                        {"good_lower_bound", good_lower_bound(c.opt.c0)},
                        {"parameter_set_lower_bound", parameter_set_lower_bound(c.opt.c0)}});
}

Report cmd_dimension_cylinder(const Context& c) {
    double d = cylinder_dim_estimate(c.opt.digit_min, c.opt.digit_max, static_cast<int>(c.opt.depth), c.cfg.jobs);
    return make_report({{"min", c.opt.digit_min}, {"max", c.opt.digit_max}, {"depth", c.opt.depth}, {"estimate", d}});
}

PressureModel model_of(const Context& c) {
    PressureModel m;
    m.cutoff = static_cast<int>(c.opt.cutoff);
    m.nodes = static_cast<int>(c.opt.nodes);
    try {
        m.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return m;
}

Report cmd_dimension_tzeta(const Context& c) {
    TZetaBand b = solve_t_of_zeta_with_band(c.opt.zeta, model_of(c));
    return make_report({{"zeta", c.opt.zeta},
                        {"cutoff", c.opt.cutoff},
                        {"nodes", c.opt.nodes},
                        {"t", b.value.t},
                        {"q", b.value.q},
                        {"residual_value", b.value.residual_value},
                        {"residual_slope", b.value.residual_slope},
                        {"solver", b.value.newton ? "newton" : "bisection"},
                        {"t_double_cutoff", b.t_double_cutoff},
                        {"truncation_band", b.band()}});
}

Report cmd_dimension_p0(const Context& c) {
    DimensionReport r = p0_dimension_bounds(c.opt.c0, model_of(c));
    return make_report(dimension_json(r), r.ok ? kOk : kNumericalFailure);
}

// ---- reproduce

struct Item {
    std::string name;
    std::function<json(const Context&)> run;  // returns details with a boolean "pass"
};

json item_claim(const Context& c) {
    ClaimReport r = verify_claim_constants(1000, derived_stream(c.cfg.seed, "claim")());
    json j = claim_json(r);
    j["pass"] = r.ok();
    return j;
}

json item_window(const Context& c) {
    json per_s = json::array();
    bool pass = true;
    for (std::size_t s = 1; s <= 3; ++s) {
        auto rng = derived_stream(c.cfg.seed, "window-s" + std::to_string(s));
        std::size_t window_fail = 0, product_fail = 0;
        json failures = json::array();
        for (int i = 0; i < 50; ++i) {
            auto ts = random_window_triples(rng, 40, c.opt.c0, s);
            WindowBoundCheck w = window_bound_from_expansion(ts, c.opt.c0, s);
            if (!w.window.holds || w.window.holds_from > s) ++window_fail;
            if (!w.product.ok) {
                ++product_fail;
                failures.push_back({{"sequence", i}, {"failed_at", *w.product.failed_at}});
            }
        }
        pass = pass && window_fail == 0 && product_fail == 0;
        per_s.push_back({{"s", s},
                         {"sequences", 50},
                         {"window_condition_failures", window_fail},
                         {"product_failures", product_fail},
                         {"failures", failures}});
    }
    return {{"c0", c.opt.c0}, {"lambda", std::sqrt(2 * c.opt.c0 / 3)}, {"burn_in", 2}, {"by_s", per_s}, {"pass", pass}};
}

json item_words(const Context& c) {
    auto rng = derived_stream(c.cfg.seed, "words");
    std::size_t checked = 0, growth_fail = 0, invariant_fail = 0;
    for (int i = 0; i < 100; ++i) {
        auto ts = random_admissible_triples(rng, 16, 2, 12);
        for (const auto& v : verify_growth(ts)) {
            if (!v.lengths.satisfies_invariants()) ++invariant_fail;
            if (v.k >= 2) {
                ++checked;
                if (!v.ok) ++growth_fail;
            }
        }
    }
    return {{"sequences", 100},
            {"checked_steps", checked},
            {"growth_failures", growth_fail},
            {"invariant_failures", invariant_fail},
            {"pass", growth_fail == 0 && invariant_fail == 0}};
}

json item_dimension(const Context& c) {
    DimensionReport r = p0_dimension_bounds(c.opt.c0);
    json j = dimension_json(r);
    j["pass"] = r.ok;
    return j;
}

json item_mobius(const Context& c) {
    auto rng = derived_stream(c.cfg.seed, "mobius");
    auto ts = random_admissible_triples(rng, 6, 40, 60);
    ParamPoint p = point_from_expansion(ts, c.policy);
    IETState state(p, c.policy);
    MobiusTable table(1000000);
    auto series = disjointness_series(table, state, Real::parse("1/sqrt(2)"), Observable::parse("centered1"),
                                      {100, 1000, 10000, 100000, 1000000}, c.policy);
    json rows = json::array();
    for (const auto& s : series) {
        json row = complex_json(s.value);
        row["N"] = s.n;
        rows.push_back(row);
    }
    double first = std::abs(series.front().value), last = std::abs(series.back().value);
    return {{"triples", triples_json(ts)},
            {"alpha", p.alpha.at(128).mid_string(30)},
            {"beta", p.beta.at(128).mid_string(30)},
            {"series", rows},
            {"pass", last < 0.1 && last < first}};
}

Report cmd_reproduce(const Context& c) {
    const std::vector<Item> items = {{"claim", item_claim},
                                     {"window", item_window},
                                     {"words", item_words},
                                     {"dimension", item_dimension},
                                     {"mobius", item_mobius}};
    for (const auto& s : c.opt.skip) {
        bool known = std::any_of(items.begin(), items.end(), [&](const Item& i) { return i.name == s; });
        if (!known) throw ConfigError("unknown item '" + s + "' for --skip");
    }
    auto run_item = [&c](const Item& item) -> json {
        json j;
        try {
            j = item.run(c);
            j["status"] = j.value("pass", false) ? "pass" : "fail";
        } catch (const std::exception& e) {
            j = {{"status", "error"}, {"error", e.what()}};
        }
        j.erase("pass");
        return j;
    };
    std::vector<std::future<json>> pending;
    for (const auto& item : items) {
        bool skipped = std::find(c.opt.skip.begin(), c.opt.skip.end(), item.name) != c.opt.skip.end();
        auto policy = c.cfg.jobs > 1 ? std::launch::async : std::launch::deferred;
        if (skipped)
            pending.push_back(std::async(std::launch::deferred, [] { return json{{"status", "skipped"}}; }));
        else
            pending.push_back(std::async(policy, run_item, std::cref(item)));
    }
    json out = json::array();
    bool failed = false;
    for (std::size_t i = 0; i < items.size(); ++i) {
        json j = pending[i].get();
        std::string status = j["status"];
        failed = failed || status == "fail" || status == "error";
        json entry = {{"item", items[i].name}};
        entry.update(j);
        out.push_back(entry);
    }
    return make_report({{"status", failed ? "fail" : "pass"}, {"c0", c.opt.c0}, {"items", out}},
                       failed ? kNumericalFailure : kOk);
}

std::string utc_now() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int classify(const std::exception& e) {
    if (dynamic_cast<const std::logic_error*>(&e)) return kConfigError;
    return kNumericalFailure;
}

std::string type_name(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
    if (dynamic_cast<const DomainViolation*>(&e)) return "DomainViolation";
    if (dynamic_cast<const PrecisionExhausted*>(&e)) return "PrecisionExhausted";
    if (dynamic_cast<const BranchAmbiguous*>(&e)) return "BranchAmbiguous";
    if (dynamic_cast<const ReturnTimeExceeded*>(&e)) return "ReturnTimeExceeded";
    if (dynamic_cast<const NonConvergence*>(&e)) return "NonConvergence";
    if (dynamic_cast<const NonBracketing*>(&e)) return "NonBracketing";
    if (dynamic_cast<const NonContraction*>(&e)) return "NonContraction";
    if (dynamic_cast<const InadmissiblePrefix*>(&e)) return "InadmissiblePrefix";
    if (dynamic_cast<const DivisionByZeroTail*>(&e)) return "DivisionByZeroTail";
    if (dynamic_cast<const std::logic_error*>(&e)) return "InvalidArgument";
    return "RuntimeError";
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Three-interval exchange expansions, continued fractions and dimension estimates", kToolName};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kToolVersion);

    RunConfig cfg;
    Options opt;
    PrecisionPolicy env_policy;
    try {
        env_policy = PrecisionPolicy::from_environment();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }
    cfg.precision_bits = env_policy.initial_bits;
    app.add_option("--precision", cfg.precision_bits, "working precision in bits")->check(CLI::Range(53, 1 << 20));
    app.add_option("--seed", cfg.seed, "seed for randomized corpora");
    app.add_option("--output", cfg.output_path, "report path (written atomically); stdout when absent");
    app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::Range(1u, 256u));

    std::string chosen;
    auto sub = [&](CLI::App* parent, const std::string& name, const std::string& help, const std::string& key) {
        CLI::App* s = parent->add_subcommand(name, help);
        s->callback([&chosen, key] { chosen = key; });
        return s;
    };

    auto* expand = sub(&app, "expand", "reduce a parameter point into D and expand it", "expand");
    expand->add_option("--alpha", opt.alpha, "alpha expression")->required();
    expand->add_option("--beta", opt.beta, "beta expression")->required();
    expand->add_option("--depth", opt.depth, "number of triples");
    expand->add_option("--max-steps", opt.max_steps, "reduction step limit");

    auto* construct = sub(&app, "construct", "parameter point with a prescribed expansion", "construct");
    construct->add_option("--triples", opt.triples, "n,m,eps;... or a JSON file")->required();
    construct->add_option("--repeat", opt.repeat, "repeat the triples this many times");
    construct->add_option("--digits", opt.out_digits, "decimal digits in the output");

    auto* orbit = sub(&app, "orbit", "orbit of the exchange map", "orbit");
    orbit->add_option("--alpha", opt.alpha)->required();
    orbit->add_option("--beta", opt.beta)->required();
    orbit->add_option("--x0", opt.x0, "starting point expression");
    orbit->add_option("--steps", opt.steps, "orbit length");
    orbit->add_flag("--code", opt.code, "include the symbolic coding");
    orbit->add_option("--idoc-depth", opt.idoc_depth, "check distinct backward orbits of the cuts to this depth");

    auto* words = sub(&app, "words", "return-word lengths and growth", "words");
    words->add_option("--triples", opt.triples)->required();
    words->add_option("--init", opt.init, "initial lengths a,b,c");
    words->add_option("--depth", opt.depth, "number of substitutions (triples repeat periodically)");
    words->add_flag("--strings", opt.strings, "include the words themselves");
    words->add_option("--s", opt.window_s, "window for the exponential growth check");
    words->add_option("--c0", opt.c0, "constant for the exponential growth check");

    auto* cf = app.add_subcommand("cf", "continued fractions");
    cf->require_subcommand(1);
    auto* convert = sub(cf, "convert", "semi-regular to regular continued fraction", "cf convert");
    convert->add_option("--srcf", opt.srcf, "JSON [[eps, a], ...] or a file")->required();
    auto* cfexpand = sub(cf, "expand", "regular continued fraction digits", "cf expand");
    cfexpand->add_option("--value", opt.value)->required();
    cfexpand->add_option("--depth", opt.depth);
    auto* window = sub(cf, "window", "window product check on digits", "cf window");
    window->add_option("--digits", opt.digits, "JSON array, comma list or file")->required();
    window->add_option("--lambda", opt.lambda)->required();
    window->add_option("--max-window", opt.max_window)->required();
    window->add_option("--burn-in", opt.burn_in);

    auto* mobius = app.add_subcommand("mobius", "Mobius function experiments");
    mobius->require_subcommand(1);
    auto* series = sub(mobius, "series", "averages of mu(k) f(T^k x0)", "mobius series");
    series->add_option("--alpha", opt.alpha)->required();
    series->add_option("--beta", opt.beta)->required();
    series->add_option("--x0", opt.x0);
    series->add_option("--obs", opt.obs, "const, root3, centered1, centered2, centered3");
    series->add_option("--checkpoints", opt.checkpoints, "comma-separated N values");
    auto* claim = sub(mobius, "claim", "constant estimates", "mobius claim");
    claim->add_option("--samples", opt.samples, "random tuples for the AM-GM chain");

    auto* dim = app.add_subcommand("dimension", "Hausdorff dimension estimates");
    dim->require_subcommand(1);
    auto* good = sub(dim, "good", "Good's lower bound", "dimension good");
    good->add_option("--c0", opt.c0);
    auto* cyl = sub(dim, "cylinder", "cylinder covering estimate", "dimension cylinder");
    cyl->add_option("--min", opt.digit_min);
    cyl->add_option("--max", opt.digit_max);
    cyl->add_option("--depth", opt.depth)->default_val(2);
    auto* tz = sub(dim, "tzeta", "solve for t(zeta)", "dimension tzeta");
    tz->add_option("--zeta", opt.zeta)->required();
    tz->add_option("--cutoff", opt.cutoff);
    tz->add_option("--nodes", opt.nodes);
    auto* p0 = sub(dim, "p0", "bounds for the parameter set", "dimension p0");
    p0->add_option("--c0", opt.c0);
    p0->add_option("--cutoff", opt.cutoff);
    p0->add_option("--nodes", opt.nodes);

    auto* reproduce = sub(&app, "reproduce", "run every check and emit one report", "reproduce");
    reproduce->add_option("--c0", opt.c0);
    reproduce->add_option("--skip", opt.skip, "items to skip: claim, window, words, dimension, mobius");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kConfigError;
    }

    cfg.command = split(chosen, ' ');
    std::vector<const CLI::App*> chain{&app};
    while (!chain.back()->get_subcommands().empty()) chain.push_back(chain.back()->get_subcommands().front());
    for (const CLI::App* a : chain)
        for (const CLI::Option* o : a->get_options())
            if (o->count() > 0 && o->get_name() != "--help" && o->get_name() != "--version")
                cfg.args[o->get_name()] = o->results().size() == 1 ? json(o->results().front()) : json(o->results());

    Context ctx{cfg, env_policy, opt};
    ctx.policy.initial_bits = cfg.precision_bits;
    ctx.policy.max_bits = std::max(env_policy.max_bits, cfg.precision_bits);

    const auto started = std::chrono::steady_clock::now();
    Report report;
    std::string message;
    bool usage = false;
    using Handler = Report (*)(const Context&);
    const std::map<std::string, Handler> handlers = {
        {"expand", cmd_expand},
        {"construct", cmd_construct},
        {"orbit", cmd_orbit},
        {"words", cmd_words},
        {"cf convert", cmd_cf_convert},
        {"cf expand", cmd_cf_expand},
        {"cf window", cmd_cf_window},
        {"mobius series", cmd_mobius_series},
        {"mobius claim", cmd_mobius_claim},
        {"dimension good", cmd_dimension_good},
        {"dimension cylinder", cmd_dimension_cylinder},
        {"dimension tzeta", cmd_dimension_tzeta},
        {"dimension p0", cmd_dimension_p0},
        {"reproduce", cmd_reproduce},
    };
    try {
        report = handlers.at(chosen)(ctx);
        if (cfg.format == "csv" && !report.table) throw ConfigError("command '" + chosen + "' has no CSV form");
    } catch (const std::exception& e) {
        int code = classify(e);
        report = Report{};
        report.body = error_body(type_name(e), e.what(), code);
        report.exit_code = code;
        message = e.what();
        usage = dynamic_cast<const ConfigError*>(&e) != nullptr;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    report.header = {{"tool", kToolName},
                     {"version", kToolVersion},
                     {"schema", kSchemaVersion},
                     {"config", cfg.echo()},
                     {"started_at", utc_now()},
                     {"wall_time_s", wall}};

    std::string format = cfg.format.empty() ? report.default_format : cfg.format;
    if (!message.empty() || !report.table) format = "json";
    std::string text = format == "csv" ? render_csv(*report.table) : render_json(report);
    try {
        if (cfg.output_path.empty())
            out << text;
        else
            write_atomic(cfg.output_path, text);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kNumericalFailure;
    }
    if (!message.empty()) {
        err << "error: " << message << "\n";
        if (usage) err << app.help();
    }
    return report.exit_code;
}

}  // namespace ietlab::cli
