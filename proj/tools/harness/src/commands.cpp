#include "etlab_harness/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include <etlab/arith.hpp>
#include <etlab/empirics.hpp>
#include <etlab/error.hpp>
#include <etlab/independence.hpp>
#include <etlab/random_model.hpp>
#include <etlab/series.hpp>
#include <etlab/sieve_cache.hpp>
#include <etlab/tail.hpp>

namespace etlab::harness {

namespace {

// ---- parameter access -------------------------------------------------------

const json& need(const json& cfg, const char* key) {
    if (!cfg.contains(key) || cfg.at(key).is_null()) raise(ErrorKind::invalid_argument, std::string("missing parameter '") + key + "'");
    return cfg.at(key);
}

double real(const json& cfg, const char* key) {
    const json& v = need(cfg, key);
    if (!v.is_number()) raise(ErrorKind::invalid_argument, std::string("parameter '") + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) raise(ErrorKind::invalid_argument, std::string("parameter '") + key + "' must be finite");
    return d;
}

/// Nonnegative integer; accepts 1e6-style values as long as they are integral.
std::uint64_t count(const json& cfg, const char* key) {
    const json& v = need(cfg, key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        if (v.get<std::int64_t>() < 0) raise(ErrorKind::invalid_argument, std::string("parameter '") + key + "' must be >= 0");
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    const double d = real(cfg, key);
    if (d < 0 || d != std::floor(d) || d > 1.8e19)
        raise(ErrorKind::invalid_argument, std::string("parameter '") + key + "' must be a nonnegative integer");
    return static_cast<std::uint64_t>(d);
}

std::vector<double> reals(const json& cfg, const char* key) {
    const json& v = need(cfg, key);
    if (v.is_number()) return {real(cfg, key)};
    if (!v.is_array() || v.empty()) raise(ErrorKind::invalid_argument, std::string("parameter '") + key + "' must be a nonempty list");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) raise(ErrorKind::invalid_argument, std::string("parameter '") + key + "' must hold numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::string text(const json& cfg, const char* key) {
    const json& v = need(cfg, key);
    if (!v.is_string()) raise(ErrorKind::invalid_argument, std::string("parameter '") + key + "' must be a string");
    return v.get<std::string>();
}

Family family(const json& cfg) { return parse_family(text(cfg, "family")); }

ErrorFamily error_family(const json& cfg) {
    const auto f = text(cfg, "family");
    if (f == "divisor") return ErrorFamily::divisor;
    if (f == "circle") return ErrorFamily::circle;
    raise(ErrorKind::invalid_argument, "family must be divisor or circle here");
}

std::string stream_label(Stream s) {
    switch (s) {
        case Stream::model_phase: return "model_phase";
        case Stream::grid_jitter: return "grid_jitter";
        case Stream::grid_uniform: return "grid_uniform";
        case Stream::relation_search: return "relation_search";
    }
    return "unknown";
}

/// Seeds for the two sides of an experiment, derived from one user seed.
constexpr std::uint64_t grid_label = 1, model_label = 2;

TGrid grid_from(const json& cfg, const char* T_key = "T") {
    const auto strategy = parse_grid_strategy(cfg.value("strategy", std::string("stratified")));
    const std::uint64_t seed = count(cfg, "seed");
    return t_grid(real(cfg, T_key), count(cfg, "count"), strategy, CounterRng(seed).split(grid_label).seed());
}

std::vector<std::string> grid_streams(const TGrid& g) {
    if (g.strategy == GridStrategy::jittered_stratified) return {stream_label(Stream::grid_jitter)};
    if (g.strategy == GridStrategy::uniform_random) return {stream_label(Stream::grid_uniform)};
    return {};
}

CosineSeries series_from(const json& cfg) {
    SeriesSpec spec;
    spec.family = family(cfg);
    spec.kernel_limit = count(cfg, "N");
    if (cfg.contains("inner") && !cfg.at("inner").is_null()) spec.inner_limit = count(cfg, "inner");
    return build_series(spec);
}

ModelSpec model_from(const json& cfg) {
    ModelSpec m;
    m.family = family(cfg);
    m.kernel_limit = count(cfg, "N");
    m.inner_limit = count(cfg, "L");
    return m;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json terms_json(const std::vector<SignedTerm>& t) {
    json a = json::array();
    for (const auto& x : t) a.push_back({{"sign", x.sign}, {"n", x.n}});
    return a;
}

std::string terms_text(const std::vector<SignedTerm>& t) {
    std::string s;
    for (const auto& x : t) s += (x.sign > 0 ? "+sqrt(" : "-sqrt(") + std::to_string(x.n) + ")";
    return s;
}

// ---- commands ----------------------------------------------------------------

CommandResult cmd_error_term(const json& cfg, const RunOptions&) {
    const auto fam = error_family(cfg);
    const double x = real(cfg, "x");
    const bool left = cfg.value("left_limit", false);
    ErrorTermValue v;
    if (fam == ErrorFamily::divisor)
        v = left ? delta_left_limit(x) : delta(x);
    else
        v = left ? p_error_left_limit(x) : p_error(x);
    CommandResult r;
    r.result = {{"x", v.x},
                {"family", fam == ErrorFamily::divisor ? "divisor" : "circle"},
                {"exact_sum", to_string(v.exact_sum)},
                {"main_term", v.main_term.hi + v.main_term.lo},
                {"main_term_hi", v.main_term.hi},
                {"main_term_lo", v.main_term.lo},
                {"remainder", v.remainder},
                {"left_limit", left}};
    r.table.columns = {"x", "family", "exact_sum", "main_term", "remainder"};
    r.table.rows.push_back({v.x, r.result["family"].get<std::string>(), to_string(v.exact_sum),
                            v.main_term.to_double(), v.remainder});
    return r;
}

CommandResult cmd_series(const json& cfg, const RunOptions& opt) {
    const CosineSeries s = series_from(cfg);
    std::vector<double> ts;
    CommandResult r;
    if (cfg.contains("t") && !cfg.at("t").is_null()) {
        ts = reals(cfg, "t");
    } else {
        const TGrid g = grid_from(cfg);
        ts = g.points;
        r.streams = grid_streams(g);
    }
    const auto values = eval_many(s, ts, opt.workers);
    json pts = json::array();
    for (std::size_t i = 0; i < ts.size(); ++i) pts.push_back({{"t", ts[i]}, {"value", values[i]}});
    r.result = {{"kernels", s.kernels().size()}, {"terms", s.term_count()}, {"l1_bound", s.l1_norm()}, {"points", pts}};
    if (ts.size() == 1) r.result["error_bound"] = eval_certified(s, ts[0]).error_bound;
    r.table.columns = {"t", "value"};
    for (std::size_t i = 0; i < ts.size(); ++i) r.table.rows.push_back({ts[i], values[i]});
    r.samples = values;
    r.has_samples = true;
    return r;
}

CommandResult cmd_model_sample(const json& cfg, const RunOptions& opt) {
    const auto model = model_from(cfg);
    const auto batch = sample(model, count(cfg, "count"), count(cfg, "seed"), opt.workers);
    CommandResult r;
    const auto m1 = sample_moment(batch.values, 1), m2 = sample_moment(batch.values, 2);
    r.result = {{"count", batch.count()}, {"mean", m1.value}, {"mean_std_error", m1.std_error}, {"second_moment", m2.value},
                {"variance_exact", variance_closed_form(model.family, model.kernel_limit, model.inner_limit).value}};
    if (batch.count() <= 1000) r.result["values"] = batch.values;
    r.table.columns = {"index", "value"};
    for (std::size_t i = 0; i < batch.count(); ++i) r.table.rows.push_back({static_cast<double>(i), batch.values[i]});
    r.samples = batch.values;
    r.streams = {stream_label(Stream::model_phase)};
    r.has_samples = true;
    return r;
}

CommandResult cmd_model_moment(const json& cfg, const RunOptions& opt) {
    const auto model = model_from(cfg);
    const unsigned k = static_cast<unsigned>(count(cfg, "k"));
    const std::string method = cfg.value("method", std::string("exact"));
    MomentValue v;
    CommandResult r;
    if (method == "exact") {
        v = exact_moment(model, k);
    } else if (method == "mc") {
        const auto batch = sample(model, count(cfg, "count"), count(cfg, "seed"), opt.workers);
        v = sample_moment(batch.values, k);
        r.streams = {stream_label(Stream::model_phase)};
    } else {
        raise(ErrorKind::invalid_argument, "method must be exact or mc");
    }
    r.result = {{"order", v.order}, {"value", v.value}, {"method", std::string(to_string(v.method))},
                {"error_bound", v.error_bound}, {"std_error", v.std_error}};
    r.table.columns = {"k", "value", "method", "error_bound"};
    r.table.rows.push_back({static_cast<double>(v.order), v.value, std::string(to_string(v.method)), v.error_bound});
    return r;
}

CommandResult cmd_model_transform(const json& cfg, const RunOptions&) {
    const auto model = model_from(cfg);
    TransformOptions topt;
    if (cfg.contains("lambda_cap")) topt.lambda_cap = real(cfg, "lambda_cap");
    TransformEngine engine(build_model(model), topt);
    CommandResult r;
    r.table.columns = {"kind", "argument", "re", "im", "log_value"};
    json lap = json::array(), cf = json::array();
    if (cfg.contains("lambda") && !cfg.at("lambda").is_null()) {
        for (double l : reals(cfg, "lambda")) {
            const double lv = engine.log_laplace(l);
            lap.push_back({{"lambda", l}, {"value", finite_or_null(std::exp(lv))}, {"log_value", lv}});
            r.table.rows.push_back({std::string("laplace"), l, std::exp(lv), 0.0, lv});
        }
    }
    if (cfg.contains("alpha") && !cfg.at("alpha").is_null()) {
        for (double a : reals(cfg, "alpha")) {
            const auto c = engine.char_fn(a);
            cf.push_back({{"alpha", a}, {"re", c.real()}, {"im", c.imag()}});
            r.table.rows.push_back({std::string("char_fn"), a, c.real(), c.imag(), std::log(std::abs(c))});
        }
    }
    if (lap.empty() && cf.empty()) raise(ErrorKind::invalid_argument, "model transform: give lambda and/or alpha values");
    r.result = {{"laplace", lap},
                {"char_fn", cf},
                {"tail_variance", std::max(0.0, full_variance(model.family) - engine.series().variance())}};
    return r;
}

struct FamilyPhase {
    DoubleDouble alpha;
    double beta;
};

CommandResult cmd_experiment_moments(const json& cfg, const RunOptions& opt) {
    const Family fam = family(cfg);
    const auto fc = family_constants(fam);
    const std::uint64_t M = count(cfg, "M");
    const double T = real(cfg, "T");
    const std::string weights_kind = cfg.value("weights", std::string("ones"));
    std::vector<double> w(M);
    for (std::uint64_t m = 1; m <= M; ++m) {
        if (weights_kind == "ones")
            w[m - 1] = 1.0;
        else if (weights_kind == "alternating")
            w[m - 1] = m % 2 ? -1.0 : 1.0;
        else
            raise(ErrorKind::invalid_argument, "weights must be ones or alternating");
    }
    const auto strategy = parse_grid_strategy(cfg.value("strategy", std::string("midpoint")));
    const TGrid g = t_grid(T, count(cfg, "grid_count"), strategy, CounterRng(count(cfg, "seed")).split(grid_label).seed());
    CommandResult r;
    r.streams = grid_streams(g);
    json rows = json::array();
    r.table.columns = {"h", "empirical", "exact", "difference", "M_admissible", "h_admissible"};
    std::vector<double> hs = reals(cfg, "h");
    for (double hd : hs) {
        if (hd < 1 || hd != std::floor(hd)) raise(ErrorKind::invalid_argument, "h must be a positive integer");
        const auto rep = moment_match_report(w, fc.frequency, fc.phase, T, static_cast<unsigned>(hd), g, opt.workers);
        rows.push_back({{"h", rep.h},
                        {"empirical", rep.empirical},
                        {"exact", rep.exact_model},
                        {"difference", rep.difference},
                        {"M_limit", rep.M_limit},
                        {"h_limit", rep.h_limit},
                        {"M_admissible", rep.M_admissible},
                        {"h_admissible", rep.h_admissible}});
        r.table.rows.push_back({static_cast<double>(rep.h), rep.empirical, rep.exact_model, rep.difference,
                                std::string(rep.M_admissible ? "true" : "false"),
                                std::string(rep.h_admissible ? "true" : "false")});
    }
    r.result = {{"alpha0", fc.frequency.to_double()}, {"beta0", fc.phase}, {"grid_count", g.points.size()},
                {"strategy", std::string(to_string(g.strategy))}, {"moments", rows}};
    if (rows.size() == 1) {
        r.result["empirical"] = rows[0]["empirical"];
        r.result["exact"] = rows[0]["exact"];
        r.result["difference"] = rows[0]["difference"];
    }
    return r;
}

/// F_N over the grid and the random model at the same truncation.
struct Paired {
    CosineSeries series;
    TGrid grid;
    std::vector<double> deterministic;
    std::vector<double> model;
};

Paired paired_samples(const json& cfg, const RunOptions& opt, bool want_model) {
    Paired p;
    p.series = series_from(cfg);
    p.grid = grid_from(cfg);
    p.deterministic = eval_many(p.series, p.grid.points, opt.workers);
    if (want_model) {
        const std::uint64_t seed = CounterRng(count(cfg, "seed")).split(model_label).seed();
        p.model = sample_series(p.series, seed, 0, p.grid.points.size(), opt.workers);
    }
    return p;
}

CommandResult cmd_experiment_cdf(const json& cfg, const RunOptions& opt) {
    const Paired p = paired_samples(cfg, opt, true);
    const double R = cfg.contains("R") ? real(cfg, "R") : 5.0;
    const auto nodes = cfg.contains("nodes") ? count(cfg, "nodes") : 1000;
    const auto rep = discrepancy_report(p.deterministic, p.model, R, nodes);
    CommandResult r;
    r.streams = grid_streams(p.grid);
    r.streams.push_back(stream_label(Stream::model_phase));
    r.result = {{"ks_distance", rep.ks_value},
                {"count_series", rep.count_a},
                {"count_model", rep.count_b},
                {"berry_esseen_bound", rep.berry_esseen_rhs},
                {"R", rep.R},
                {"terms", p.series.term_count()}};
    const ECDF a = empirical_cdf(p.deterministic), b = empirical_cdf(p.model);
    const double lo = std::min(a.values().front(), b.values().front());
    const double hi = std::max(a.values().back(), b.values().back());
    r.table.columns = {"u", "ecdf_series", "ecdf_model"};
    for (int i = 0; i <= 200; ++i) {
        const double u = lo + (hi - lo) * i / 200.0;
        r.table.rows.push_back({u, a(u), b(u)});
    }
    return r;
}

CommandResult cmd_experiment_laplace(const json& cfg, const RunOptions& opt) {
    const Paired p = paired_samples(cfg, opt, false);
    const double C3 = cfg.contains("C3") ? real(cfg, "C3") : 10.0;
    const auto clip = paper_clip_threshold(real(cfg, "T"), C3);
    TransformEngine engine(p.series);
    CommandResult r;
    r.streams = grid_streams(p.grid);
    json rows = json::array();
    r.table.columns = {"lambda", "empirical", "model", "relative_difference", "excluded_fraction"};
    for (double l : reals(cfg, "lambda")) {
        const auto c = clipped_laplace(p.deterministic, l, clip.V);
        const double model = engine.laplace(l);
        const double rel = c.value / model - 1.0;
        rows.push_back({{"lambda", l}, {"empirical", c.value}, {"model", model}, {"relative_difference", rel},
                        {"excluded_fraction", c.excluded_fraction}});
        r.table.rows.push_back({l, c.value, model, rel, c.excluded_fraction});
    }
    r.result = {{"K", clip.K}, {"V", clip.V}, {"C3", C3}, {"rows", rows}};
    return r;
}

CommandResult cmd_experiment_tails(const json& cfg, const RunOptions& opt) {
    const auto model = model_from(cfg);
    const CosineSeries s = build_model(model);
    const double cap = cfg.contains("lambda_cap") ? real(cfg, "lambda_cap") : 32.0;
    TransformOptions topt;
    topt.lambda_cap = cap;
    TransformEngine engine(s, topt);
    const auto grid = default_lambda_grid(cap);
    const auto curve = model_curve(engine, grid);
    const auto samples = sample_series(s, count(cfg, "seed"), 0, count(cfg, "count"), opt.workers);
    const auto Vs = reals(cfg, "V");
    const double b = cfg.contains("b") ? real(cfg, "b") : 1.0;
    const auto rep = tail_report(curve, samples, Vs, model.family, b);
    CommandResult r;
    r.streams = {stream_label(Stream::model_phase)};
    json rows = json::array();
    r.table.columns = {"V", "chernov", "pz", "mc", "mc_ci", "reference"};
    std::vector<double> fitV, fitP;
    for (const auto& row : rep.rows) {
        rows.push_back({{"V", row.V}, {"chernov", row.chernov}, {"pz", finite_or_null(row.pz)}, {"mc", row.mc},
                        {"mc_std_error", row.mc_std_error}, {"mc_ci", 1.96 * row.mc_std_error},
                        {"reference", finite_or_null(row.reference)}});
        r.table.rows.push_back({row.V, row.chernov, row.pz, row.mc, 1.96 * row.mc_std_error, row.reference});
        if (row.V >= 1.5 && row.V <= 3.0) {
            fitV.push_back(row.V);
            fitP.push_back(row.mc);
        }
    }
    r.result = {{"family", std::string(to_string(model.family))}, {"lambda_cap", cap}, {"rows", rows}};
    try {
        r.result["fitted_exponent"] = fit_exponent(fitV, fitP);
    } catch (const Error&) {
        r.result["fitted_exponent"] = nullptr;
    }
    return r;
}

CommandResult cmd_independence_verify(const json& cfg, const RunOptions& opt) {
    VerifyOptions vo;
    vo.workers = opt.workers;
    const auto v = exhaustive_verify(count(cfg, "M"), static_cast<unsigned>(count(cfg, "m")), vo);
    CommandResult r;
    const json cert = {{"tuple", terms_json(v.argmin)},
                       {"interval", {{"lower", v.min_nonzero.lower}, {"upper", v.min_nonzero.upper}}},
                       {"precision_bits", v.min_nonzero.precision_bits}};
    r.result = {{"M", v.M},
                {"m", v.m},
                {"min_nonzero", v.min_nonzero.approx},
                {"bound", static_cast<double>(v.bound.value)},
                {"bound_log", v.bound.log_value},
                {"bound_upper", v.bound_upper},
                {"holds", v.holds},
                {"sums_enumerated", v.sums_enumerated},
                {"exact_zeros", v.exact_zeros},
                {"refined", v.refined},
                {"certificate", cert}};
    r.table.columns = {"M", "m", "min_lower", "min_upper", "bound_upper", "holds", "tuple"};
    r.table.rows.push_back({static_cast<double>(v.M), static_cast<double>(v.m), v.min_nonzero.lower, v.min_nonzero.upper,
                            v.bound_upper, std::string(v.holds ? "true" : "false"), terms_text(v.argmin)});
    return r;
}

CommandResult cmd_independence_search(const json& cfg, const RunOptions&) {
    const std::uint64_t M = count(cfg, "M");
    const unsigned m = static_cast<unsigned>(count(cfg, "m"));
    const auto s = near_relation_search(M, m, count(cfg, "budget"), count(cfg, "seed"));
    CommandResult r;
    r.streams = {stream_label(Stream::relation_search)};
    const auto bound = hr_lower_bound(m, M);
    r.result = {{"M", M},
                {"m", m},
                {"value", s.value.approx},
                {"evaluated", s.evaluated},
                {"exhaustive", s.exhaustive},
                {"bound", static_cast<double>(bound.value)},
                {"bound_log", bound.log_value},
                {"certificate",
                 {{"tuple", terms_json(s.tuple)},
                  {"interval", {{"lower", s.value.lower}, {"upper", s.value.upper}}},
                  {"precision_bits", s.value.precision_bits}}}};
    r.table.columns = {"M", "m", "lower", "upper", "tuple"};
    r.table.rows.push_back({static_cast<double>(M), static_cast<double>(m), s.value.lower, s.value.upper, terms_text(s.tuple)});
    return r;
}

CommandResult cmd_scan(const json& cfg, const RunOptions&) {
    const auto fam = error_family(cfg);
    const auto s = extreme_scan(real(cfg, "X"), cfg.contains("density") ? real(cfg, "density") : 1.0, fam);
    CommandResult r;
    r.result = {{"X", s.X}, {"density", s.density}, {"max", s.max}, {"argmax", s.argmax},
                {"argmax_is_left_limit", s.argmax_is_left_limit}, {"reference", s.reference}, {"points", s.points},
                {"ratio", s.max / s.reference}};
    r.table.columns = {"X", "density", "max", "argmax", "reference"};
    r.table.rows.push_back({s.X, s.density, s.max, s.argmax, s.reference});
    return r;
}

SieveCache cache_from(const json&) { return SieveCache(SieveCache::default_root()); }

CommandResult cache_listing(const SieveCache& cache) {
    CommandResult r;
    json tables = json::array();
    r.table.columns = {"kind", "limit", "bytes", "path"};
    for (const auto& e : cache.status()) {
        const std::string kind = e.kind == TableKind::divisor ? "divisor" : "two-squares";
        tables.push_back({{"kind", kind}, {"limit", e.limit}, {"bytes", e.bytes}, {"path", e.path.string()}});
        r.table.rows.push_back({kind, static_cast<double>(e.limit), static_cast<double>(e.bytes), e.path.string()});
    }
    r.result = {{"root", cache.root().string()}, {"tables", tables}, {"count", tables.size()}};
    return r;
}

CommandResult cmd_cache_status(const json& cfg, const RunOptions&) { return cache_listing(cache_from(cfg)); }

CommandResult cmd_cache_clear(const json& cfg, const RunOptions&) {
    auto cache = cache_from(cfg);
    const auto removed = cache.clear();
    auto r = cache_listing(cache);
    r.result["removed"] = removed;
    return r;
}

CommandResult cmd_cache_build(const json& cfg, const RunOptions&) {
    auto cache = cache_from(cfg);
    const std::uint64_t limit = count(cfg, "limit");
    if (limit == 0) raise(ErrorKind::invalid_argument, "cache build: limit must be >= 1");
    cache.build(limit);
    return cache_listing(cache);
}

using Handler = std::function<CommandResult(const json&, const RunOptions&)>;

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h = {
        {"error-term", cmd_error_term},
        {"series", cmd_series},
        {"model sample", cmd_model_sample},
        {"model moment", cmd_model_moment},
        {"model transform", cmd_model_transform},
        {"experiment moments", cmd_experiment_moments},
        {"experiment cdf", cmd_experiment_cdf},
        {"experiment laplace", cmd_experiment_laplace},
        {"experiment tails", cmd_experiment_tails},
        {"independence verify", cmd_independence_verify},
        {"independence search", cmd_independence_search},
        {"scan", cmd_scan},
        {"cache status", cmd_cache_status},
        {"cache clear", cmd_cache_clear},
        {"cache build", cmd_cache_build},
    };
    return h;
}

}  // namespace

CommandResult run_command(const json& config, const RunOptions& options) {
    if (!config.is_object()) raise(ErrorKind::invalid_argument, "config must be a JSON object");
    const std::string name = text(config, "command");
    const auto it = handlers().find(name);
    if (it == handlers().end()) raise(ErrorKind::invalid_argument, "unknown command '" + name + "'");
    return it->second(config, options);
}

std::vector<std::string> command_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : handlers()) names.push_back(k);
    return names;
}

}  // namespace etlab::harness
