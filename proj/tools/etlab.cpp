// etlab: command-line front end for the error-term lab.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <etlab/error.hpp>

#include "etlab_harness/commands.hpp"
#include "etlab_harness/output.hpp"
#include "etlab_harness/sample_store.hpp"

namespace {

using etlab::harness::json;

enum class Kind { real, integer, list, text, flag };

struct OptionSpec {
    const char* key;
    Kind kind;
    json fallback;  // `required` marks a mandatory option; null means optional with no default
    const char* help;
};

struct CommandSpec {
    const char* path;  // "model sample"
    const char* help;
    std::vector<OptionSpec> options;
    const char* positional = nullptr;  // key taking the first positional argument
};

const json required = json(json::value_t::discarded);

std::vector<CommandSpec> command_table() {
    return {
        {"error-term", "exact summatory sum, main term and remainder at x",
         {{"family", Kind::text, required, "divisor | circle"},
          {"x", Kind::real, required, "evaluation point"},
          {"left_limit", Kind::flag, false, "value just before x (jump points)"}}},
        {"series", "evaluate the truncated series F_N(t) / P_N(t)",
         {{"family", Kind::text, required, "divisor | circle | zeta2"},
          {"N", Kind::integer, required, "kernel limit"},
          {"inner", Kind::integer, nullptr, "inner limit (circle Q)"},
          {"t", Kind::list, nullptr, "points (comma separated); otherwise a grid on [T, 2T]"},
          {"T", Kind::real, 1e8, "grid start"},
          {"count", Kind::integer, 1000, "grid size"},
          {"strategy", Kind::text, "stratified", "stratified | uniform | midpoint"},
          {"seed", Kind::integer, 0, "random seed"}}},
        {"model sample", "draw samples of the random model",
         {{"family", Kind::text, required, "divisor | circle | zeta2"},
          {"N", Kind::integer, required, "kernel limit"},
          {"L", Kind::integer, required, "inner limit"},
          {"count", Kind::integer, 10000, "number of samples"},
          {"seed", Kind::integer, 0, "random seed"}}},
        {"model moment", "k-th moment of the random model",
         {{"family", Kind::text, required, "divisor | circle | zeta2"},
          {"N", Kind::integer, required, "kernel limit"},
          {"L", Kind::integer, required, "inner limit"},
          {"k", Kind::integer, required, "moment order"},
          {"method", Kind::text, "exact", "exact | mc"},
          {"count", Kind::integer, 1000000, "samples for mc"},
          {"seed", Kind::integer, 0, "random seed"}}},
        {"model transform", "Laplace transform and characteristic function of the model",
         {{"family", Kind::text, required, "divisor | circle | zeta2"},
          {"N", Kind::integer, required, "kernel limit"},
          {"L", Kind::integer, required, "inner limit"},
          {"lambda", Kind::list, nullptr, "Laplace arguments"},
          {"alpha", Kind::list, nullptr, "characteristic function arguments"},
          {"lambda_cap", Kind::real, 64.0, "largest admissible lambda"}}},
        {"experiment moments", "empirical vs exact moments of a weighted cosine sum",
         {{"family", Kind::text, required, "divisor | circle | zeta2"},
          {"T", Kind::real, required, "window [T, 2T]"},
          {"M", Kind::integer, required, "number of terms"},
          {"h", Kind::list, required, "moment orders"},
          {"weights", Kind::text, "ones", "ones | alternating"},
          {"grid_count", Kind::integer, 1000000, "quadrature points"},
          {"strategy", Kind::text, "midpoint", "stratified | uniform | midpoint"},
          {"seed", Kind::integer, 0, "random seed"}}},
        {"experiment cdf", "KS distance between F_N(t) and the matched model",
         {{"family", Kind::text, required, "divisor | circle | zeta2"},
          {"T", Kind::real, required, "window [T, 2T]"},
          {"N", Kind::integer, required, "kernel limit"},
          {"inner", Kind::integer, nullptr, "inner limit (circle Q)"},
          {"count", Kind::integer, 100000, "points and model samples"},
          {"strategy", Kind::text, "stratified", "stratified | uniform | midpoint"},
          {"R", Kind::real, 5.0, "smoothing cutoff"},
          {"nodes", Kind::integer, 1000, "quadrature nodes for the smoothing bound"},
          {"seed", Kind::integer, 0, "random seed"}}},
        {"experiment laplace", "clipped empirical Laplace transform vs the model",
         {{"family", Kind::text, required, "divisor | circle | zeta2"},
          {"T", Kind::real, required, "window [T, 2T]"},
          {"N", Kind::integer, required, "kernel limit"},
          {"inner", Kind::integer, nullptr, "inner limit (circle Q)"},
          {"lambda", Kind::list, required, "Laplace arguments"},
          {"count", Kind::integer, 100000, "grid points"},
          {"strategy", Kind::text, "stratified", "stratified | uniform | midpoint"},
          {"C3", Kind::real, 10.0, "clipping constant"},
          {"seed", Kind::integer, 0, "random seed"}}},
        {"experiment tails", "Chernoff / Paley-Zygmund / MC tail table",
         {{"family", Kind::text, required, "divisor | circle | zeta2"},
          {"N", Kind::integer, required, "kernel limit"},
          {"L", Kind::integer, required, "inner limit"},
          {"V", Kind::list, required, "thresholds"},
          {"count", Kind::integer, 1000000, "MC samples"},
          {"lambda_cap", Kind::real, 32.0, "largest lambda on the curve"},
          {"b", Kind::real, 1.0, "reference curve constant"},
          {"seed", Kind::integer, 0, "random seed"}}},
        {"independence verify", "certified minimum of nonzero signed radical sums",
         {{"M", Kind::integer, required, "largest radicand"}, {"m", Kind::integer, required, "terms per side"}}},
        {"independence search", "search for near-relations among square roots",
         {{"M", Kind::integer, required, "largest radicand"},
          {"m", Kind::integer, required, "terms per side"},
          {"budget", Kind::integer, 100000, "tuples to evaluate"},
          {"seed", Kind::integer, 0, "random seed"}}},
        {"scan", "largest error term over [X, 2X] and its ratio to the extreme-value reference",
         {{"family", Kind::text, required, "divisor | circle"},
          {"X", Kind::real, required, "scan start"},
          {"density", Kind::real, 1.0, "grid points per unit"}}},
        {"cache status", "list sieve tables in the cache", {}},
        {"cache clear", "remove all sieve tables", {}},
        {"cache build", "precompute both sieves", {{"limit", Kind::integer, required, "sieve limit"}}, "limit"},
    };
}

int exit_code_for(etlab::ErrorKind k) { return k == etlab::ErrorKind::invalid_argument ? 2 : 3; }

int fail(const std::string& kind, const std::string& message, int code) {
    std::cerr << json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}}.dump() << "\n";
    return code;
}

/// "1e6" is fine for counts as long as it is integral.
json parse_number(const std::string& key, const std::string& raw, bool integral) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(raw, &pos);
    } catch (const std::exception&) {
        etlab::raise(etlab::ErrorKind::invalid_argument, "--" + key + ": not a number: " + raw);
    }
    if (pos != raw.size() || !std::isfinite(v))
        etlab::raise(etlab::ErrorKind::invalid_argument, "--" + key + ": not a number: " + raw);
    if (!integral) return v;
    if (v < 0 || v != std::floor(v) || v >= 1.8446744073709552e19)
        etlab::raise(etlab::ErrorKind::invalid_argument, "--" + key + ": expected a nonnegative integer: " + raw);
    // stod loses digits past 2^53; reparse plain integers exactly.
    if (raw.find_first_not_of("0123456789") == std::string::npos) return std::stoull(raw);
    return static_cast<std::uint64_t>(v);
}

struct Bound {
    const CommandSpec* spec = nullptr;
    CLI::App* app = nullptr;
    std::map<std::string, std::string> scalars;
    std::map<std::string, std::vector<std::string>> lists;
    std::map<std::string, bool> flags;
};

json resolve(Bound& b) {
    json cfg = {{"command", b.spec->path}};
    for (const auto& o : b.spec->options) {
        const std::string key = o.key;
        const bool positional = b.spec->positional && key == b.spec->positional;
        const bool given = b.app->count(positional ? key : "--" + key) > 0;
        if (o.kind == Kind::flag) {
            cfg[key] = b.flags[key];
            continue;
        }
        if (!given) {
            if (o.fallback.is_discarded())
                etlab::raise(etlab::ErrorKind::invalid_argument, "--" + key + " is required");
            cfg[key] = o.fallback;
            continue;
        }
        switch (o.kind) {
            case Kind::real: cfg[key] = parse_number(key, b.scalars[key], false); break;
            case Kind::integer: cfg[key] = parse_number(key, b.scalars[key], true); break;
            case Kind::text: cfg[key] = b.scalars[key]; break;
            case Kind::list: {
                json a = json::array();
                for (const auto& s : b.lists[key]) a.push_back(parse_number(key, s, false));
                cfg[key] = a;
                break;
            }
            case Kind::flag: break;
        }
    }
    return cfg;
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) etlab::raise(etlab::ErrorKind::io, "cannot open " + path + " for writing");
    out << body;
    if (!out) etlab::raise(etlab::ErrorKind::io, "write failed: " + path);
}

int emit(const json& config, const etlab::harness::CommandResult& r, const std::string& format, const std::string& output) {
    using namespace etlab::harness;
    const json report = make_report(config, r.result, r.streams);
    if (format == "json") {
        if (output.empty())
            std::cout << report.dump(2) << "\n";
        else
            write_text(output, report.dump(2) + "\n");
    } else if (format == "csv") {
        std::ostringstream os;
        write_csv(os, r.table);
        if (output.empty()) {
            std::cout << os.str();
        } else {
            write_text(output, os.str());
            write_text(output + ".json", report.dump(2) + "\n");
        }
    } else if (format == "bin") {
        if (!r.has_samples) etlab::raise(etlab::ErrorKind::invalid_argument, "--format bin: command produces no samples");
        if (output.empty()) etlab::raise(etlab::ErrorKind::invalid_argument, "--format bin needs --output <base>");
        SampleStore store;
        store.config = config;
        store.seed = config.value("seed", std::uint64_t{0});
        store.streams = r.streams;
        store.values = r.samples;
        const auto manifest = write_sample_store(output, store);
        std::cout << json{{"manifest", manifest.string()}, {"count", store.values.size()}}.dump() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"etlab: error terms of the divisor and circle problems versus their random models"};
    app.require_subcommand(1);
    // `-h` would collide with the moment-order option --h.
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", std::string(etlab::harness::tool_version));

    std::string format = "json", output;
    unsigned workers = 0;
    auto add_globals = [&](CLI::App* a) {
        a->add_option("--format", format, "csv | json | bin")->check(CLI::IsMember({"csv", "json", "bin"}));
        a->add_option("--output", output, "output file (csv/json) or store base path (bin)");
        a->add_option("--workers", workers, "worker threads, 0 = all cores");
    };

    const auto table = command_table();
    std::vector<std::unique_ptr<Bound>> bound;
    std::map<std::string, CLI::App*> groups;
    for (const auto& spec : table) {
        const std::string path = spec.path;
        CLI::App* parent = &app;
        std::string leaf = path;
        if (const auto sp = path.find(' '); sp != std::string::npos) {
            const std::string group = path.substr(0, sp);
            leaf = path.substr(sp + 1);
            if (!groups.count(group)) {
                groups[group] = app.add_subcommand(group, group + " subcommands");
                groups[group]->require_subcommand(1);
            }
            parent = groups[group];
        }
        auto b = std::make_unique<Bound>();
        b->spec = &spec;
        b->app = parent->add_subcommand(leaf, spec.help);
        add_globals(b->app);
        for (const auto& o : spec.options) {
            const std::string flag = "--" + std::string(o.key);
            std::string help = o.help;
            if (!o.fallback.is_null() && !o.fallback.is_discarded() && o.kind != Kind::flag) help += " [default: " + o.fallback.dump() + "]";
            switch (o.kind) {
                case Kind::flag: b->app->add_flag(flag, b->flags[o.key], help); break;
                case Kind::list: b->app->add_option(flag, b->lists[o.key], help)->delimiter(',')->expected(1, -1); break;
                default:
                    if (spec.positional && std::string(o.key) == spec.positional)
                        b->app->add_option(o.key, b->scalars[o.key], help);
                    else
                        b->app->add_option(flag, b->scalars[o.key], help);
            }
        }
        bound.push_back(std::move(b));
    }

    std::string config_path;
    CLI::App* run = app.add_subcommand("run", "re-run a config (or a previous JSON report)");
    run->add_option("--config", config_path, "JSON file")->required();
    add_globals(run);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), 2);
    }

    try {
        json config;
        if (run->parsed()) {
            std::ifstream in(config_path);
            if (!in) etlab::raise(etlab::ErrorKind::invalid_argument, "cannot read config " + config_path);
            try {
                config = json::parse(in);
            } catch (const json::exception& e) {
                etlab::raise(etlab::ErrorKind::invalid_argument, std::string("config is not valid JSON: ") + e.what());
            }
            if (config.contains("config") && config.contains("tool")) config = config.at("config");
            if (!config.is_object()) etlab::raise(etlab::ErrorKind::invalid_argument, "config must be an object");
            // Flags given to `run` override the stored ones.
            if (run->count("--format")) config["format"] = format;
            if (run->count("--output")) config["output"] = output;
            format = config.value("format", std::string("json"));
            output = config.value("output", std::string());
            if (format != "csv" && format != "json" && format != "bin")
                etlab::raise(etlab::ErrorKind::invalid_argument, "format must be csv, json or bin");
        } else {
            Bound* chosen = nullptr;
            for (auto& b : bound)
                if (b->app->parsed()) chosen = b.get();
            config = resolve(*chosen);
            config["format"] = format;
            config["output"] = output;
        }
        const auto result = etlab::harness::run_command(config, {workers});
        return emit(config, result, format, output);
    } catch (const etlab::Error& e) {
        return fail(std::string(etlab::to_string(e.kind())), e.what(), exit_code_for(e.kind()));
    } catch (const json::exception& e) {
        return fail("invalid_argument", e.what(), 2);
    } catch (const std::bad_alloc&) {
        return fail("resource", "out of memory", 3);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 3);
    }
}
