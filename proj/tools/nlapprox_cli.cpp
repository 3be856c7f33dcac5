// nlapprox: construct, measure and cost-model ReLU approximants.
//
//   nlapprox construct --target cone --d 1 --alpha 1 --N 4 --out net.json
//   nlapprox sweep --target cone --d 1 --N 2 4 8 16 --out sweep.csv
//   nlapprox cost --d 2 --N 8 16 32 --out cost.csv
//   nlapprox check [--suite lemma2 --m 4 --n 4]
//   nlapprox eval --network net.json < points.txt
//
// Every subcommand also accepts --config FILE.json; flags given on the
// command line override values from the file.

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nlapprox/checks.hpp"
#include "nlapprox/costmodel.hpp"
#include "nlapprox/errors.hpp"
#include "nlapprox/metrics.hpp"
#include "nlapprox/network.hpp"
#include "nlapprox/theorem.hpp"
#include "nlapprox/version.hpp"

namespace {

using namespace nlapprox;
using nlohmann::ordered_json;

enum Exit : int { kOk = 0, kPropertyFailure = 1, kUsage = 2, kInfeasible = 3 };

// Errors at or below this are reported as exact zeros by sweep.
constexpr double kZeroError = 1e-12;

// JSON config files for CLI11: nested objects become option sections, arrays
// become repeated values. The file is read by the top-level app, so top-level
// keys are routed to whichever subcommand was selected.
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(const CLI::App* root) : root_(root) {}

    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}\n"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        try {
            input >> j;
        } catch (const nlohmann::json::parse_error& e) {
            throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) {
            throw CLI::ConversionError("config must be a JSON object");
        }
        std::vector<CLI::ConfigItem> items;
        std::vector<std::string> parents;
        if (root_ && !root_->get_subcommands().empty()) parents.push_back(root_->get_subcommands().front()->get_name());
        collect(j, "", parents, items);
        return items;
    }

private:
    const CLI::App* root_;

    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        throw CLI::ConversionError("config values must be strings, numbers, booleans or arrays of those");
    }

    static void collect(const nlohmann::json& j, const std::string& name, std::vector<std::string> parents,
                        std::vector<CLI::ConfigItem>& out) {
        if (j.is_object()) {
            if (!name.empty()) parents.push_back(name);
            for (auto it = j.begin(); it != j.end(); ++it) collect(*it, it.key(), parents, out);
            return;
        }
        CLI::ConfigItem item;
        item.name = name;
        item.parents = std::move(parents);
        if (j.is_array()) {
            for (const auto& v : j) item.inputs.push_back(scalar(v));
        } else {
            item.inputs.push_back(scalar(j));
        }
        out.push_back(std::move(item));
    }
};

ordered_json tool_json() { return {{"name", kToolName}, {"version", kVersion}}; }

std::string tool_banner() { return std::string(kToolName) + " " + kVersion; }

void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw ResourceError("cannot open '" + path + "' for writing");
    }
    os << text;
    if (!os) {
        throw ResourceError("failed writing '" + path + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw ResourceError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// Numbers in echoed configs go through format_real so that the files are
// byte-stable and locale independent.
ordered_json real(double v) { return ordered_json::parse(std::isfinite(v) ? format_real(v) : "null"); }

// Shared by construct and sweep.
struct TargetOptions {
    std::string target = "cone";
    std::size_t d = 1;
    double alpha = 1.0;
    double nu = 1.0;
    std::string delta_mode = "empirical-shrink";
    std::optional<double> delta_target;
    double delta_floor = 1e-12;
    std::size_t grid_points = 0;  // per axis; 0 selects the default for d
    std::uint64_t seed = 20240611;

    void add_to(CLI::App* app) {
        app->add_option("--target", target, "Target family: cone, linear, zero")->capture_default_str();
        app->add_option("--d", d, "Input dimension")->capture_default_str();
        app->add_option("--alpha", alpha, "Hoelder exponent in (0,1]")->capture_default_str();
        app->add_option("--nu", nu, "Hoelder constant")->capture_default_str();
        app->add_option("--delta-mode", delta_mode, "paper-sufficient or empirical-shrink")->capture_default_str();
        app->add_option("--delta-target", delta_target, "Sliver error budget (default: construction's own)");
        app->add_option("--delta-floor", delta_floor, "Smallest admissible delta")->capture_default_str();
        app->add_option("--grid-points", grid_points, "Quadrature points per axis (0 = default for d)")
            ->capture_default_str();
        app->add_option("--seed", seed, "Seed for the Hoelder spot check")->capture_default_str();
    }

    DeltaPolicy policy() const {
        DeltaPolicy p;
        p.mode = delta_mode_from_string(delta_mode);
        p.target = delta_target;
        p.floor = delta_floor;
        return p;
    }

    GridSpec grid() const {
        GridSpec g = default_grid(d);
        if (grid_points) g.points_per_axis = grid_points;
        return g;
    }

    ordered_json to_json() const {
        ordered_json j;
        j["target"] = target;
        j["d"] = d;
        j["alpha"] = real(alpha);
        j["nu"] = real(nu);
        j["delta_mode"] = delta_mode;
        j["delta_target"] = delta_target ? real(*delta_target) : ordered_json(nullptr);
        j["delta_floor"] = real(delta_floor);
        j["grid_points_per_axis"] = grid().points_per_axis;
        j["seed"] = seed;
        return j;
    }
};

struct Measured {
    Approximant approximant;
    double l1 = 0.0;
    double linf = 0.0;
};

Measured construct_and_measure(const HolderTarget& t, std::size_t N, const TargetOptions& o) {
    Approximant ap = construct(t, N, o.policy());
    const GridSpec g = o.grid();
    const double l1 = l1_error(t.f, ap.net, g);
    const double linf = linf_error(t.f, ap.net, g);
    return {std::move(ap), l1, linf};
}

ordered_json error_record(const std::string& kind, const std::string& message) {
    return {{"error", kind}, {"message", message}};
}

int run_construct(TargetOptions& o, std::size_t N, const std::string& out) {
    const HolderTarget t = holder_family(o.target, o.d, o.alpha, o.nu);
    const std::string meta_path = out + ".meta.json";
    ordered_json meta;
    meta["tool"] = tool_json();
    meta["command"] = "construct";
    ordered_json cfg = o.to_json();
    cfg["N"] = N;
    cfg["out"] = out;
    meta["config"] = cfg;

    const HolderSpotCheck spot = spot_check_holder(t, 1000, o.seed);
    if (spot.violations) {
        std::cerr << "warning: " << spot.violations << " of " << spot.pairs
                  << " sampled pairs violate the Hoelder certificate\n";
    }
    meta["holder_spot_check"] = {{"pairs", spot.pairs}, {"violations", spot.violations},
                                 {"worst_ratio", real(spot.worst_ratio)}};

    std::optional<Measured> m;
    try {
        m.emplace(construct_and_measure(t, N, o));
    } catch (const InfeasibleError& e) {
        meta["result"] = error_record("construction-infeasible", e.what());
        meta["result"]["achieved"] = real(e.achieved());
        write_file(meta_path, meta.dump(2) + "\n");
        std::cerr << meta["result"].dump() << "\n";
        return kInfeasible;
    } catch (const ResolutionError& e) {
        meta["result"] = error_record("construction-infeasible", e.what());
        write_file(meta_path, meta.dump(2) + "\n");
        std::cerr << meta["result"].dump() << "\n";
        return kInfeasible;
    }

    const Approximant& ap = m->approximant;
    write_file(out, serialize(ap.net));
    const bool fits = ap.net.widths().fits_within(ap.width_limit);
    const bool within = m->l1 <= ap.bound;
    meta["result"] = {
        {"widthvec", ap.net.widths().widths()},
        {"width_limit", ap.width_limit.widths()},
        {"parameter_count", ap.net.parameter_count()},
        {"delta", real(ap.delta.delta)},
        {"delta_clamped", ap.delta.clamped},
        {"delta_iterations", ap.delta.iterations},
        {"bound", real(ap.bound)},
        {"l1", real(m->l1)},
        {"linf", real(m->linf)},
        {"within_bound", within},
        {"widths_fit", fits},
    };
    if (ap.grid_n) meta["result"]["cells_per_axis"] = ap.grid_n;
    write_file(meta_path, meta.dump(2) + "\n");
    std::cout << "widthvec " << ap.net.widths().to_string() << "  l1 " << format_real(m->l1) << "  bound "
              << format_real(ap.bound) << (within ? "  ok" : "  EXCEEDS BOUND") << "\n";
    if (ap.delta.clamped) {
        std::cerr << "warning: paper-sufficient delta is below the floor; clamped to " << format_real(ap.delta.delta)
                  << "\n";
    }
    return within && fits ? kOk : kPropertyFailure;
}

int run_sweep(TargetOptions& o, const std::vector<std::size_t>& Ns, const std::string& out, std::string summary) {
    if (Ns.size() < 3) {
        throw CLI::ValidationError("--N", "sweep needs at least three values of N");
    }
    const HolderTarget t = holder_family(o.target, o.d, o.alpha, o.nu);
    (void)o.grid().total_points();
    if (summary.empty()) summary = out + ".summary.json";

    std::vector<MeasurementRecord> rows(Ns.size());
    const auto count = static_cast<std::ptrdiff_t>(Ns.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        MeasurementRecord& r = rows[static_cast<std::size_t>(i)];
        r.name = t.name;
        r.d = t.d;
        r.alpha = t.alpha;
        r.nu = t.nu;
        r.N = Ns[static_cast<std::size_t>(i)];
        r.bound = theorem_bound(t.d, t.alpha, t.nu, r.N);
        r.l1 = r.linf = std::nan("");
        try {
            const Measured m = construct_and_measure(t, r.N, o);
            r.widthvec = m.approximant.net.widths().to_string();
            r.l1 = m.l1;
            r.linf = m.linf;
            r.delta = m.approximant.delta.delta;
            r.pass = m.l1 <= r.bound && m.approximant.net.widths().fits_within(m.approximant.width_limit);
            if (!r.pass) r.status = "bound exceeded";
        } catch (const std::exception& e) {
            r.status = e.what();
            r.pass = false;
        }
    }

    ordered_json cfg = o.to_json();
    cfg["N"] = Ns;
    cfg["out"] = out;
    cfg["summary"] = summary;

    std::ostringstream csv;
    csv << "# " << tool_banner() << " sweep\n";
    csv << "# config " << cfg.dump() << "\n";
    csv << MeasurementRecord::csv_header() << "\n";
    for (const auto& r : rows) csv << r.csv_row() << "\n";
    write_file(out, csv.str());

    std::vector<std::pair<std::size_t, double>> pairs;
    bool partial = false;
    bool has_zero = false;
    for (const auto& r : rows) {
        if (r.status != "ok" && r.status != "bound exceeded") {
            partial = true;
            continue;
        }
        if (r.l1 <= kZeroError) {
            has_zero = true;
            continue;
        }
        pairs.emplace_back(r.N, r.l1);
    }

    ordered_json s;
    s["tool"] = tool_json();
    s["command"] = "sweep";
    s["config"] = cfg;
    s["theoretical_slope"] = real(-2.0 * t.alpha / static_cast<double>(t.d));
    s["partial"] = partial;
    s["rows_passing"] = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
    s["rows"] = rows.size();
    if (has_zero || pairs.size() < 2) {
        s["rate_defined"] = false;
        s["slope"] = nullptr;
        s["rate_note"] = has_zero ? "some errors are zero to within 1e-12; a power law cannot be fitted"
                                  : "fewer than two usable rows";
    } else {
        const RateFit fit = rate_fit(pairs);
        s["rate_defined"] = true;
        s["slope"] = real(fit.slope);
        s["intercept"] = real(fit.intercept);
        s["r_squared"] = real(fit.r_squared);
    }
    write_file(summary, s.dump(2) + "\n");

    for (const auto& r : rows) {
        std::cout << "N=" << r.N << "  l1 " << format_real(r.l1) << "  bound " << format_real(r.bound) << "  "
                  << (r.pass ? "ok" : r.status) << "\n";
    }
    std::cout << "slope " << (s["slope"].is_null() ? std::string("undefined") : s["slope"].dump())
              << "  theoretical " << s["theoretical_slope"].dump() << "\n";
    return s["rows_passing"] == rows.size() ? kOk : kPropertyFailure;
}

int run_cost(const RegimeConfig& cfg, const std::string& out) {
    const std::vector<RegimeRow> rows = regime_table(cfg);
    ordered_json c;
    c["d"] = cfg.d;
    c["N"] = cfg.Ns;
    c["L"] = cfg.L;
    c["t_s"] = real(cfg.params.t_s);
    c["t_w"] = real(cfg.params.t_w);
    c["c_flop"] = real(cfg.params.c_flop);
    c["out"] = out;
    std::ostringstream csv;
    csv << "# " << tool_banner() << " cost\n";
    csv << "# config " << c.dump() << "\n";
    csv << regime_csv_header() << "\n";
    for (const auto& r : rows) csv << regime_csv_row(r) << "\n";
    write_file(out, csv.str());
    std::cout << rows.size() << " rows written to " << out << "\n";
    return kOk;
}

int run_check(const std::vector<std::string>& suites, const CheckOptions& options, const std::string& junit) {
    std::vector<std::string> chosen = suites.empty() ? check_suite_names() : suites;
    const auto known = check_suite_names();
    for (const auto& s : chosen) {
        if (std::find(known.begin(), known.end(), s) == known.end()) {
            std::cerr << "error: unknown suite '" << s << "'\n";
            return kUsage;
        }
    }
    std::vector<CheckResult> all;
    for (const auto& s : chosen) {
        auto r = run_check_suite(s, options);
        all.insert(all.end(), r.begin(), r.end());
    }
    std::ostringstream xml;
    xml << junit_xml(all);
    std::string text = xml.str();
    ordered_json cfg = {{"suites", chosen}, {"seed", options.seed}};
    if (options.m) cfg["m"] = *options.m;
    if (options.n) cfg["n"] = *options.n;
    const std::string comment = "<!-- " + tool_banner() + " check config " + cfg.dump() + " -->\n";
    text.insert(text.find('\n') + 1, comment);
    write_file(junit, text);

    std::size_t failed = 0;
    for (const auto& r : all) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.suite << ": " << r.property << "  (" << r.detail << ")\n";
        failed += r.pass ? 0 : 1;
    }
    std::cout << all.size() - failed << "/" << all.size() << " properties passed\n";
    return failed ? kPropertyFailure : kOk;
}

int run_eval(const std::string& path) {
    const ReluNetwork net = deserialize(read_file(path));
    Evaluator ev(net);
    std::string line;
    std::size_t lineno = 0;
    std::vector<double> x;
    while (std::getline(std::cin, line)) {
        ++lineno;
        for (char& c : line) {
            if (c == ',') c = ' ';
        }
        std::istringstream is(line);
        is.imbue(std::locale::classic());
        x.clear();
        std::string tok;
        while (is >> tok) {
            double v = 0.0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
                std::cerr << "error: line " << lineno << ": '" << tok << "' is not a number\n";
                return kUsage;
            }
            x.push_back(v);
        }
        if (x.empty()) continue;
        if (x.size() != net.input_dim()) {
            std::cerr << "error: line " << lineno << " has " << x.size() << " values, the network takes "
                      << net.input_dim() << "\n";
            return kUsage;
        }
        for (double v : x) {
            if (!std::isfinite(v)) {
                std::cerr << "error: line " << lineno << " contains a nonfinite value\n";
                return kUsage;
            }
        }
        std::cout << format_real(ev(x)) << "\n";
    }
    return kOk;
}

void add_config(CLI::App* app) {
    app->config_formatter(std::make_shared<JsonConfig>(app));
    app->set_config("--config", "", "JSON file with option values for the subcommand; command-line flags take precedence");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constructive ReLU approximation toolkit"};
    app.set_version_flag("--version", tool_banner());
    app.require_subcommand(1);
    app.fallthrough();
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)");
    add_config(&app);

    TargetOptions construct_opts;
    std::size_t construct_N = 4;
    std::string construct_out = "network.json";
    auto* construct_cmd = app.add_subcommand("construct", "Build an approximant and write it with a metadata sidecar");
    construct_opts.add_to(construct_cmd);
    construct_cmd->add_option("--N", construct_N, "Approximation parameter N")->capture_default_str();
    construct_cmd->add_option("--out", construct_out, "Network file; metadata goes to <out>.meta.json")
        ->capture_default_str();

    TargetOptions sweep_opts;
    std::vector<std::size_t> sweep_Ns{2, 4, 8, 16};
    std::string sweep_out = "sweep.csv";
    std::string sweep_summary;
    auto* sweep_cmd = app.add_subcommand("sweep", "Measure L1 error over several N and fit the rate");
    sweep_opts.add_to(sweep_cmd);
    sweep_cmd->add_option("--N", sweep_Ns, "Values of N (at least three)")->capture_default_str();
    sweep_cmd->add_option("--out", sweep_out, "CSV output")->capture_default_str();
    sweep_cmd->add_option("--summary", sweep_summary, "Summary JSON (default <out>.summary.json)");

    RegimeConfig cost_cfg;
    std::string cost_out = "cost.csv";
    auto* cost_cmd = app.add_subcommand("cost", "Tabulate the parallel time/memory cost model");
    cost_cmd->add_option("--d", cost_cfg.d, "Input dimension")->capture_default_str();
    cost_cmd->add_option("--N", cost_cfg.Ns, "Family size parameters")->capture_default_str();
    cost_cmd->add_option("--L", cost_cfg.L, "Depth of the [N]^L family")->capture_default_str();
    cost_cmd->add_option("--ts", cost_cfg.params.t_s, "Start-up time")->capture_default_str();
    cost_cmd->add_option("--tw", cost_cfg.params.t_w, "Per-word transfer time")->capture_default_str();
    cost_cmd->add_option("--c", cost_cfg.params.c_flop, "Unit constant")->capture_default_str();
    cost_cmd->add_option("--out", cost_out, "CSV output")->capture_default_str();

    std::vector<std::string> check_suites;
    CheckOptions check_opts;
    std::size_t check_m = 0;
    std::size_t check_n = 0;
    std::string check_junit = "check-report.xml";
    auto* check_cmd = app.add_subcommand("check", "Run the property suites and write a JUnit report");
    check_cmd->add_option("--suite", check_suites, "Suites to run (default: all)");
    check_cmd->add_option("--m", check_m, "Restrict lemma2/residual suites to this m");
    check_cmd->add_option("--n", check_n, "Restrict lemma2/residual suites to this n");
    check_cmd->add_option("--seed", check_opts.seed, "Seed")->capture_default_str();
    check_cmd->add_option("--junit", check_junit, "JUnit XML output")->capture_default_str();

    std::string eval_network;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a stored network at points read from stdin");
    eval_cmd->add_option("--network", eval_network, "Network file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (*construct_cmd) return run_construct(construct_opts, construct_N, construct_out);
        if (*sweep_cmd) return run_sweep(sweep_opts, sweep_Ns, sweep_out, sweep_summary);
        if (*cost_cmd) return run_cost(cost_cfg, cost_out);
        if (*check_cmd) {
            if (check_m) check_opts.m = check_m;
            if (check_n) check_opts.n = check_n;
            return run_check(check_suites, check_opts, check_junit);
        }
        if (*eval_cmd) return run_eval(eval_network);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    } catch (const InfeasibleError& e) {
        std::cerr << error_record("construction-infeasible", e.what()).dump() << "\n";
        return kInfeasible;
    } catch (const ResolutionError& e) {
        std::cerr << error_record("construction-infeasible", e.what()).dump() << "\n";
        return kInfeasible;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
