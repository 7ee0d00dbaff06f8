#include "ssa/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "ssa/experiment.hpp"
#include "ssa/plot.hpp"
#include "ssa/serialize.hpp"

namespace ssa::cli {

namespace fs = std::filesystem;

namespace {

/// Flag combinations that are rejected before any computation.
class UsageError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "usage-error"; }
};

struct RunConfig {
    // shared
    std::string in;
    std::string out;
    std::string svg;
    std::optional<Index> K;
    std::vector<Index> breakpoints;
    std::vector<Index> lags{1};
    std::string centering = "global";
    bool verbose = false;

    // simulate
    int setting = 0;
    Index T = 0;
    std::uint64_t seed = 1;

    // ssa
    std::string method;
    Index k = 0;
    double threshold = kDefaultClassifyThreshold;

    // diagnose
    Index lag = 1;

    // screeplot
    std::string result;

    // evaluate
    std::vector<int> settings{1, 2, 3, 4};
    std::vector<std::string> methods{"sir", "save", "cor", "assa", "comb"};
    std::vector<Index> T_grid{1000, 2000, 4000, 8000, 16000};
    std::vector<Index> K_grid{2, 6, 12};
    int replicates = 100;
    unsigned threads = 0;
};

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path.string() + "'");
    f << content;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Segmentation make_segmentation(const RunConfig& c, Index T) {
    if (c.K && !c.breakpoints.empty()) throw UsageError("--K and --breakpoints are mutually exclusive");
    if (c.K) return Segmentation::equal(T, *c.K);
    if (!c.breakpoints.empty()) return Segmentation::from_breakpoints(c.breakpoints, T);
    throw UsageError("one of --K or --breakpoints is required");
}

void add_segmentation_flags(CLI::App* sub, RunConfig& c) {
    auto* k_opt = sub->add_option("--K", c.K, "number of equal-sized intervals");
    auto* b_opt = sub->add_option("--breakpoints", c.breakpoints, "interval start indices (1-based), comma separated")
                      ->delimiter(',');
    k_opt->excludes(b_opt);
}

void cmd_simulate(const RunConfig& c, std::ostream& out) {
    const auto sc = sim::make_setting(c.setting, c.T, c.seed);
    sim::write_scenario(sc, c.out);
    out << "wrote " << (fs::path(c.out) / "observed.csv").string() << " and "
        << (fs::path(c.out) / "manifest.json").string() << '\n';
}

std::string pseudo_eigen_csv(const SsaResult& r) {
    std::string s;
    for (Index j = 0; j < r.eigen_table.cols(); ++j) s += ",d" + std::to_string(j + 1);
    s += '\n';
    for (Index i = 0; i < r.eigen_table.rows(); ++i) {
        s += r.row_labels[static_cast<std::size_t>(i)];
        for (Index j = 0; j < r.eigen_table.cols(); ++j) s += ',' + format_double(r.eigen_table(i, j));
        s += '\n';
    }
    s += "sum";
    for (Index j = 0; j < r.column_sums.size(); ++j) s += ',' + format_double(r.column_sums(j));
    s += '\n';
    return s;
}

Centering parse_centering(const std::string& s) {
    if (s == "global") return Centering::Global;
    if (s == "interval") return Centering::Interval;
    throw UsageError("unknown centering '" + s + "'");
}

void cmd_ssa(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto method = parse_method(c.method);
    if (!method) throw UsageError("unknown method '" + c.method + "'");
    if (*method != Method::Comb && c.lags.size() > 1)
        throw UsageError("method " + c.method + " accepts a single lag; multiple lags need --method comb");
    const auto series = read_csv(c.in);
    const auto seg = make_segmentation(c, series.length());
    if (c.k <= 0 || c.k >= series.dim())
        throw UsageError("--k must satisfy 0 < k < p = " + std::to_string(series.dim()));

    CombSpec spec;
    spec.lags = c.lags;
    spec.centering = parse_centering(c.centering);
    const auto r = estimate(series, seg, *method, c.k, spec);
    for (const auto& w : r.warnings) err << "warning: " << w << '\n';

    Json j = to_json(r);
    if (*method == Method::Comb) {
        Json cls = Json::array();
        const auto labels = classify_components(r, c.threshold);
        for (std::size_t i = 0; i < labels.size(); ++i)
            cls.push_back({{"component", i + 1}, {"kinds", std::vector<std::string>(labels[i].begin(), labels[i].end())}});
        j["classification"] = {{"threshold", c.threshold}, {"components", std::move(cls)}};
    }
    if (c.verbose && *method == Method::Comb) {
        err << "joint diagonalization objective by sweep:";
        for (double v : r.objective_trace) err << ' ' << format_double(v);
        err << '\n';
    }

    const fs::path dir(c.out);
    write_file(dir / "result.json", j.dump(2) + "\n");
    write_file(dir / "components.csv", format_csv(transform(r, series)));
    out << "wrote " << (dir / "result.json").string() << ", " << (dir / "components.csv").string();
    if (*method == Method::Comb) {
        write_file(dir / "pseudo_eigenvalues.csv", pseudo_eigen_csv(r));
        out << ", " << (dir / "pseudo_eigenvalues.csv").string();
    }
    out << '\n';
}

void cmd_diagnose(const RunConfig& c, std::ostream& out) {
    const auto series = read_csv(c.in);
    const auto seg = make_segmentation(c, series.length());
    const auto records = interval_diagnostics(series, seg, c.lag);
    write_file(c.out, format_diagnostics_csv(records, c.lag));
    out << "wrote " << c.out << '\n';
    if (!c.svg.empty()) {
        write_file(c.svg, plot::diagnostics_svg(series, records));
        out << "wrote " << c.svg << '\n';
    }
}

void cmd_screeplot(const RunConfig& c, std::ostream& out) {
    Json j;
    try {
        j = Json::parse(read_file(c.result));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON in '") + c.result + "': " + e.what());
    }
    const auto r = result_from_json(j);
    const auto pts = screeplot_data(r);
    std::string csv = "component,value\n";
    for (const auto& [i, v] : pts) csv += std::to_string(i) + ',' + format_double(v) + '\n';
    write_file(c.out, csv);
    out << "wrote " << c.out << '\n';
    if (!c.svg.empty()) {
        const std::string title = r.method == Method::Comb ? "column sums of pseudo-eigenvalues" : "eigenvalues";
        write_file(c.svg, plot::screeplot_svg(pts, title));
        out << "wrote " << c.svg << '\n';
    }
}

void cmd_evaluate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    cfg.settings = c.settings;
    cfg.methods.clear();
    for (const auto& m : c.methods) {
        const auto parsed = parse_method(m);
        if (!parsed) throw UsageError("unknown method '" + m + "'");
        cfg.methods.push_back(*parsed);
    }
    cfg.T_grid = c.T_grid;
    cfg.K_grid = c.K_grid;
    cfg.replicates = c.replicates;
    cfg.seed = c.seed;
    cfg.comb.lags = c.lags;
    cfg.comb.centering = parse_centering(c.centering);
    cfg.k = c.k > 0 ? c.k : 3;
    cfg.threads = c.threads;
    if (c.replicates > 500) err << "warning: " << c.replicates << " replicates will take a long time\n";

    const auto rows = run_experiment(cfg);
    const auto agg = aggregate(rows);
    for (const auto& a : agg)
        if (a.flagged)
            err << "warning: setting " << a.setting << ' ' << to_string(a.method) << " T=" << a.T << " K=" << a.K
                << ": " << a.failed << " failed replicates\n";
    const fs::path dir(c.out);
    write_file(dir / "results.csv", format_results_csv(rows));
    write_file(dir / "aggregate.csv", format_aggregate_csv(agg));
    out << "wrote " << (dir / "results.csv").string() << " and " << (dir / "aggregate.csv").string() << '\n';
    if (!c.svg.empty()) {
        write_file(c.svg, plot::experiment_svg(agg));
        out << "wrote " << c.svg << '\n';
    }
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

/// Replaces `--config FILE` by the file's key=value lines as `--key=value` flags placed right
/// after the subcommand, skipping keys that are also given on the command line.
std::vector<std::string> expand_config(const std::vector<std::string>& args, const std::vector<std::string>& subs) {
    std::vector<std::string> rest;
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 == args.size()) throw UsageError("--config needs a file");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty()) return rest;

    auto given = [&](const std::string& key) {
        return std::any_of(rest.begin(), rest.end(), [&](const std::string& a) {
            return a == "--" + key || a.rfind("--" + key + "=", 0) == 0;
        });
    };
    std::vector<std::string> flags;
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("config line is not key=value", row, 1);
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty()) throw ParseError("config line has an empty key", row, 1);
        if (!given(key)) flags.push_back("--" + key + "=" + value);
    }
    auto at = std::find_if(rest.begin(), rest.end(),
                           [&](const std::string& a) { return std::find(subs.begin(), subs.end(), a) != subs.end(); });
    if (at != rest.end()) ++at;
    rest.insert(at, flags.begin(), flags.end());
    return rest;
}

void report(std::ostream& err, bool json, const char* kind, const std::string& message) {
    if (json)
        err << Json{{"error", kind}, {"message", message}}.dump() << '\n';
    else
        err << "error: " << message << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    bool json_errors = false;

    CLI::App app{"Stationary subspace analysis for multivariate time series"};
    app.require_subcommand(1);
    app.add_flag("--json", json_errors, "print errors as JSON on stderr");

    auto* simulate = app.add_subcommand("simulate", "generate a simulation setting");
    simulate->add_option("--setting", c.setting, "setting id")->required()->check(CLI::Range(1, 4));
    simulate->add_option("--T", c.T, "series length")->required()->check(CLI::PositiveNumber);
    simulate->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
    simulate->add_option("--out", c.out, "output directory")->required();

    auto* ssa_cmd = app.add_subcommand("ssa", "estimate stationary and nonstationary subspaces");
    ssa_cmd->add_option("--in", c.in, "input CSV")->required();
    ssa_cmd->add_option("--method", c.method, "sir | save | cor | assa | comb")
        ->required()
        ->check(CLI::IsMember({"sir", "save", "cor", "assa", "comb"}));
    add_segmentation_flags(ssa_cmd, c);
    ssa_cmd->add_option("--lags", c.lags, "autocovariance lags, comma separated")->delimiter(',')->capture_default_str();
    ssa_cmd->add_option("--k", c.k, "nonstationary dimension")->required();
    ssa_cmd->add_option("--out", c.out, "output directory")->default_val(".");
    ssa_cmd->add_option("--centering", c.centering, "center of interval statistics: global | interval")
        ->check(CLI::IsMember({"global", "interval"}))
        ->capture_default_str();
    ssa_cmd->add_option("--threshold", c.threshold, "comb classification factor")->capture_default_str();
    ssa_cmd->add_flag("--verbose", c.verbose, "print the joint diagonalization trace");

    auto* diagnose = app.add_subcommand("diagnose", "per-interval mean, variance and autocovariance");
    diagnose->add_option("--in", c.in, "input CSV")->required();
    add_segmentation_flags(diagnose, c);
    diagnose->add_option("--lag", c.lag, "autocovariance lag")->capture_default_str();
    diagnose->add_option("--out", c.out, "output CSV")->required();
    diagnose->add_option("--svg", c.svg, "optional figure");

    auto* scree = app.add_subcommand("screeplot", "screeplot data of a result");
    scree->add_option("--result", c.result, "result.json written by ssa")->required();
    scree->add_option("--out", c.out, "output CSV")->required();
    scree->add_option("--svg", c.svg, "optional figure");

    auto* evaluate = app.add_subcommand("evaluate", "Monte Carlo subspace recovery study");
    evaluate->add_option("--settings", c.settings, "settings")->delimiter(',')->capture_default_str();
    evaluate->add_option("--methods", c.methods, "methods")->delimiter(',')->capture_default_str();
    evaluate->add_option("--T", c.T_grid, "series lengths")->delimiter(',')->capture_default_str();
    evaluate->add_option("--K", c.K_grid, "interval counts")->delimiter(',')->capture_default_str();
    evaluate->add_option("--replicates", c.replicates, "replicates per cell")->capture_default_str();
    evaluate->add_option("--seed", c.seed, "master seed")->capture_default_str();
    evaluate->add_option("--lags", c.lags, "lags for cor/comb")->delimiter(',')->capture_default_str();
    evaluate->add_option("--centering", c.centering, "center of interval statistics: global | interval")
        ->check(CLI::IsMember({"global", "interval"}))
        ->capture_default_str();
    evaluate->add_option("--k", c.k, "nonstationary dimension (default 3)");
    evaluate->add_option("--threads", c.threads, "worker threads, 0 = all cores")->capture_default_str();
    evaluate->add_option("--out", c.out, "output directory")->required();
    evaluate->add_option("--svg", c.svg, "optional figure");

    std::string config_path;
    for (auto* sub : {simulate, ssa_cmd, diagnose, scree, evaluate})
        sub->add_option("--config", config_path, "key=value file; flags given on the command line win");

    // --json has not been parsed yet when the config file fails
    const bool json_early = std::find(args.begin(), args.end(), "--json") != args.end();
    std::vector<std::string> expanded;
    try {
        expanded = expand_config(args, {"simulate", "ssa", "diagnose", "screeplot", "evaluate"});
    } catch (const UsageError& e) {
        report(err, json_early, e.kind(), e.what());
        return kUsage;
    } catch (const Error& e) {
        report(err, json_early, e.kind(), e.what());
        return kDataError;
    }
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        // subcommand help requests surface here too
        if (e.get_exit_code() == 0) {
            out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
            return kOk;
        }
        report(err, json_errors, "usage-error", e.what());
        return kUsage;
    }

    try {
        if (simulate->parsed())
            cmd_simulate(c, out);
        else if (ssa_cmd->parsed())
            cmd_ssa(c, out, err);
        else if (diagnose->parsed())
            cmd_diagnose(c, out);
        else if (scree->parsed())
            cmd_screeplot(c, out);
        else if (evaluate->parsed())
            cmd_evaluate(c, out, err);
    } catch (const UsageError& e) {
        report(err, json_errors, e.kind(), e.what());
        return kUsage;
    } catch (const Error& e) {
        report(err, json_errors, e.kind(), e.what());
        return kDataError;
    } catch (const std::exception& e) {
        report(err, json_errors, "error", e.what());
        return kDataError;
    }
    return kOk;
}

}  // namespace ssa::cli
