#include "rtz/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include "rtz/config.hpp"
#include "rtz/diagnostics.hpp"
#include "rtz/errors.hpp"
#include "rtz/experiments.hpp"
#include "rtz/report.hpp"

namespace rtz {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GlobalOptions {
    std::string config_path;
    std::string out_dir;
    unsigned jobs = 1;
    std::optional<std::uint64_t> seed;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

fs::path resolve_out_dir(const GlobalOptions& g) {
    if (!g.out_dir.empty())
        return g.out_dir;
    if (const char* env = std::getenv(kOutDirEnv); env && *env)
        return env;
    return "rtzeros-out";
}

void write_file(const fs::path& path, std::string_view content) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    f << content;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

void write_manifest(const fs::path& dir, std::string_view subcommand, const GlobalOptions& g,
                    const json& resolved, const std::vector<std::string>& args) {
    const json manifest = {
        {"subcommand", subcommand},
        {"config_path", g.config_path.empty() ? json(nullptr) : json(g.config_path)},
        {"resolved", resolved},
        {"output_dir", dir.string()},
        {"tool_version", std::string(kToolVersion)},
        {"timestamp", timestamp_utc()},
        {"jobs", g.jobs},
        {"arguments", args},
    };
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

fs::path prepare_out_dir(const GlobalOptions& g) {
    const fs::path dir = resolve_out_dir(g);
    fs::create_directories(dir);
    return dir;
}

int cmd_simulate(const GlobalOptions& g, const std::vector<std::string>& args, std::ostream& out) {
    if (g.config_path.empty())
        throw UsageError("simulate requires --config PATH");
    ExperimentConfig config = load_config(g.config_path);
    if (g.seed)
        config.master_seed = *g.seed;

    out << fmt::format("simulate: gamma={} law={} q={} n=[{},{}] M={} (K={})\n", config.gamma,
                       to_string(config.law), config.q, config.n_min, config.n_max, config.trials,
                       config.truncation());
    const SimulationResult result = run_simulation(config, g.jobs);

    const fs::path dir = prepare_out_dir(g);
    write_file(dir / "intervals.csv", intervals_csv(result.intervals));
    write_file(dir / "cumulative.csv", cumulative_csv(result.slope));
    write_file(dir / "report.json", simulation_json(config, result).dump(2) + "\n");
    write_file(dir / "config.resolved", format_config(config));
    write_manifest(dir, "simulate", g, config_json(config), args);

    out << fmt::format("{:>4} {:>10} {:>10} {:>10} {:>9}\n", "n", "mean", "stderr", "target", "unstable");
    for (const auto& e : result.intervals)
        out << fmt::format("{:>4} {:>10.5f} {:>10.5f} {:>10.5f} {:>9.4f}\n", e.n, e.mean_count, e.stderr_,
                           e.target, e.unstable_fraction);
    if (result.slope.fitted_slope)
        out << fmt::format("cumulative slope {:.5f} (target {:.5f}, relative gap {:+.3f})\n",
                           *result.slope.fitted_slope, result.slope.target, *result.slope.relative_gap);
    out << fmt::format("wrote {}\n", dir.string());
    return kExitOk;
}

struct GaussFlags {
    double gamma = 1.0;
    double a = 1.0;
    double b = std::exp(2.0 * std::numbers::pi);
    long long paths = 5000;
    double eta = 0.01;
};

int cmd_gauss_oracle(const GlobalOptions& g, const GaussFlags& f, const std::vector<std::string>& args,
                     std::ostream& out) {
    if (!(f.gamma > 0.0))
        throw UsageError(fmt::format("--gamma must be positive, got {}", f.gamma));
    if (!(f.a > 0.0))
        throw UsageError(fmt::format("--a must be positive, got {}", f.a));
    if (!(f.a < f.b))
        throw UsageError(fmt::format("--a must be smaller than --b, got a={} b={}", f.a, f.b));
    if (f.paths < 1)
        throw UsageError(fmt::format("--M must be at least 1, got {}", f.paths));
    if (!(f.eta > 0.0))
        throw UsageError(fmt::format("--eta must be positive, got {}", f.eta));

    const std::uint64_t seed = g.seed.value_or(1);
    const GaussOracleSummary s =
        run_gaussian_oracle(f.gamma, f.a, f.b, static_cast<std::size_t>(f.paths), f.eta, seed, g.jobs);

    const fs::path dir = prepare_out_dir(g);
    const json summary = gauss_oracle_json(s);
    write_file(dir / "gauss_oracle.json", summary.dump(2) + "\n");
    write_manifest(dir, "gauss-oracle", g,
                   {{"gamma", f.gamma}, {"a", f.a}, {"b", f.b}, {"M", f.paths}, {"eta", f.eta}, {"seed", seed}},
                   args);

    out << fmt::format("gauss-oracle: gamma={} [a,b]=[{}, {}] M={} grid={} jitter={:g}\n", f.gamma, f.a, f.b,
                       f.paths, s.grid_points, s.jitter);
    out << fmt::format("mean {:.5f}  stderr {:.5f}  target {:.5f}  tolerance {:.5f}  unstable {:.4f}  {}\n",
                       s.mean_count, s.stderr_, s.target, s.tolerance, s.unstable_fraction,
                       s.within_tolerance ? "within tolerance" : "OUTSIDE tolerance");
    return kExitOk;
}

struct DiagnosticsFlags {
    double gamma = 1.0;
    double q = 0.5;
    int n_min = 1;
    int n_max = 14;
    std::string slow = "constant";
    std::size_t max_terms = kDefaultMaxTerms;
};

int cmd_diagnostics(const GlobalOptions& g, const DiagnosticsFlags& f, const std::vector<std::string>& args,
                    std::ostream& out) {
    if (!(f.gamma > 0.0))
        throw UsageError(fmt::format("--gamma must be positive, got {}", f.gamma));
    if (!(f.q > 0.0 && f.q < 1.0))
        throw UsageError(fmt::format("--q must lie in (0,1), got {}", f.q));
    if (f.n_min < 1 || f.n_max < f.n_min)
        throw UsageError(fmt::format("invalid n range [{}, {}]", f.n_min, f.n_max));
    SlowVariation slow;
    try {
        slow = SlowVariation::parse(f.slow);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }

    const DiagnosticReport report =
        check_inequalities(CoefficientSequence(f.gamma, slow), f.q, f.n_min, f.n_max, f.max_terms);

    const fs::path dir = prepare_out_dir(g);
    write_file(dir / "diagnostics.csv", diagnostics_csv(report));
    write_file(dir / "diagnostics.json", diagnostics_json(report).dump(2) + "\n");
    write_manifest(dir, "diagnostics", g,
                   {{"gamma", f.gamma}, {"q", f.q}, {"n_min", f.n_min}, {"n_max", f.n_max}, {"slow", f.slow},
                    {"max_terms", f.max_terms}},
                   args);

    out << fmt::format("{:>3} {:>10} {:>7} {:>11} {:>11} {:>5} {:>10} {:>5} {:>5} {:>11}\n", "n", "K", "norm",
                       "b0^2", "bound", "(i)", "F-F~", "(ii)", "(iii)", "C_hat");
    for (const auto& r : report.rows) {
        if (r.skipped) {
            out << fmt::format("{:>3} skipped: {}\n", r.n, r.notice);
            continue;
        }
        out << fmt::format("{:>3} {:>10} {:>7.1e} {:>11.4e} {:>11.4e} {:>5} {:>10.2e} {:>5} {:>5} {:>11.4e}\n", r.n,
                           r.K, r.normalization_error, r.b0_sq, r.b0_bound, r.max_weight_ok ? "ok" : "FAIL",
                           r.max_tail_excess, r.tail_order_ok ? "ok" : "FAIL", r.shifted_tail_ok ? "ok" : "FAIL",
                           r.c_hat);
    }
    auto n0 = [](const EventualBound& b) { return b.n0 ? std::to_string(*b.n0) : std::string("none"); };
    out << fmt::format("max-weight bound: n0 = {}, violations beyond = {}\n", n0(report.max_weight),
                       report.max_weight.violations_beyond);
    out << fmt::format("shifted-tail bound: n0 = {}, violations beyond = {}\n", n0(report.shifted_tail),
                       report.shifted_tail.violations_beyond);
    if (report.c_hat_log_slope)
        out << fmt::format("C_hat log-slope {:.4f} ({})\n", *report.c_hat_log_slope,
                           report.c_hat_bounded ? "bounded" : "GROWING");
    out << fmt::format("exact invariants: {}\n", report.exact_ok ? "pass" : "FAIL");
    return report.exact_ok ? kExitOk : kExitRuntime;
}

struct AbelFlags {
    double gamma = 1.0;
    std::string slow = "constant";
    std::vector<double> a_list{1e-1, 1e-2, 1e-3, 1e-4};
};

int cmd_abel_check(const GlobalOptions& g, const AbelFlags& f, const std::vector<std::string>& args,
                   std::ostream& out) {
    if (!(f.gamma > 0.0))
        throw UsageError(fmt::format("--gamma must be positive, got {}", f.gamma));
    if (f.a_list.empty())
        throw UsageError("--a needs at least one value");
    for (double a : f.a_list)
        if (!(a > 0.0 && a < 1.0))
            throw UsageError(fmt::format("--a values must lie in (0,1), got {}", a));
    SlowVariation slow;
    try {
        slow = SlowVariation::parse(f.slow);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }

    const auto rows = abel_ratios(CoefficientSequence(f.gamma, slow), f.a_list);
    const fs::path dir = prepare_out_dir(g);
    write_file(dir / "abel.csv", abel_csv(rows));
    write_manifest(dir, "abel-check", g, {{"gamma", f.gamma}, {"slow", f.slow}, {"a", f.a_list}}, args);

    out << fmt::format("{:>10} {:>16} {:>16} {:>12}\n", "a", "v(1-a)", "asymptote", "ratio");
    for (const auto& r : rows)
        out << fmt::format("{:>10.3g} {:>16.8g} {:>16.8g} {:>12.8f}\n", r.a, r.v, r.asymptote, r.ratio);
    if (rows.size() < 2) {
        out << "single point: trend check skipped\n";
        return kExitOk;
    }
    const bool monotone = abel_monotone(rows);
    out << fmt::format("monotone approach to 1: {}\n", monotone ? "yes" : "NO");
    return monotone ? kExitOk : kExitRuntime;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Real zeros of random Taylor series: simulation and verification"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--config", g.config_path, "Experiment config file (key = value)");
    app.add_option("--out", g.out_dir, fmt::format("Output directory (default ${} or ./rtzeros-out)", kOutDirEnv));
    app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
    app.add_option("--seed", g.seed, "Master seed (overrides the config)");

    auto* simulate = app.add_subcommand("simulate", "Per-interval and cumulative zero-count campaign");
    simulate->fallthrough();

    GaussFlags gf;
    auto* gauss = app.add_subcommand("gauss-oracle", "Zero counts of the limit Gaussian process vs Rice");
    gauss->fallthrough();
    gauss->add_option("--gamma", gf.gamma);
    gauss->add_option("--a", gf.a, "Left end (Z coordinates, > 0)");
    gauss->add_option("--b", gf.b, "Right end (Z coordinates)");
    gauss->add_option("--M", gf.paths, "Number of paths");
    gauss->add_option("--eta", gf.eta, "Grid step factor");

    DiagnosticsFlags df;
    auto* diag = app.add_subcommand("diagnostics", "Weight-array lemma checks");
    diag->fallthrough();
    diag->add_option("--gamma", df.gamma);
    diag->add_option("--q", df.q);
    diag->add_option("--n-min", df.n_min);
    diag->add_option("--n-max", df.n_max);
    diag->add_option("--slow", df.slow, "constant[:c] | logpower:b | loglog");
    diag->add_option("--max-terms", df.max_terms, "Largest weight array to build");

    AbelFlags af;
    auto* abel = app.add_subcommand("abel-check", "Ratio v(1-a) / asymptote along a list of a");
    abel->fallthrough();
    abel->add_option("--gamma", af.gamma);
    abel->add_option("--slow", af.slow, "constant[:c] | logpower:b | loglog");
    abel->add_option("--a", af.a_list, "Comma-separated values of a")->delimiter(',');

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*simulate)
            return cmd_simulate(g, args, out);
        if (*gauss)
            return cmd_gauss_oracle(g, gf, args, out);
        if (*diag)
            return cmd_diagnostics(g, df, args, out);
        if (*abel)
            return cmd_abel_check(g, af, args, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const TrialError& e) {
        err << "error: " << e.what() << "\n"
            << fmt::format("replay: trial {} with per-trial seed {}\n", e.trial(), e.seed());
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace rtz
