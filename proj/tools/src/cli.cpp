#include "ratjac_cli/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include <ratjac/error.hpp>
#include <ratjac/hpo.hpp>
#include <ratjac/report.hpp>

namespace ratjac::cli {
namespace {

// Every flag is optional at parse time so that a config file can fill the
// gaps; the JSON keys are the flag names without the leading dashes.
struct Flags {
    std::optional<std::string> problem, kernel, mapping, out, config;
    std::optional<double> kappa, u0, theta, gamma, newton_tol, theta_min, theta_max, reference_slope;
    std::optional<std::size_t> m, newton_max_iter, n_collocation, workers, budget, steps, samples;
    std::optional<std::uint64_t> seed;
};

void add_common_options(CLI::App* app, Flags& f) {
    app->add_option("--problem", f.problem, "volterra | kidder");
    app->add_option("--kappa", f.kappa, "problem parameter kappa");
    app->add_option("--u0", f.u0, "volterra initial population (default 0.1)");
    app->add_option("--m", f.m, "basis size (default 40 volterra, 25 kidder)");
    app->add_option("--kernel", f.kernel, "legendre | chebyshev");
    app->add_option("--mapping", f.mapping, "algebraic | exponential | logarithmic");
    app->add_option("--gamma", f.gamma, "regularization weight (default 1e10)");
    app->add_option("--newton-tol", f.newton_tol, "KKT residual tolerance (default 1e-12)");
    app->add_option("--newton-max-iter", f.newton_max_iter, "Newton iteration cap (default 50)");
    app->add_option("--n-collocation", f.n_collocation, "collocation points (default: problem rule)");
    app->add_option("--reference-slope", f.reference_slope, "kidder u'(0) reference override");
    app->add_option("--out", f.out, "output CSV path");
    app->add_option("--config", f.config, "JSON file mirroring these flags; flags win");
}

template <class T>
void fill(std::optional<T>& slot, const nlohmann::json& j, const std::string& key) {
    if (slot || !j.contains(key)) return;
    try {
        slot = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(key + ": " + ex.what());
    }
}

void merge_config_file(Flags& f) {
    if (!f.config) return;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(*f.config));
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError("config: " + std::string(ex.what()));
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    static const std::vector<std::string> known = {
        "problem", "kappa", "u0", "m", "kernel", "mapping", "theta", "gamma", "newton-tol",
        "newton-max-iter", "n-collocation", "reference-slope", "out", "workers", "seed",
        "budget", "theta-min", "theta-max", "steps", "samples"};
    for (const auto& item : j.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
            throw ConfigError("config: unknown key '" + item.key() + "'");
        }
    }
    fill(f.problem, j, "problem");
    fill(f.kappa, j, "kappa");
    fill(f.u0, j, "u0");
    fill(f.m, j, "m");
    fill(f.kernel, j, "kernel");
    fill(f.mapping, j, "mapping");
    fill(f.theta, j, "theta");
    fill(f.gamma, j, "gamma");
    fill(f.newton_tol, j, "newton-tol");
    fill(f.newton_max_iter, j, "newton-max-iter");
    fill(f.n_collocation, j, "n-collocation");
    fill(f.reference_slope, j, "reference-slope");
    fill(f.out, j, "out");
    fill(f.workers, j, "workers");
    fill(f.seed, j, "seed");
    fill(f.budget, j, "budget");
    fill(f.theta_min, j, "theta-min");
    fill(f.theta_max, j, "theta-max");
    fill(f.steps, j, "steps");
    fill(f.samples, j, "samples");
}

RunConfig to_run_config(Mode mode, const Flags& f) {
    RunConfig c;
    c.mode = mode;
    if (!f.problem) throw ConfigError("problem: required (volterra | kidder)");
    if (!f.kappa) throw ConfigError("kappa: required");
    c.problem = *f.problem;
    c.kappa = *f.kappa;
    if (f.u0) c.u0 = *f.u0;
    if (f.m) c.m = *f.m;
    if (f.kernel) c.kernel = *f.kernel;
    if (f.mapping) c.mapping = *f.mapping;
    if (f.theta) c.theta = *f.theta;
    if (f.gamma) c.solver.gamma = *f.gamma;
    if (f.newton_tol) c.solver.newton_tol = *f.newton_tol;
    if (f.newton_max_iter) c.solver.newton_max_iter = *f.newton_max_iter;
    if (f.n_collocation) c.solver.n_collocation = *f.n_collocation;
    c.reference_slope = f.reference_slope;
    if (f.out) c.out = *f.out;
    if (f.workers) c.workers = *f.workers;
    if (f.seed) c.seed = *f.seed;
    if (f.budget) c.budget = *f.budget;
    if (f.theta_min) c.theta_min = *f.theta_min;
    if (mode == Mode::Sweep && !f.theta_max) c.theta_max = 50.0;
    if (f.theta_max) c.theta_max = *f.theta_max;
    if (mode == Mode::Sweep && !f.steps) c.steps = 500;
    if (f.steps) c.steps = *f.steps;
    if (f.samples) c.samples = *f.samples;
    return c;
}

std::string_view mode_name(Mode mode) {
    switch (mode) {
        case Mode::Solve: return "solve";
        case Mode::TuneGrid: return "grid";
        case Mode::TuneRandom: return "random";
        case Mode::Sweep: return "sweep";
    }
    return "run";
}

std::size_t basis_size(const RunConfig& c) {
    if (c.m != 0) return c.m;
    return c.problem == "volterra" ? 40 : 25;
}

std::filesystem::path output_path(const RunConfig& c) {
    if (!c.out.empty()) return c.out;
    return c.problem + "_" + std::string(mode_name(c.mode)) + ".csv";
}

Benchmark make_benchmark(const RunConfig& c) {
    if (c.problem == "volterra") return volterra_benchmark({c.kappa, c.u0});
    return kidder_benchmark({c.kappa}, c.reference_slope);
}

std::vector<MappingKind> mapping_axis(const RunConfig& c) {
    if (!c.mapping.empty()) return {parse_mapping(c.mapping)};
    return {MappingKind::Algebraic, MappingKind::Exponential, MappingKind::Logarithmic};
}

std::string samples_csv(const Solution& sol, const RationalBasis& basis, std::size_t count) {
    std::string text = "x,u,du,d2u\n";
    for (std::size_t j = 0; j < count; ++j) {
        const double t = count == 1 ? -1.0
                                    : -1.0 + 1.99 * static_cast<double>(j) /
                                                 static_cast<double>(count - 1);
        const double x = inverse(basis.map, t);
        const Evaluation ev = evaluate(sol, basis, x);
        text += format_double(x) + ',' + format_double(ev.u) + ',' + format_double(ev.du) + ',' +
                format_double(ev.d2u) + '\n';
    }
    return text;
}

int run_solve(const RunConfig& c, std::ostream& log) {
    const Benchmark bm = make_benchmark(c);
    const TrialConfig trial{0, parse_kernel(c.kernel), parse_mapping(c.mapping), c.theta};
    const RationalBasis basis{trial.kernel, Mapping(trial.mapping, trial.theta), basis_size(c)};
    const auto path = output_path(c);

    CriterionResult crit = CriterionResult::failure(bm.reference, "not run");
    std::optional<Solution> sol;
    try {
        sol = newton_solve(bm.spec, basis, c.solver);
        crit = bm.criterion(*sol, basis);
        log << "newton: converged=" << (sol->converged ? "true" : "false")
            << " iterations=" << sol->newton_iterations
            << " residual=" << format_double(sol->final_residual_norm) << '\n';
    } catch (const Error& ex) {
        crit = CriterionResult::failure(bm.reference, ex.what());
        log << "solve failed: " << ex.what() << '\n';
    }

    const ResultRow row = make_result_row(c.kappa, trial, crit);
    write_text_file(path, serialize_result_rows({row}));
    if (sol) {
        std::filesystem::path sp = path;
        sp.replace_extension();
        sp += ".samples.csv";
        write_text_file(sp, samples_csv(*sol, basis, c.samples));
    }
    log << kResultHeader << '\n' << serialize_result_rows({row}).substr(kResultHeader.size() + 1);
    return crit.failed() ? kExitAllFailed : kExitOk;
}

int run_tune(const RunConfig& c, std::ostream& log) {
    const Benchmark bm = make_benchmark(c);
    SearchSpace space = c.mode == Mode::TuneGrid ? SearchSpace::grid_defaults()
                                                 : SearchSpace::random_defaults(c.seed);
    if (!c.kernel.empty()) space.kernels = {parse_kernel(c.kernel)};
    space.mappings = mapping_axis(c);
    if (c.mode == Mode::TuneGrid) {
        space.theta_grid = theta_axis(c.theta_min, c.theta_max, c.steps);
    } else {
        space.theta_low = c.theta_min;
        space.theta_high = c.theta_max;
        space.budget = c.budget;
    }
    const SearchReport report = run_search(space, bm, basis_size(c), c.solver, c.workers);
    const auto path = output_path(c);
    serialize_report(report, path);

    std::size_t failed = 0;
    for (const auto& t : report.trials) failed += t.criterion.failed() ? 1 : 0;
    log << report.trials.size() << " trials, " << failed << " failed; log: " << path.string()
        << "\nbest:\n"
        << serialize_result_rows({make_result_row(c.kappa, report.best.config, report.best.criterion)});
    return report.best.criterion.failed() ? kExitAllFailed : kExitOk;
}

int run_sweep(const RunConfig& c, std::ostream& log) {
    const Benchmark bm = make_benchmark(c);
    const Kernel kernel = parse_kernel(c.kernel.empty() ? "legendre" : c.kernel);
    const auto mappings = mapping_axis(c);
    const auto thetas = theta_axis(c.theta_min, c.theta_max, c.steps);

    std::vector<std::vector<SweepPoint>> columns;
    bool any_ok = false;
    for (MappingKind mk : mappings) {
        columns.push_back(sensitivity_sweep(kernel, mk, thetas, bm, basis_size(c), c.solver, c.workers));
        for (const auto& p : columns.back()) any_ok = any_ok || !p.criterion.failed();
    }

    // Failed points are written as nan so that plots show gaps.
    std::string text = "theta";
    for (MappingKind mk : mappings) text += "," + std::string(mapping_tag(mk));
    text += '\n';
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        text += format_double(thetas[i]);
        for (const auto& col : columns) {
            const double v = col[i].criterion.value;
            text += ',' + format_double(std::isfinite(v) ? v : std::nan(""));
        }
        text += '\n';
    }
    const auto path = output_path(c);
    write_text_file(path, text);
    log << thetas.size() << " theta values x " << mappings.size() << " mappings -> " << path.string()
        << '\n';
    return any_ok ? kExitOk : kExitAllFailed;
}

}  // namespace

std::vector<double> theta_axis(double lo, double hi, std::size_t steps) {
    std::vector<double> out(steps);
    const double step = (hi - lo) / static_cast<double>(steps);
    for (std::size_t k = 0; k < steps; ++k) out[k] = lo + static_cast<double>(k + 1) * step;
    return out;
}

void validate(const RunConfig& c) {
    if (c.problem != "volterra" && c.problem != "kidder") {
        throw ConfigError("problem: unknown tag '" + c.problem + "' (expected volterra|kidder)");
    }
    try {
        if (c.problem == "volterra") {
            VolterraParams{c.kappa, c.u0}.validate();
        } else {
            KidderParams{c.kappa}.validate();
            if (!c.reference_slope && !kidder_reference_slope(c.kappa)) {
                throw ConfigError("no tabulated slope; pass --reference-slope or use 0.1, 0.3, 0.5, 0.9");
            }
        }
    } catch (const ConfigError& ex) {
        throw ConfigError(std::string("kappa: ") + ex.what());
    }
    if (!c.kernel.empty()) parse_kernel(c.kernel);
    if (!c.mapping.empty()) parse_mapping(c.mapping);
    c.solver.validate();

    if (c.mode == Mode::Solve) {
        if (c.kernel.empty()) throw ConfigError("kernel: required for solve");
        if (c.mapping.empty()) throw ConfigError("mapping: required for solve");
        if (!std::isfinite(c.theta) || !(c.theta > 0.0)) {
            throw ConfigError("theta: required for solve and must be positive");
        }
        if (c.samples == 0) throw ConfigError("samples: must be at least 1");
        return;
    }
    if (!std::isfinite(c.theta_min) || !std::isfinite(c.theta_max) || c.theta_min < 0.0 ||
        !(c.theta_max > c.theta_min)) {
        throw ConfigError("theta-min/theta-max: need 0 <= theta-min < theta-max");
    }
    if (c.mode == Mode::TuneRandom && c.budget == 0) throw ConfigError("budget: must be at least 1");
    if (c.mode != Mode::TuneRandom && c.steps == 0) throw ConfigError("steps: must be at least 1");
}

int run(const RunConfig& config, std::ostream& log) {
    validate(config);
    switch (config.mode) {
        case Mode::Solve: return run_solve(config, log);
        case Mode::TuneGrid:
        case Mode::TuneRandom: return run_tune(config, log);
        case Mode::Sweep: return run_sweep(config, log);
    }
    return kExitUsage;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rational Jacobi CLS-SVR solver and hyperparameter search"};
    app.require_subcommand(1);
    Flags f;

    auto* solve = app.add_subcommand("solve", "solve one configuration");
    add_common_options(solve, f);
    solve->add_option("--theta", f.theta, "mapping length scale");
    solve->add_option("--samples", f.samples, "rows in the .samples.csv file (default 200)");

    auto* tune = app.add_subcommand("tune", "hyperparameter search");
    tune->require_subcommand(1);
    auto* grid = tune->add_subcommand("grid", "grid search (default: 2 kernels x 3 mappings x 100 theta)");
    auto* random = tune->add_subcommand("random", "random search (default: 600 draws, theta ~ U(0, 10))");
    for (auto* sub : {grid, random}) {
        add_common_options(sub, f);
        sub->add_option("--workers", f.workers, "worker threads (default: all cores)");
        sub->add_option("--theta-min", f.theta_min, "lower theta bound (default 0)");
        sub->add_option("--theta-max", f.theta_max, "upper theta bound (default 10)");
    }
    grid->add_option("--steps", f.steps, "theta grid size (default 100)");
    random->add_option("--seed", f.seed, "generator seed (default 0)");
    random->add_option("--budget", f.budget, "number of trials (default 600)");

    auto* sweep = app.add_subcommand("sweep", "criterion versus theta for fixed kernel");
    add_common_options(sweep, f);
    sweep->add_option("--workers", f.workers, "worker threads (default: all cores)");
    sweep->add_option("--theta-min", f.theta_min, "lower theta bound (default 0)");
    sweep->add_option("--theta-max", f.theta_max, "upper theta bound (default 50)");
    sweep->add_option("--steps", f.steps, "theta points (default 500)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    Mode mode = Mode::Solve;
    if (*sweep) mode = Mode::Sweep;
    if (*grid) mode = Mode::TuneGrid;
    if (*random) mode = Mode::TuneRandom;

    RunConfig config;
    try {
        merge_config_file(f);
        config = to_run_config(mode, f);
        validate(config);
    } catch (const Error& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitUsage;
    }
    try {
        return run(config, out);
    } catch (const IoError& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitIo;
    } catch (const Error& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace ratjac::cli
