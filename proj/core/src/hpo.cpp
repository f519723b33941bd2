#include "ratjac/hpo.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <thread>

#include "ratjac/error.hpp"

namespace ratjac {
namespace {

double uniform01(std::mt19937_64& gen) {
    // 53 random bits centred in their cell: strictly inside (0, 1).
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1p-53;
}

std::size_t uniform_index(std::mt19937_64& gen, std::size_t count) {
    const auto k = static_cast<std::size_t>(uniform01(gen) * static_cast<double>(count));
    return std::min(k, count - 1);
}

TrialResult failed_trial(const TrialConfig& cfg, double reference, std::string why) {
    TrialResult r;
    r.config = cfg;
    r.criterion = CriterionResult::failure(reference, why);
    r.diagnostics.error = std::move(why);
    return r;
}

}  // namespace

SearchSpace SearchSpace::grid_defaults() {
    SearchSpace s;
    s.mode = SearchMode::Grid;
    s.theta_grid = uniform_theta_grid(0.1, 100);
    return s;
}

SearchSpace SearchSpace::random_defaults(std::uint64_t seed) {
    SearchSpace s;
    s.mode = SearchMode::Random;
    s.seed = seed;
    return s;
}

void SearchSpace::validate() const {
    if (kernels.empty()) throw ConfigError("search space: kernel axis is empty");
    if (mappings.empty()) throw ConfigError("search space: mapping axis is empty");
    if (mode == SearchMode::Grid) {
        if (theta_grid.empty()) throw ConfigError("search space: theta grid is empty");
        for (std::size_t i = 0; i < theta_grid.size(); ++i) {
            if (!std::isfinite(theta_grid[i]) || !(theta_grid[i] > 0.0)) {
                throw ConfigError("search space: theta values must be positive");
            }
            if (i > 0 && !(theta_grid[i] > theta_grid[i - 1])) {
                throw ConfigError("search space: theta grid must be strictly ascending");
            }
        }
    } else {
        if (budget == 0) throw ConfigError("search space: budget must be at least 1");
        if (!std::isfinite(theta_low) || !std::isfinite(theta_high) || theta_low < 0.0 ||
            !(theta_high > theta_low)) {
            throw ConfigError("search space: need 0 <= theta_low < theta_high");
        }
    }
}

std::vector<double> uniform_theta_grid(double step, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = static_cast<double>(k + 1) * step;
    return out;
}

std::vector<TrialConfig> cartesian_product(const SearchSpace& space) {
    if (space.mode != SearchMode::Grid) throw ConfigError("cartesian_product needs a grid space");
    space.validate();
    std::vector<TrialConfig> out;
    out.reserve(space.kernels.size() * space.mappings.size() * space.theta_grid.size());
    for (const Kernel& k : space.kernels) {
        for (MappingKind mk : space.mappings) {
            for (double th : space.theta_grid) {
                out.push_back({out.size(), k, mk, th});
            }
        }
    }
    return out;
}

std::vector<TrialConfig> sample_configs(const SearchSpace& space) {
    if (space.mode != SearchMode::Random) throw ConfigError("sample_configs needs a random space");
    space.validate();
    std::mt19937_64 gen(space.seed);
    std::vector<TrialConfig> out;
    out.reserve(space.budget);
    for (std::size_t i = 0; i < space.budget; ++i) {
        TrialConfig c;
        c.index = i;
        c.kernel = space.kernels[uniform_index(gen, space.kernels.size())];
        c.mapping = space.mappings[uniform_index(gen, space.mappings.size())];
        c.theta = space.theta_low + (space.theta_high - space.theta_low) * uniform01(gen);
        out.push_back(c);
    }
    return out;
}

TrialResult run_trial(const Benchmark& benchmark, std::size_t m, const SolverConfig& config,
                      const TrialConfig& trial) {
    const auto start = std::chrono::steady_clock::now();
    TrialResult r;
    try {
        const RationalBasis basis{trial.kernel, Mapping(trial.mapping, trial.theta), m};
        const Solution sol = newton_solve(benchmark.spec, basis, config);
        r.config = trial;
        r.diagnostics = {sol.converged, sol.newton_iterations, sol.final_residual_norm, {}};
        r.criterion = benchmark.criterion(sol, basis);
    } catch (const std::exception& ex) {
        r = failed_trial(trial, benchmark.reference, ex.what());
    }
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<TrialResult> run_trials(const std::vector<TrialConfig>& configs,
                                    const TrialEvaluator& evaluator, std::size_t workers) {
    if (workers == 0) workers = default_workers();
    std::vector<TrialResult> slots(configs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < configs.size(); i = next.fetch_add(1)) {
            try {
                slots[i] = evaluator(configs[i]);
                slots[i].config = configs[i];
            } catch (const std::exception& ex) {
                slots[i] = failed_trial(configs[i], std::numeric_limits<double>::quiet_NaN(), ex.what());
            } catch (...) {
                slots[i] = failed_trial(configs[i], std::numeric_limits<double>::quiet_NaN(),
                                        "unknown error");
            }
        }
    };
    const std::size_t n_threads = std::min(workers, configs.size());
    if (n_threads <= 1) {
        work();
        return slots;
    }
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
    pool.clear();  // joins
    return slots;
}

std::size_t select_best(const std::vector<TrialResult>& trials) {
    if (trials.empty()) throw ConfigError("no trials to select from");
    std::size_t best = 0;
    for (std::size_t i = 1; i < trials.size(); ++i) {
        // Strict '<' keeps the lowest index on ties; NaN never wins.
        if (trials[i].criterion.value < trials[best].criterion.value ||
            (std::isnan(trials[best].criterion.value) && !std::isnan(trials[i].criterion.value))) {
            best = i;
        }
    }
    return best;
}

SearchReport run_search(const SearchSpace& space, const Benchmark& benchmark, std::size_t m,
                        const SolverConfig& config, std::size_t workers) {
    config.validate();
    const std::vector<TrialConfig> configs =
        space.mode == SearchMode::Grid ? cartesian_product(space) : sample_configs(space);
    if (configs.empty()) throw ConfigError("search space produced no trials");

    SearchReport report;
    report.problem = benchmark.name;
    report.kappa = benchmark.kappa;
    report.m = m;
    report.space = space;
    report.trials = run_trials(
        configs, [&](const TrialConfig& c) { return run_trial(benchmark, m, config, c); }, workers);
    report.best = report.trials[select_best(report.trials)];
    return report;
}

std::vector<SweepPoint> sensitivity_sweep(const Kernel& kernel, MappingKind mapping,
                                          const std::vector<double>& thetas,
                                          const Benchmark& benchmark, std::size_t m,
                                          const SolverConfig& config, std::size_t workers) {
    SearchSpace space;
    space.kernels = {kernel};
    space.mappings = {mapping};
    space.theta_grid = thetas;
    const SearchReport report = run_search(space, benchmark, m, config, workers);
    std::vector<SweepPoint> out;
    out.reserve(report.trials.size());
    for (const TrialResult& t : report.trials) out.push_back({t.config.theta, t.criterion});
    return out;
}

std::size_t default_workers() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

}  // namespace ratjac
