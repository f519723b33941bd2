#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ratjac/problems.hpp"

namespace ratjac {

enum class SearchMode { Grid, Random };

struct SearchSpace {
    SearchMode mode = SearchMode::Grid;
    std::vector<Kernel> kernels{Kernel::legendre(), Kernel::chebyshev()};
    std::vector<MappingKind> mappings{MappingKind::Algebraic, MappingKind::Exponential,
                                      MappingKind::Logarithmic};
    /// Grid mode: explicit ascending theta values.
    std::vector<double> theta_grid;
    /// Random mode: theta ~ U(theta_low, theta_high).
    double theta_low = 0.0;
    double theta_high = 10.0;
    std::size_t budget = 600;
    std::uint64_t seed = 0;

    /// Two kernels x three mappings x theta = 0.1, 0.2, ..., 10.
    static SearchSpace grid_defaults();
    /// Same categorical axes, theta ~ U(0, 10), 600 draws.
    static SearchSpace random_defaults(std::uint64_t seed);

    /// Throws ConfigError for empty axes, a non-ascending or non-positive
    /// grid, an empty budget or an invalid theta range.
    void validate() const;
};

/// step, 2 step, ..., count step (each value computed as k * step).
std::vector<double> uniform_theta_grid(double step, std::size_t count);

struct TrialConfig {
    std::size_t index = 0;
    Kernel kernel = Kernel::legendre();
    MappingKind mapping = MappingKind::Algebraic;
    double theta = 1.0;
};

struct SolveDiagnostics {
    bool converged = false;
    std::size_t iterations = 0;
    double residual_norm = 0.0;
    /// Empty unless the solve threw.
    std::string error;
};

struct TrialResult {
    TrialConfig config;
    CriterionResult criterion;
    SolveDiagnostics diagnostics;
    double wall_time = 0.0;  // seconds; the only non-deterministic field
};

struct SearchReport {
    std::string problem;
    double kappa = 0.0;
    std::size_t m = 0;
    SearchSpace space;
    std::vector<TrialResult> trials;  // ordered by index
    TrialResult best;
};

/// Kernel-major, then mapping, then ascending theta; indices 0..N-1.
std::vector<TrialConfig> cartesian_product(const SearchSpace& space);

/// `budget` configs; per trial one stream draws kernel, mapping, then theta
/// from std::mt19937_64 seeded with space.seed.
std::vector<TrialConfig> sample_configs(const SearchSpace& space);

using TrialEvaluator = std::function<TrialResult(const TrialConfig&)>;

/// Solves one configuration and scores it. Never throws: library errors are
/// recorded in diagnostics.error and the criterion becomes the sentinel.
TrialResult run_trial(const Benchmark& benchmark, std::size_t m, const SolverConfig& config,
                      const TrialConfig& trial);

/// Evaluates every config on a pool of `workers` threads. Results land in
/// index-addressed slots, so the output order never depends on scheduling.
/// An evaluator that throws yields a failed result for that trial only.
std::vector<TrialResult> run_trials(const std::vector<TrialConfig>& configs,
                                    const TrialEvaluator& evaluator, std::size_t workers);

/// Position of the minimum criterion, lowest index on ties. Requires a
/// non-empty list.
std::size_t select_best(const std::vector<TrialResult>& trials);

SearchReport run_search(const SearchSpace& space, const Benchmark& benchmark, std::size_t m,
                        const SolverConfig& config, std::size_t workers);

struct SweepPoint {
    double theta;
    CriterionResult criterion;
};

std::vector<SweepPoint> sensitivity_sweep(const Kernel& kernel, MappingKind mapping,
                                          const std::vector<double>& thetas,
                                          const Benchmark& benchmark, std::size_t m,
                                          const SolverConfig& config, std::size_t workers = 1);

/// Worker count used when the caller passes 0.
std::size_t default_workers();

}  // namespace ratjac
