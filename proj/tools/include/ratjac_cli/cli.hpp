#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include <ratjac/solver.hpp>

namespace ratjac::cli {

enum class Mode { Solve, TuneGrid, TuneRandom, Sweep };

/// Exit codes of `run` and `main_entry`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;        // validation or parse error, nothing written
inline constexpr int kExitAllFailed = 2;    // output written, but no trial produced a finite result
inline constexpr int kExitIo = 3;           // output could not be written

struct RunConfig {
    Mode mode = Mode::Solve;
    std::string problem;
    double kappa = 0.0;
    double u0 = 0.1;
    std::size_t m = 0;  // 0: 40 for volterra, 25 for kidder
    SolverConfig solver;
    std::string kernel;   // empty: all (tune), legendre (sweep)
    std::string mapping;  // empty: all (tune, sweep)
    double theta = 0.0;
    std::size_t workers = 0;  // 0: hardware concurrency
    std::uint64_t seed = 0;
    std::size_t budget = 600;
    double theta_min = 0.0;
    double theta_max = 10.0;
    std::size_t steps = 100;
    std::size_t samples = 200;
    std::optional<double> reference_slope;
    std::filesystem::path out;  // empty: <problem>_<mode>.csv
};

/// Throws ConfigError naming the offending field.
void validate(const RunConfig& config);

/// Executes one configured run; progress and the summary go to `log`.
int run(const RunConfig& config, std::ostream& log);

/// Parses argv (flags first, then an optional --config JSON file for any
/// flag not given) and runs.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Theta values lo + k (hi - lo) / steps, k = 1..steps.
std::vector<double> theta_axis(double lo, double hi, std::size_t steps);

}  // namespace ratjac::cli
