#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ratjac/hpo.hpp"

namespace ratjac {

/// Shortest-safe round-trip text: 17 significant digits in %g style,
/// "inf" / "-inf" / "nan" for non-finite values.
std::string format_double(double v);
/// Inverse of format_double; throws IoError on malformed text.
double parse_double(std::string_view text);

/// One line of the trial log.
struct TrialLogRow {
    std::size_t index = 0;
    std::string kernel;
    std::string mapping;
    double theta = 0.0;
    double criterion = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    double wall_time = 0.0;

    friend bool operator==(const TrialLogRow&, const TrialLogRow&) = default;
};

inline constexpr std::string_view kTrialLogHeader =
    "index,kernel,mapping,theta,criterion,converged,iterations,wall_time";

TrialLogRow to_log_row(const TrialResult& trial);
std::string serialize_trial_log(const std::vector<TrialLogRow>& rows);
std::vector<TrialLogRow> parse_trial_log(std::string_view text);

/// Tables-style summary row; error is recomputed as |exact - approximate|
/// (inf for failed trials).
struct ResultRow {
    double kappa = 0.0;
    std::string kernel;
    std::string mapping;
    double theta = 0.0;
    double exact = 0.0;
    double approximate = 0.0;
    double error = 0.0;
};

inline constexpr std::string_view kResultHeader =
    "kappa,kernel,mapping,theta,exact,approximate,error";

ResultRow make_result_row(double kappa, const TrialConfig& config, const CriterionResult& criterion);
std::string serialize_result_rows(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_result_rows(std::string_view text);

/// foo.csv -> foo.best.csv
std::filesystem::path best_path(const std::filesystem::path& log_path);

/// Writes the trial log to `path` and the best trial (log schema) to
/// best_path(path). Throws IoError when either file cannot be written.
void serialize_report(const SearchReport& report, const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace ratjac
