#include "ratjac/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "ratjac/error.hpp"

namespace ratjac {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

// Non-empty lines after the header; the header must match exactly.
std::vector<std::string_view> body_lines(std::string_view text, std::string_view header) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
        pos = nl + 1;
    }
    if (lines.empty() || lines.front() != header) {
        throw IoError("CSV header mismatch: expected '" + std::string(header) + "'");
    }
    lines.erase(lines.begin());
    return lines;
}

std::size_t parse_size(std::string_view text) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw IoError("malformed integer field '" + std::string(text) + "'");
    }
    return v;
}

bool parse_bool(std::string_view text) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw IoError("malformed boolean field '" + std::string(text) + "'");
}

std::string format_log_row(const TrialLogRow& r) {
    std::string s;
    s += std::to_string(r.index);
    s += ',';
    s += r.kernel;
    s += ',';
    s += r.mapping;
    s += ',';
    s += format_double(r.theta);
    s += ',';
    s += format_double(r.criterion);
    s += ',';
    s += r.converged ? "true" : "false";
    s += ',';
    s += std::to_string(r.iterations);
    s += ',';
    s += format_double(r.wall_time);
    return s;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw IoError("malformed number '" + std::string(text) + "'");
    }
    return v;
}

TrialLogRow to_log_row(const TrialResult& t) {
    return {t.config.index,
            std::string(kernel_tag(t.config.kernel)),
            std::string(mapping_tag(t.config.mapping)),
            t.config.theta,
            t.criterion.value,
            t.diagnostics.converged,
            t.diagnostics.iterations,
            t.wall_time};
}

std::string serialize_trial_log(const std::vector<TrialLogRow>& rows) {
    std::string out(kTrialLogHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += format_log_row(r);
        out += '\n';
    }
    return out;
}

std::vector<TrialLogRow> parse_trial_log(std::string_view text) {
    std::vector<TrialLogRow> rows;
    for (std::string_view line : body_lines(text, kTrialLogHeader)) {
        const auto f = split_fields(line);
        if (f.size() != 8) throw IoError("trial log row has " + std::to_string(f.size()) + " fields");
        rows.push_back({parse_size(f[0]), std::string(f[1]), std::string(f[2]), parse_double(f[3]),
                        parse_double(f[4]), parse_bool(f[5]), parse_size(f[6]), parse_double(f[7])});
    }
    return rows;
}

ResultRow make_result_row(double kappa, const TrialConfig& config, const CriterionResult& c) {
    ResultRow r{kappa,
                std::string(kernel_tag(config.kernel)),
                std::string(mapping_tag(config.mapping)),
                config.theta,
                c.reference,
                c.achieved,
                0.0};
    r.error = c.failed() ? std::numeric_limits<double>::infinity() : std::abs(r.exact - r.approximate);
    return r;
}

std::string serialize_result_rows(const std::vector<ResultRow>& rows) {
    std::string out(kResultHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += format_double(r.kappa) + ',' + r.kernel + ',' + r.mapping + ',' +
               format_double(r.theta) + ',' + format_double(r.exact) + ',' +
               format_double(r.approximate) + ',' + format_double(r.error) + '\n';
    }
    return out;
}

std::vector<ResultRow> parse_result_rows(std::string_view text) {
    std::vector<ResultRow> rows;
    for (std::string_view line : body_lines(text, kResultHeader)) {
        const auto f = split_fields(line);
        if (f.size() != 7) throw IoError("result row has " + std::to_string(f.size()) + " fields");
        rows.push_back({parse_double(f[0]), std::string(f[1]), std::string(f[2]), parse_double(f[3]),
                        parse_double(f[4]), parse_double(f[5]), parse_double(f[6])});
    }
    return rows;
}

std::filesystem::path best_path(const std::filesystem::path& log_path) {
    std::filesystem::path p = log_path;
    const std::string ext = p.has_extension() ? p.extension().string() : std::string(".csv");
    p.replace_extension();
    p += ".best" + ext;
    return p;
}

void serialize_report(const SearchReport& report, const std::filesystem::path& path) {
    if (report.trials.empty()) throw IoError("refusing to serialize an empty report");
    std::vector<TrialLogRow> rows;
    rows.reserve(report.trials.size());
    for (const auto& t : report.trials) rows.push_back(to_log_row(t));
    write_text_file(path, serialize_trial_log(rows));
    write_text_file(best_path(path), serialize_trial_log({to_log_row(report.best)}));
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace ratjac
