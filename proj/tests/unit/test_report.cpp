#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>

#include <ratjac/error.hpp>
#include <ratjac/report.hpp>

using namespace ratjac;
namespace fs = std::filesystem;

namespace {

bool same_bits(double a, double b) {
    if (std::isnan(a) && std::isnan(b)) return true;
    return std::memcmp(&a, &b, sizeof a) == 0;
}

fs::path scratch_dir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    fs::path p = fs::temp_directory_path() / (std::string("ratjac_report_") + info->name());
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

SearchReport synthetic_report(std::size_t n) {
    SearchReport rep;
    rep.problem = "volterra";
    rep.kappa = 0.5;
    rep.m = 40;
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const auto configs = cartesian_product(SearchSpace::grid_defaults());
    for (std::size_t i = 0; i < n; ++i) {
        TrialResult t;
        t.config = configs[i % configs.size()];
        t.config.index = i;
        if (i % 7 == 3) {
            t.criterion = CriterionResult::failure(0.485, "diverged");
        } else {
            t.criterion = {std::pow(10.0, -14.0 * U(gen)), 0.485, 0.485, {}};
            t.diagnostics.converged = true;
            t.diagnostics.iterations = i % 13;
        }
        t.wall_time = U(gen) * 1e-3;
        rep.trials.push_back(t);
    }
    rep.best = rep.trials[select_best(rep.trials)];
    return rep;
}

}  // namespace

TEST(FormatDouble, RoundTripsBitwise) {
    std::mt19937_64 gen(99);
    std::vector<double> vals = {0.0,
                                -0.0,
                                0.1,
                                1.0 / 3.0,
                                1e300,
                                -2.5e-300,
                                std::numeric_limits<double>::max(),
                                std::numeric_limits<double>::min(),
                                std::numeric_limits<double>::denorm_min(),
                                3.0 * std::numeric_limits<double>::denorm_min(),
                                std::numeric_limits<double>::infinity(),
                                -std::numeric_limits<double>::infinity(),
                                std::numeric_limits<double>::quiet_NaN()};
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t bits = gen();
        double d;
        std::memcpy(&d, &bits, sizeof d);
        vals.push_back(d);
    }
    for (double v : vals) {
        const std::string s = format_double(v);
        EXPECT_TRUE(same_bits(parse_double(s), v)) << s;
    }
}

TEST(FormatDouble, NonFiniteSpelling) {
    EXPECT_EQ(format_double(INFINITY), "inf");
    EXPECT_EQ(format_double(-INFINITY), "-inf");
    EXPECT_EQ(format_double(NAN), "nan");
    EXPECT_THROW(parse_double("1.0x"), IoError);
    EXPECT_THROW(parse_double(""), IoError);
}

TEST(TrialLog, SixHundredTrialsGiveSixHundredAndOneLines) {
    const auto rep = synthetic_report(600);
    const auto dir = scratch_dir();
    serialize_report(rep, dir / "grid.csv");
    const std::string text = read_text_file(dir / "grid.csv");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 601);
    EXPECT_EQ(text.substr(0, kTrialLogHeader.size()), kTrialLogHeader);
}

TEST(TrialLog, FailedTrialSpelling) {
    const auto rep = synthetic_report(8);
    const auto row = to_log_row(rep.trials[3]);
    const std::string text = serialize_trial_log({row});
    EXPECT_NE(text.find(",inf,false,"), std::string::npos) << text;
}

TEST(TrialLog, ParseReserializeIsByteIdentical) {
    const auto rep = synthetic_report(600);
    std::vector<TrialLogRow> rows;
    for (const auto& t : rep.trials) rows.push_back(to_log_row(t));
    const std::string a = serialize_trial_log(rows);
    const auto parsed = parse_trial_log(a);
    EXPECT_EQ(parsed, rows);
    EXPECT_EQ(serialize_trial_log(parsed), a);
}

TEST(TrialLog, BestFileMatchesMinimumRow) {
    const auto rep = synthetic_report(120);
    const auto dir = scratch_dir();
    serialize_report(rep, dir / "run.csv");
    ASSERT_TRUE(fs::exists(dir / "run.best.csv"));
    const auto rows = parse_trial_log(read_text_file(dir / "run.csv"));
    const auto best = parse_trial_log(read_text_file(dir / "run.best.csv"));
    ASSERT_EQ(best.size(), 1u);
    const auto it = std::min_element(rows.begin(), rows.end(),
                                     [](const auto& a, const auto& b) { return a.criterion < b.criterion; });
    EXPECT_EQ(best[0], *it);
}

TEST(TrialLog, MalformedInput) {
    EXPECT_THROW(parse_trial_log("index,kernel\n"), IoError);
    const std::string hdr(kTrialLogHeader);
    EXPECT_THROW(parse_trial_log(hdr + "\n0,legendre,algebraic,1,2,true\n"), IoError);
    EXPECT_THROW(parse_trial_log(hdr + "\n0,legendre,algebraic,1,2,yes,3,0.1\n"), IoError);
    EXPECT_THROW(parse_trial_log(hdr + "\n-1,legendre,algebraic,1,2,true,3,0.1\n"), IoError);
    EXPECT_TRUE(parse_trial_log(hdr + "\n").empty());
}

TEST(ResultRows, ErrorIsRecomputed) {
    TrialConfig cfg{0, Kernel::chebyshev(), MappingKind::Exponential, 3.8};
    const CriterionResult c{std::abs(0.48519029140942 - 0.4851902914), 0.48519029140942, 0.4851902914, {}};
    const auto row = make_result_row(0.5, cfg, c);
    EXPECT_EQ(row.kernel, "chebyshev");
    EXPECT_EQ(row.mapping, "exponential");
    EXPECT_EQ(row.error, c.value);
    const auto failed = make_result_row(0.5, cfg, CriterionResult::failure(1.0, "x"));
    EXPECT_EQ(failed.error, INFINITY);

    const std::string text = serialize_result_rows({row, failed});
    const auto back = parse_result_rows(text);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].approximate, row.approximate);
    EXPECT_EQ(back[0].error, std::abs(back[0].exact - back[0].approximate));
    EXPECT_TRUE(std::isnan(back[1].approximate));
    EXPECT_EQ(serialize_result_rows(back), text);
}

TEST(BestPath, SiblingName) {
    EXPECT_EQ(best_path("out/foo.csv"), fs::path("out/foo.best.csv"));
    EXPECT_EQ(best_path("foo"), fs::path("foo.best.csv"));
    EXPECT_EQ(best_path("a.b/foo.txt"), fs::path("a.b/foo.best.txt"));
}

TEST(Files, UnwritableAndMissingPathsRaiseIoError) {
    const auto rep = synthetic_report(3);
    EXPECT_THROW(serialize_report(rep, "/nonexistent_dir_ratjac/x.csv"), IoError);
    EXPECT_THROW(read_text_file("/nonexistent_dir_ratjac/x.csv"), IoError);
    EXPECT_THROW(serialize_report(SearchReport{}, scratch_dir() / "empty.csv"), IoError);
}
