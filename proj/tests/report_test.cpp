#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "toppct/corpus.hpp"
#include "toppct/error.hpp"
#include "toppct/report.hpp"

using namespace toppct;

namespace {

std::vector<ResultRow> sample_rows() {
    return {
        {50.0, 100, 1000, {33.870, 46.440, 49.550, 49.410, 52.620, 62.810}},
        {50.0, 500, 1000, {43.000, 47.950, 49.380, 49.390, 50.860, 56.160}},
        {10.0, 100, 1000, {2.385, 8.035, 9.871, 9.980, 12.000, 18.588}},
        {10.0, 500, 1000, {6.310, 9.020, 9.923, 9.931, 10.808, 13.407}},
    };
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++count;
    return count;
}

}  // namespace

TEST_CASE("format_fixed rounds half to even") {
    CHECK(format_fixed(5.0, 3) == "5.000");
    CHECK(format_fixed(2.5, 0) == "2");
    CHECK(format_fixed(3.5, 0) == "4");
    CHECK(format_fixed(0.125, 2) == "0.12");
    CHECK(format_fixed(0.375, 2) == "0.38");
    CHECK(format_fixed(0.0625, 3) == "0.062");
    CHECK(format_fixed(49.3795, 3) == "49.380");  // exact binary value is above the tie
    CHECK(format_fixed(1.0 / 3.0, 12) == "0.333333333333");
    CHECK_THROWS_AS(format_fixed(1.0, 13), Error);
    CHECK_THROWS_AS(format_fixed(1.0, -1), Error);
}

TEST_CASE("markdown report shape") {
    const auto rows = sample_rows();
    const auto text = format_report(rows, ReportOptions{ReportFormat::markdown, 3});

    CHECK(count_occurrences(text, "## PP(top 50%)") == 1);
    CHECK(count_occurrences(text, "## PP(top 10%)") == 1);
    CHECK(text.find("## PP(top 50%)") < text.find("## PP(top 10%)"));
    CHECK(count_occurrences(
              text,
              "| Sample size | Minimum | 1. quartile | Median | Mean | 3. quartile | Maximum |") ==
          2);
    CHECK(text.find("| 100 | 33.870 | 46.440 | 49.550 | 49.410 | 52.620 | 62.810 |") !=
          std::string::npos);
    CHECK(text.find("| 500 | 6.310 | 9.020 | 9.923 | 9.931 | 10.808 | 13.407 |") !=
          std::string::npos);
}

TEST_CASE("a constant cell renders six equal figures") {
    const std::vector<ResultRow> rows{{10.0, 7, 1, {5.0, 5.0, 5.0, 5.0, 5.0, 5.0}}};
    const auto text = format_report(rows, ReportOptions{ReportFormat::markdown, 3});
    CHECK(text.find("5.000 | 5.000 | 5.000 | 5.000 | 5.000 | 5.000") != std::string::npos);
}

TEST_CASE("report output is a pure function of its input") {
    const auto rows = sample_rows();
    const ReportOptions markdown{ReportFormat::markdown, 3};
    const ReportOptions csv{ReportFormat::csv, 3};
    CHECK(format_report(rows, markdown) == format_report(rows, markdown));
    CHECK(format_report(rows, csv) == format_report(rows, csv));
}

TEST_CASE("results CSV round trips at the printed precision") {
    const auto rows = sample_rows();
    std::ostringstream out;
    write_results_csv(rows, out, 3);
    const auto text = out.str();
    CHECK(text.rfind("x,sample_size,trials,minimum,q1,median,mean,q3,maximum\n", 0) == 0);
    CHECK(format_report(rows, ReportOptions{ReportFormat::csv, 3}) == text);

    std::istringstream in(text);
    const auto parsed = parse_results_csv(in);
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i].x == rows[i].x);
        CHECK(parsed[i].sample_size == rows[i].sample_size);
        CHECK(parsed[i].trials == rows[i].trials);
        const double* got[6] = {&parsed[i].figures.minimum, &parsed[i].figures.q1,
                                &parsed[i].figures.median,  &parsed[i].figures.mean,
                                &parsed[i].figures.q3,      &parsed[i].figures.maximum};
        const double want[6] = {rows[i].figures.minimum, rows[i].figures.q1,
                                rows[i].figures.median,  rows[i].figures.mean,
                                rows[i].figures.q3,      rows[i].figures.maximum};
        for (std::size_t f = 0; f < 6; ++f) CHECK(std::abs(*got[f] - want[f]) <= 5.0001e-4);
    }
}

TEST_CASE("results CSV parsing rejects malformed input") {
    const auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_results_csv(in);
    };
    CHECK_THROWS_AS(parse(""), Error);
    CHECK_THROWS_AS(parse("wrong,header\n"), Error);
    CHECK_THROWS_AS(parse("x,sample_size,trials,minimum,q1,median,mean,q3,maximum\n"
                          "10,100,1000,1,2,3\n"),
                    Error);
    CHECK_THROWS_AS(parse("x,sample_size,trials,minimum,q1,median,mean,q3,maximum\n"
                          "10,many,1000,1,2,3,4,5,6\n"),
                    Error);
}

TEST_CASE("experiment results render end to end") {
    SyntheticSpec spec;
    spec.n_papers = 400;
    spec.n_categories = 4;
    spec.seed = 12;
    const auto table = compute_score_table(generate_corpus(spec),
                                           {IndicatorLevel::from_percent(50),
                                            IndicatorLevel::from_percent(10)});
    ExperimentConfig config;
    config.sample_sizes = {10, 40};
    config.trials = 25;
    config.master_seed = 3;
    const auto result = run_experiment(table, config);

    const auto rows = result_rows(result);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].x == 50.0);
    CHECK(rows[0].sample_size == 10);
    CHECK(rows[3].x == 10.0);
    CHECK(rows[3].sample_size == 40);

    const auto markdown = format_report(result, ReportOptions{});
    CHECK(markdown.find("## PP(top 50%)") != std::string::npos);
    CHECK(markdown.find("## PP(top 10%)") != std::string::npos);

    std::ostringstream raw;
    write_raw_trials_csv(result, raw);
    const auto raw_text = raw.str();
    CHECK(raw_text.rfind("x,sample_size,trial_index,pp\n", 0) == 0);
    CHECK(count_occurrences(raw_text, "\n") == 1 + 2 * 2 * 25);
    CHECK(raw_text.find("50,10,0,") != std::string::npos);
}
