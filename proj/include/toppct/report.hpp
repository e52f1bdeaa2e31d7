#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "toppct/sampling.hpp"

namespace toppct {

enum class ReportFormat { markdown, csv };

struct ReportOptions {
    ReportFormat format = ReportFormat::markdown;
    int decimals = 3;  // in [0, 12]
};

// One results row: the key figures of a (level, sample size) cell.
struct ResultRow {
    double x = 0.0;
    std::size_t sample_size = 0;
    std::size_t trials = 0;
    KeyFigures figures;
};

std::vector<ResultRow> result_rows(const ExperimentResult& result);

// `value` rounded half-to-even to `decimals` places, fixed notation.
std::string format_fixed(double value, int decimals);

// Markdown: one section per level titled "PP(top x%)", one row per sample
// size, columns Minimum, 1. quartile, Median, Mean, 3. quartile, Maximum.
// CSV: "x,sample_size,trials,minimum,q1,median,mean,q3,maximum". Both are
// pure functions of the input.
std::string format_report(std::span<const ResultRow> rows, const ReportOptions& options);
std::string format_report(const ExperimentResult& result, const ReportOptions& options);

void write_results_csv(std::span<const ResultRow> rows, std::ostream& out, int decimals = 3);
void write_results_csv_file(std::span<const ResultRow> rows, const std::string& path,
                            int decimals = 3);
std::vector<ResultRow> parse_results_csv(std::istream& in);
std::vector<ResultRow> parse_results_csv_file(const std::string& path);

// Raw trial values, "x,sample_size,trial_index,pp" with 0-based trial_index.
void write_raw_trials_csv(const ExperimentResult& result, std::ostream& out);
void write_raw_trials_csv_file(const ExperimentResult& result, const std::string& path);

}  // namespace toppct
