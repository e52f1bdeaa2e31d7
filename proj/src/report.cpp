#include "toppct/report.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "text_util.hpp"
#include "toppct/error.hpp"

namespace toppct {

namespace {

constexpr std::string_view kResultsHeader =
    "x,sample_size,trials,minimum,q1,median,mean,q3,maximum";

void check_decimals(int decimals) {
    if (decimals < 0 || decimals > 12)
        throw Error("decimals must be in [0, 12], got " + std::to_string(decimals));
}

}  // namespace

std::string format_fixed(double value, int decimals) {
    check_decimals(decimals);
    char buf[64];
    // glibc converts the exact binary value and resolves decimal ties to
    // even, which is the rounding the report formats promise.
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

std::vector<ResultRow> result_rows(const ExperimentResult& result) {
    std::vector<ResultRow> rows;
    rows.reserve(result.config.levels.size() * result.config.sample_sizes.size());
    for (std::size_t l = 0; l < result.config.levels.size(); ++l)
        for (std::size_t s = 0; s < result.config.sample_sizes.size(); ++s)
            rows.push_back(ResultRow{result.config.levels[l].x, result.config.sample_sizes[s],
                                     result.config.trials, result.cells[l][s].figures});
    return rows;
}

namespace {

void append_markdown(std::string& out, std::span<const ResultRow> rows, int decimals) {
    bool first_section = true;
    std::size_t i = 0;
    while (i < rows.size()) {
        const double x = rows[i].x;
        if (!first_section) out += '\n';
        first_section = false;
        out += "## PP(top " + format_level_label(x) + "%)\n\n";
        out += "| Sample size | Minimum | 1. quartile | Median | Mean | 3. quartile | Maximum |\n";
        out += "| ---: | ---: | ---: | ---: | ---: | ---: | ---: |\n";
        for (; i < rows.size() && rows[i].x == x; ++i) {
            const KeyFigures& f = rows[i].figures;
            out += "| " + std::to_string(rows[i].sample_size);
            for (const double v : {f.minimum, f.q1, f.median, f.mean, f.q3, f.maximum})
                out += " | " + format_fixed(v, decimals);
            out += " |\n";
        }
    }
}

void append_csv(std::string& out, std::span<const ResultRow> rows, int decimals) {
    out += kResultsHeader;
    out += '\n';
    for (const auto& row : rows) {
        const KeyFigures& f = row.figures;
        out += format_level_label(row.x);
        out += ',' + std::to_string(row.sample_size);
        out += ',' + std::to_string(row.trials);
        for (const double v : {f.minimum, f.q1, f.median, f.mean, f.q3, f.maximum})
            out += ',' + format_fixed(v, decimals);
        out += '\n';
    }
}

}  // namespace

std::string format_report(std::span<const ResultRow> rows, const ReportOptions& options) {
    check_decimals(options.decimals);
    std::string out;
    if (options.format == ReportFormat::markdown)
        append_markdown(out, rows, options.decimals);
    else
        append_csv(out, rows, options.decimals);
    return out;
}

std::string format_report(const ExperimentResult& result, const ReportOptions& options) {
    const auto rows = result_rows(result);
    return format_report(rows, options);
}

void write_results_csv(std::span<const ResultRow> rows, std::ostream& out, int decimals) {
    std::string text;
    append_csv(text, rows, decimals);
    out << text;
}

void write_results_csv_file(std::span<const ResultRow> rows, const std::string& path,
                            int decimals) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    write_results_csv(rows, out, decimals);
    if (!out) throw Error("write failed: " + path);
}

std::vector<ResultRow> parse_results_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error("empty input: missing results header");
    if (detail::chomp(line) != kResultsHeader)
        throw Error("bad results header, expected '" + std::string(kResultsHeader) + "'");

    std::vector<ResultRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = detail::split(detail::chomp(line), ',');
        if (fields.size() != 9)
            throw Error("line " + std::to_string(line_no) + ": expected 9 fields, got " +
                        std::to_string(fields.size()));
        ResultRow row;
        double* figures[6] = {&row.figures.minimum, &row.figures.q1,   &row.figures.median,
                              &row.figures.mean,    &row.figures.q3,   &row.figures.maximum};
        if (!detail::parse_double(fields[0], row.x))
            throw Error("line " + std::to_string(line_no) + ": bad x '" +
                        std::string(fields[0]) + "'");
        if (!detail::parse_int(fields[1], row.sample_size))
            throw Error("line " + std::to_string(line_no) + ": bad sample_size '" +
                        std::string(fields[1]) + "'");
        if (!detail::parse_int(fields[2], row.trials))
            throw Error("line " + std::to_string(line_no) + ": bad trials '" +
                        std::string(fields[2]) + "'");
        for (std::size_t i = 0; i < 6; ++i)
            if (!detail::parse_double(fields[3 + i], *figures[i]))
                throw Error("line " + std::to_string(line_no) + ": bad figure '" +
                            std::string(fields[3 + i]) + "'");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ResultRow> parse_results_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path + " for reading");
    try {
        return parse_results_csv(in);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

void write_raw_trials_csv(const ExperimentResult& result, std::ostream& out) {
    out << "x,sample_size,trial_index,pp\n";
    char buf[40];
    for (std::size_t l = 0; l < result.config.levels.size(); ++l) {
        const std::string label = format_level_label(result.config.levels[l].x);
        for (std::size_t s = 0; s < result.config.sample_sizes.size(); ++s) {
            const auto& trial_pp = result.cells[l][s].trial_pp;
            for (std::size_t r = 0; r < trial_pp.size(); ++r) {
                std::snprintf(buf, sizeof(buf), "%.12g", trial_pp[r]);
                out << label << ',' << result.config.sample_sizes[s] << ',' << r << ',' << buf
                    << '\n';
            }
        }
    }
}

void write_raw_trials_csv_file(const ExperimentResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    write_raw_trials_csv(result, out);
    if (!out) throw Error("write failed: " + path);
}

}  // namespace toppct
