#include "toppct/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "text_util.hpp"
#include "toppct/error.hpp"
#include "toppct/rng.hpp"

namespace toppct {

namespace {

constexpr std::string_view kCorpusHeader = "id,year,categories,citations";

[[noreturn]] void row_error(std::size_t line, const std::string& what) {
    throw Error("line " + std::to_string(line) + ": " + what);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path + " for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    return out;
}

}  // namespace

Corpus parse_corpus(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error("empty input: missing corpus header");
    if (detail::chomp(line) != kCorpusHeader)
        throw Error("bad corpus header, expected '" + std::string(kCorpusHeader) + "'");

    Corpus corpus;
    std::unordered_set<std::string> seen_ids;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = detail::chomp(line);
        if (row.empty()) row_error(line_no, "empty row");
        const auto fields = detail::split(row, ',');
        if (fields.size() != 4)
            row_error(line_no, "expected 4 fields, got " + std::to_string(fields.size()));

        Paper paper;
        paper.id = std::string(fields[0]);
        if (paper.id.empty()) row_error(line_no, "empty id");

        if (!detail::parse_int(fields[1], paper.year))
            row_error(line_no, "non-integer year '" + std::string(fields[1]) + "'");

        if (fields[2].empty()) row_error(line_no, "empty category list");
        for (const auto cat : detail::split(fields[2], ';')) {
            if (cat.empty()) row_error(line_no, "empty category name");
            paper.categories.emplace_back(cat);
        }
        for (std::size_t i = 0; i < paper.categories.size(); ++i)
            for (std::size_t j = i + 1; j < paper.categories.size(); ++j)
                if (paper.categories[i] == paper.categories[j])
                    row_error(line_no, "duplicate category '" + paper.categories[i] + "'");

        if (!detail::parse_int(fields[3], paper.citations)) {
            // Distinguish "negative" from "not a number" for the message.
            if (!fields[3].empty() && fields[3][0] == '-') {
                std::int64_t value = 0;
                if (detail::parse_int(fields[3].substr(1), value))
                    row_error(line_no, "negative citations (" + std::string(fields[3]) + ")");
            }
            row_error(line_no, "non-integer citations '" + std::string(fields[3]) + "'");
        }
        if (paper.citations < 0)
            row_error(line_no, "negative citations (" + std::to_string(paper.citations) + ")");

        if (!seen_ids.insert(paper.id).second)
            row_error(line_no, "duplicate id '" + paper.id + "'");
        corpus.papers.push_back(std::move(paper));
    }
    return corpus;
}

Corpus parse_corpus_file(const std::string& path) {
    auto in = open_input(path);
    try {
        return parse_corpus(in);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
    out << kCorpusHeader << '\n';
    for (const auto& paper : corpus.papers) {
        out << paper.id << ',' << paper.year << ',';
        for (std::size_t i = 0; i < paper.categories.size(); ++i) {
            if (i > 0) out << ';';
            out << paper.categories[i];
        }
        out << ',' << paper.citations << '\n';
    }
}

void write_corpus_file(const Corpus& corpus, const std::string& path) {
    auto out = open_output(path);
    write_corpus(corpus, out);
    if (!out) throw Error("write failed: " + path);
}

std::vector<std::string> validate_corpus(const Corpus& corpus) {
    std::vector<std::string> violations;
    std::unordered_set<std::string_view> seen_ids;
    for (const auto& paper : corpus.papers) {
        if (!seen_ids.insert(paper.id).second)
            violations.push_back("duplicate id: " + paper.id);
        if (paper.citations < 0)
            violations.push_back("paper " + paper.id + ": negative citations (" +
                                 std::to_string(paper.citations) + ")");
        if (paper.categories.empty())
            violations.push_back("paper " + paper.id + ": empty category set");
        for (std::size_t i = 0; i < paper.categories.size(); ++i)
            for (std::size_t j = i + 1; j < paper.categories.size(); ++j)
                if (paper.categories[i] == paper.categories[j])
                    violations.push_back("paper " + paper.id + ": duplicate category '" +
                                         paper.categories[i] + "'");
    }
    return violations;
}

std::string category_name(std::size_t index, std::size_t n_categories) {
    std::size_t width = 1;
    for (std::size_t n = n_categories; n >= 10; n /= 10) ++width;
    std::string digits = std::to_string(index + 1);
    std::string name = "C";
    name.append(width > digits.size() ? width - digits.size() : 0, '0');
    name += digits;
    return name;
}

namespace {

void check_spec(const SyntheticSpec& spec) {
    if (spec.n_papers < 1) throw Error("synthetic spec: n_papers must be >= 1");
    if (spec.n_categories < 1) throw Error("synthetic spec: n_categories must be >= 1");
    if (spec.years.last < spec.years.first)
        throw Error("synthetic spec: empty year range");
    double sum = 0.0;
    for (std::size_t k = 0; k < spec.multi_category_probs.size(); ++k) {
        const double prob = spec.multi_category_probs[k];
        if (prob < 0.0 || prob > 1.0)
            throw Error("synthetic spec: membership probability out of [0,1]");
        if (prob > 0.0 && k + 1 > spec.n_categories)
            throw Error("synthetic spec: infeasible, P(k=" + std::to_string(k + 1) +
                        ") > 0 with only " + std::to_string(spec.n_categories) + " categories");
        sum += prob;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw Error("synthetic spec: membership probabilities must sum to 1");
    if (spec.citation_log_sigma < 0.0)
        throw Error("synthetic spec: citation_log_sigma must be >= 0");
}

std::int64_t lognormal_count(Rng& rng, double mu, double sigma) {
    const double g = rng.normal(mu, sigma);
    const double value = std::floor(std::exp(g));
    if (value <= 0.0) return 0;
    // Keep extreme draws inside int64 range.
    if (value >= 9.0e18) return 9'000'000'000'000'000'000LL;
    return static_cast<std::int64_t>(value);
}

}  // namespace

Corpus generate_corpus(const SyntheticSpec& spec) {
    check_spec(spec);
    Rng rng(spec.seed);

    std::vector<std::string> names(spec.n_categories);
    std::vector<double> mu(spec.n_categories);
    for (std::size_t c = 0; c < spec.n_categories; ++c) {
        names[c] = category_name(c, spec.n_categories);
        const double ramp = spec.n_categories == 1
                                ? 0.0
                                : 2.0 * static_cast<double>(c) /
                                          static_cast<double>(spec.n_categories - 1) -
                                      1.0;
        mu[c] = spec.citation_log_mean + spec.category_log_mean_spread * ramp;
    }

    const std::uint64_t year_span =
        static_cast<std::uint64_t>(spec.years.last - spec.years.first) + 1;

    Corpus corpus;
    corpus.papers.resize(spec.n_papers);
    std::size_t picks[3];
    // Draw order per paper: year, membership count, categories, citations.
    for (std::size_t i = 0; i < spec.n_papers; ++i) {
        Paper& paper = corpus.papers[i];
        paper.id = "p" + std::to_string(i + 1);
        paper.year = spec.years.first + static_cast<int>(rng.uniform_below(year_span));

        const double u = rng.next_double();
        std::size_t k = 1;
        if (u >= spec.multi_category_probs[0]) {
            k = (u < spec.multi_category_probs[0] + spec.multi_category_probs[1]) ? 2 : 3;
        }

        // Floyd's subset sampling: k distinct categories, uniform over subsets.
        std::size_t n_picked = 0;
        for (std::size_t j = spec.n_categories - k; j < spec.n_categories; ++j) {
            const std::size_t t = static_cast<std::size_t>(rng.uniform_below(j + 1));
            bool taken = false;
            for (std::size_t q = 0; q < n_picked; ++q) taken = taken || picks[q] == t;
            picks[n_picked++] = taken ? j : t;
        }
        std::sort(picks, picks + n_picked);

        double paper_mu = 0.0;
        paper.categories.reserve(k);
        for (std::size_t q = 0; q < n_picked; ++q) {
            paper.categories.push_back(names[picks[q]]);
            paper_mu += mu[picks[q]];
        }
        paper_mu /= static_cast<double>(n_picked);

        paper.citations = lognormal_count(rng, paper_mu, spec.citation_log_sigma);
    }
    return corpus;
}

}  // namespace toppct
