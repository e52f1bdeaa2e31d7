#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace toppct {

struct Paper {
    std::string id;
    int year = 0;
    std::vector<std::string> categories;  // non-empty, no duplicates
    std::int64_t citations = 0;           // >= 0

    bool operator==(const Paper&) const = default;
};

struct Corpus {
    std::vector<Paper> papers;

    std::size_t population_size() const { return papers.size(); }
};

// Inclusive interval of publication years.
struct YearRange {
    int first = 1980;
    int last = 2010;
};

// Recipe for a synthetic corpus. Citation counts are discretized lognormal:
// count = floor(exp(g)) with g ~ Normal(mu, sigma). The heavy left tail puts
// many papers on the same small counts, so generated reference sets are full
// of ties.
//
// When category_log_mean_spread is nonzero, category c (0-based index) uses
// mu_c = citation_log_mean + spread * (2c/(C-1) - 1), a linear ramp across
// categories; a paper draws its count with the mean of the mu_c of its own
// categories. That gives reference sets with genuinely different citation
// levels, the situation in which multi-category averaging moves the
// population value away from the nominal x%.
struct SyntheticSpec {
    std::size_t n_papers = 0;
    std::size_t n_categories = 0;
    YearRange years;
    // P(paper has exactly 1, 2, 3 categories); sums to 1 within 1e-12.
    std::array<double, 3> multi_category_probs{1.0, 0.0, 0.0};
    double citation_log_mean = 1.0;
    double citation_log_sigma = 1.2;
    double category_log_mean_spread = 0.0;
    std::uint64_t seed = 0;
};

// Corpus CSV: header "id,year,categories,citations", one row per paper,
// categories ';'-joined, UTF-8, LF line endings. The writer emits the format
// bit-exactly; parse -> write is the identity on valid files.
Corpus parse_corpus(std::istream& in);
Corpus parse_corpus_file(const std::string& path);
void write_corpus(const Corpus& corpus, std::ostream& out);
void write_corpus_file(const Corpus& corpus, const std::string& path);

// One human-readable entry per invariant violation; empty means valid.
std::vector<std::string> validate_corpus(const Corpus& corpus);

// Deterministic function of the spec (identical spec => identical corpus).
// Throws on infeasible specs, e.g. positive probability of more categories
// per paper than exist.
Corpus generate_corpus(const SyntheticSpec& spec);

// Name of generated category `index` (0-based) out of n_categories, e.g.
// "C07" for index 6 of 20.
std::string category_name(std::size_t index, std::size_t n_categories);

}  // namespace toppct
