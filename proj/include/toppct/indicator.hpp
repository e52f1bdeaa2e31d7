#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "toppct/corpus.hpp"

namespace toppct {

// One top-x% level. x is a percent in the open interval (0, 100);
// p = x / 100 is kept alongside.
struct IndicatorLevel {
    double x = 0.0;
    double p = 0.0;

    static IndicatorLevel from_percent(double x);

    bool operator==(const IndicatorLevel&) const = default;
};

// "50" for 50.0, "2.5" for 2.5: the level as printed in column names and
// report headings, without trailing zeros.
std::string format_level_label(double x);

struct ReferenceSetKey {
    std::string category;
    int year = 0;

    bool operator==(const ReferenceSetKey&) const = default;
    auto operator<=>(const ReferenceSetKey&) const = default;
};

// All papers sharing one (category, year) cell. A paper with k categories is
// a member of k reference sets.
struct ReferenceSet {
    ReferenceSetKey key;
    std::vector<std::int64_t> counts;  // citation counts, sorted descending

    std::size_t size() const { return counts.size(); }
};

// Reference sets of a corpus, sorted by key. Never emits an empty set, and
// the sum of set sizes equals the sum over papers of their category counts.
std::vector<ReferenceSet> build_reference_sets(const Corpus& corpus);

// Tie-corrected share of the top-x% class for each distinct citation count
// in the set. For a count c with a members above it and b members equal to
// it, the score is clamp((p*N - a) / b, 0, 1): papers strictly above the
// threshold get 1, papers tied exactly at the threshold split the remaining
// quota equally, everyone below gets 0. Summed over members, each set
// contributes exactly p*N to the top class.
std::unordered_map<std::int64_t, double> reference_set_scores(const ReferenceSet& set,
                                                              const IndicatorLevel& level);

// Unweighted mean of a paper's per-category scores.
double paper_score(std::span<const double> per_category_scores);

// Compensated (Kahan) sum and mean; keeps the rounding error of long score
// sums far below the 1e-9 tolerances the indicators are specified to.
double stable_sum(std::span<const double> values);
double stable_mean(std::span<const double> values);

// Per-paper top-x% scores at each level, frozen against the full-population
// reference sets, plus the population PP per level (100 * mean score).
struct ScoreTable {
    std::vector<IndicatorLevel> levels;
    std::vector<std::string> ids;                    // corpus order
    std::vector<std::vector<double>> scores;         // [level][paper]
    std::vector<double> population_pp;               // [level], percent
    std::unordered_map<std::string, std::uint32_t> id_index;

    std::size_t population_size() const { return ids.size(); }
    std::size_t level_count() const { return levels.size(); }

    // Index of the level with this x value; throws if absent.
    std::size_t level_index(double x) const;
};

ScoreTable compute_score_table(const Corpus& corpus, std::vector<IndicatorLevel> levels,
                               int threads = 0);

// PP(top x%) of a unit: 100 * mean of the member papers' scores at the
// level. The id overload throws on unknown ids and empty units.
double unit_pp(const ScoreTable& table, std::span<const std::string> unit_ids,
               std::size_t level_index);
double unit_pp_indices(const ScoreTable& table, std::span<const std::uint32_t> unit,
                       std::size_t level_index);

// Scores CSV: header "id,score_<x>,..." with one column per level (x printed
// without trailing zeros), scores with 12 significant digits. Reading
// recomputes population_pp from the parsed scores.
void write_scores_csv(const ScoreTable& table, std::ostream& out);
void write_scores_csv_file(const ScoreTable& table, const std::string& path);
ScoreTable read_scores_csv(std::istream& in);
ScoreTable read_scores_csv_file(const std::string& path);

}  // namespace toppct
