#include "toppct/indicator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "text_util.hpp"
#include "toppct/error.hpp"
#include "toppct/parallel.hpp"

namespace toppct {

IndicatorLevel IndicatorLevel::from_percent(double x) {
    if (!(x > 0.0 && x < 100.0))
        throw Error("indicator level must be in (0, 100), got " + std::to_string(x));
    return IndicatorLevel{x, x / 100.0};
}

std::string format_level_label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::vector<ReferenceSet> build_reference_sets(const Corpus& corpus) {
    std::map<ReferenceSetKey, std::vector<std::int64_t>> cells;
    for (const auto& paper : corpus.papers)
        for (const auto& category : paper.categories)
            cells[ReferenceSetKey{category, paper.year}].push_back(paper.citations);

    std::vector<ReferenceSet> sets;
    sets.reserve(cells.size());
    for (auto& [key, counts] : cells) {
        std::sort(counts.begin(), counts.end(), std::greater<>());
        sets.push_back(ReferenceSet{key, std::move(counts)});
    }
    return sets;
}

std::unordered_map<std::int64_t, double> reference_set_scores(const ReferenceSet& set,
                                                              const IndicatorLevel& level) {
    if (set.counts.empty()) throw Error("reference set is empty");
    const double quota = level.p * static_cast<double>(set.counts.size());

    std::unordered_map<std::int64_t, double> scores;
    scores.reserve(set.counts.size());
    std::size_t above = 0;  // members strictly more cited than the current group
    std::size_t i = 0;
    while (i < set.counts.size()) {
        const std::int64_t value = set.counts[i];
        std::size_t j = i;
        while (j < set.counts.size() && set.counts[j] == value) ++j;
        const std::size_t tied = j - i;
        const double share =
            (quota - static_cast<double>(above)) / static_cast<double>(tied);
        scores.emplace(value, std::clamp(share, 0.0, 1.0));
        above += tied;
        i = j;
    }
    return scores;
}

double paper_score(std::span<const double> per_category_scores) {
    if (per_category_scores.empty())
        throw Error("paper_score: empty per-category score list");
    return stable_mean(per_category_scores);
}

double stable_sum(std::span<const double> values) {
    double sum = 0.0;
    double carry = 0.0;
    for (const double v : values) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double stable_mean(std::span<const double> values) {
    return stable_sum(values) / static_cast<double>(values.size());
}

std::size_t ScoreTable::level_index(double x) const {
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i].x == x) return i;
    throw Error("no such indicator level: " + format_level_label(x));
}

ScoreTable compute_score_table(const Corpus& corpus, std::vector<IndicatorLevel> levels,
                               int threads) {
    if (levels.empty()) throw Error("compute_score_table: no indicator levels");
    for (std::size_t i = 0; i < levels.size(); ++i)
        for (std::size_t j = i + 1; j < levels.size(); ++j)
            if (levels[i].x == levels[j].x)
                throw Error("duplicate indicator level: " + format_level_label(levels[i].x));

    const std::size_t n_papers = corpus.papers.size();
    const std::size_t n_levels = levels.size();

    auto sets = build_reference_sets(corpus);

    std::map<ReferenceSetKey, std::uint32_t> set_index;
    for (std::uint32_t s = 0; s < sets.size(); ++s) set_index.emplace(sets[s].key, s);

    // Per paper, the reference set of each of its categories.
    std::vector<std::uint32_t> memberships;
    std::vector<std::size_t> member_begin(n_papers + 1, 0);
    for (std::size_t i = 0; i < n_papers; ++i)
        member_begin[i + 1] = member_begin[i] + corpus.papers[i].categories.size();
    memberships.resize(member_begin[n_papers]);
    for (std::size_t i = 0; i < n_papers; ++i) {
        const auto& paper = corpus.papers[i];
        std::size_t at = member_begin[i];
        for (const auto& category : paper.categories)
            memberships[at++] = set_index.at(ReferenceSetKey{category, paper.year});
    }

    // Tie-corrected score of every distinct count, per set and level. Sets
    // are independent, so this runs in parallel; each task owns its slot.
    std::vector<std::vector<std::unordered_map<std::int64_t, double>>> set_scores(n_levels);
    for (auto& per_level : set_scores) per_level.resize(sets.size());
    parallel_for(sets.size() * n_levels, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t task = begin; task < end; ++task) {
            const std::size_t level = task / sets.size();
            const std::size_t set = task % sets.size();
            set_scores[level][set] = reference_set_scores(sets[set], levels[level]);
        }
    });

    ScoreTable table;
    table.levels = std::move(levels);
    table.population_pp.resize(n_levels, 0.0);
    table.scores.assign(n_levels, std::vector<double>(n_papers, 0.0));
    table.ids.resize(n_papers);
    for (std::size_t i = 0; i < n_papers; ++i) table.ids[i] = corpus.papers[i].id;
    table.id_index.reserve(n_papers);
    for (std::uint32_t i = 0; i < n_papers; ++i) table.id_index.emplace(table.ids[i], i);

    parallel_for(n_papers, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::int64_t count = corpus.papers[i].citations;
            const std::size_t mb = member_begin[i];
            const std::size_t me = member_begin[i + 1];
            for (std::size_t level = 0; level < n_levels; ++level) {
                double sum = 0.0;
                for (std::size_t m = mb; m < me; ++m)
                    sum += set_scores[level][memberships[m]].at(count);
                table.scores[level][i] = sum / static_cast<double>(me - mb);
            }
        }
    });

    for (std::size_t level = 0; level < n_levels; ++level)
        table.population_pp[level] = 100.0 * stable_mean(table.scores[level]);
    return table;
}

double unit_pp(const ScoreTable& table, std::span<const std::string> unit_ids,
               std::size_t level_index) {
    if (unit_ids.empty()) throw Error("unit_pp: empty unit");
    if (level_index >= table.levels.size()) throw Error("unit_pp: level index out of range");
    std::vector<double> member_scores;
    member_scores.reserve(unit_ids.size());
    const auto& level_scores = table.scores[level_index];
    for (const auto& id : unit_ids) {
        const auto it = table.id_index.find(id);
        if (it == table.id_index.end()) throw Error("unit_pp: unknown paper id '" + id + "'");
        member_scores.push_back(level_scores[it->second]);
    }
    return 100.0 * stable_mean(member_scores);
}

double unit_pp_indices(const ScoreTable& table, std::span<const std::uint32_t> unit,
                       std::size_t level_index) {
    if (unit.empty()) throw Error("unit_pp: empty unit");
    if (level_index >= table.levels.size()) throw Error("unit_pp: level index out of range");
    const auto& level_scores = table.scores[level_index];
    double sum = 0.0;
    double carry = 0.0;
    for (const std::uint32_t i : unit) {
        const double y = level_scores[i] - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return 100.0 * sum / static_cast<double>(unit.size());
}

namespace {

std::string format_score(double score) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", score);
    return buf;
}

}  // namespace

void write_scores_csv(const ScoreTable& table, std::ostream& out) {
    out << "id";
    for (const auto& level : table.levels) out << ",score_" << format_level_label(level.x);
    out << '\n';
    std::string line;
    for (std::size_t i = 0; i < table.ids.size(); ++i) {
        line = table.ids[i];
        for (std::size_t level = 0; level < table.levels.size(); ++level) {
            line += ',';
            line += format_score(table.scores[level][i]);
        }
        line += '\n';
        out << line;
    }
}

void write_scores_csv_file(const ScoreTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    write_scores_csv(table, out);
    if (!out) throw Error("write failed: " + path);
}

ScoreTable read_scores_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error("empty input: missing scores header");
    const auto header = detail::split(detail::chomp(line), ',');
    if (header.size() < 2 || header[0] != "id")
        throw Error("bad scores header, expected 'id,score_<x>,...'");

    ScoreTable table;
    for (std::size_t i = 1; i < header.size(); ++i) {
        const std::string_view name = header[i];
        double x = 0.0;
        if (name.substr(0, 6) != "score_" || !detail::parse_double(name.substr(6), x))
            throw Error("bad scores column name '" + std::string(name) + "'");
        table.levels.push_back(IndicatorLevel::from_percent(x));
    }
    table.scores.resize(table.levels.size());

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = detail::split(detail::chomp(line), ',');
        if (fields.size() != header.size())
            throw Error("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, got " +
                        std::to_string(fields.size()));
        if (fields[0].empty()) throw Error("line " + std::to_string(line_no) + ": empty id");
        table.ids.emplace_back(fields[0]);
        for (std::size_t level = 0; level < table.levels.size(); ++level) {
            double score = 0.0;
            if (!detail::parse_double(fields[level + 1], score) || score < 0.0 || score > 1.0)
                throw Error("line " + std::to_string(line_no) + ": bad score '" +
                            std::string(fields[level + 1]) + "'");
            table.scores[level].push_back(score);
        }
    }
    if (table.ids.empty()) throw Error("scores file has no rows");

    table.id_index.reserve(table.ids.size());
    for (std::uint32_t i = 0; i < table.ids.size(); ++i) {
        if (!table.id_index.emplace(table.ids[i], i).second)
            throw Error("duplicate id '" + table.ids[i] + "' in scores file");
    }
    table.population_pp.resize(table.levels.size());
    for (std::size_t level = 0; level < table.levels.size(); ++level)
        table.population_pp[level] = 100.0 * stable_mean(table.scores[level]);
    return table;
}

ScoreTable read_scores_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path + " for reading");
    try {
        return read_scores_csv(in);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

}  // namespace toppct
