#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "toppct/corpus.hpp"
#include "toppct/error.hpp"
#include "toppct/indicator.hpp"
#include "toppct/rng.hpp"

using namespace toppct;

namespace {

ReferenceSet make_set(std::vector<std::int64_t> counts) {
    std::sort(counts.begin(), counts.end(), std::greater<>());
    return ReferenceSet{ReferenceSetKey{"X", 2000}, std::move(counts)};
}

std::vector<IndicatorLevel> levels_50_10_1() {
    return {IndicatorLevel::from_percent(50), IndicatorLevel::from_percent(10),
            IndicatorLevel::from_percent(1)};
}

// Random reference sets with very different tie structure: constant sets,
// tiny value ranges (massive ties), and near-distinct wide draws.
std::vector<std::int64_t> random_counts(Rng& rng, std::size_t n) {
    std::vector<std::int64_t> counts(n);
    switch (rng.uniform_below(4)) {
        case 0: {
            const std::int64_t v = static_cast<std::int64_t>(rng.uniform_below(50));
            for (auto& c : counts) c = v;
            break;
        }
        case 1:
            for (auto& c : counts) c = static_cast<std::int64_t>(rng.uniform_below(4));
            break;
        case 2:
            for (auto& c : counts) c = static_cast<std::int64_t>(rng.uniform_below(1000000));
            break;
        default:
            for (auto& c : counts)
                c = static_cast<std::int64_t>(std::floor(std::exp(rng.normal(1.0, 1.2))));
            break;
    }
    return counts;
}

Corpus three_paper_example() {
    Corpus corpus;
    corpus.papers.push_back({"P1", 2000, {"A"}, 5});
    corpus.papers.push_back({"P2", 2000, {"A", "B"}, 1});
    corpus.papers.push_back({"P3", 2000, {"B"}, 3});
    return corpus;
}

}  // namespace

TEST_CASE("indicator levels validate their percent") {
    CHECK(IndicatorLevel::from_percent(10).p == doctest::Approx(0.1).epsilon(1e-15));
    CHECK_THROWS_AS(IndicatorLevel::from_percent(0), Error);
    CHECK_THROWS_AS(IndicatorLevel::from_percent(100), Error);
    CHECK_THROWS_AS(IndicatorLevel::from_percent(-3), Error);
}

TEST_CASE("format_level_label drops trailing zeros") {
    CHECK(format_level_label(50.0) == "50");
    CHECK(format_level_label(10.0) == "10");
    CHECK(format_level_label(1.0) == "1");
    CHECK(format_level_label(2.5) == "2.5");
    CHECK(format_level_label(0.1) == "0.1");
}

TEST_CASE("build_reference_sets groups by category and year") {
    Corpus corpus;
    corpus.papers.push_back({"p1", 2000, {"A", "B"}, 7});
    const auto sets = build_reference_sets(corpus);
    REQUIRE(sets.size() == 2);
    CHECK(sets[0].key == ReferenceSetKey{"A", 2000});
    CHECK(sets[0].counts == std::vector<std::int64_t>{7});
    CHECK(sets[1].key == ReferenceSetKey{"B", 2000});
    CHECK(sets[1].counts == std::vector<std::int64_t>{7});

    corpus.papers.push_back({"p2", 2000, {"A"}, 3});
    const auto sets2 = build_reference_sets(corpus);
    REQUIRE(sets2.size() == 2);
    CHECK(sets2[0].counts == std::vector<std::int64_t>{7, 3});
}

TEST_CASE("reference set sizes add up to total category memberships") {
    SyntheticSpec spec;
    spec.n_papers = 10000;
    spec.n_categories = 15;
    spec.multi_category_probs = {0.6, 0.3, 0.1};
    spec.seed = 99;
    const auto corpus = generate_corpus(spec);

    std::size_t memberships = 0;
    for (const auto& paper : corpus.papers) memberships += paper.categories.size();

    std::size_t total = 0;
    for (const auto& set : build_reference_sets(corpus)) {
        CHECK(set.size() >= 1);
        total += set.size();
    }
    CHECK(total == memberships);
}

TEST_CASE("tie-corrected scores on the worked examples") {
    const auto x10 = IndicatorLevel::from_percent(10);

    SUBCASE("all distinct: the single top paper takes the whole quota") {
        const auto scores = reference_set_scores(make_set({9, 8, 7, 6, 5, 4, 3, 2, 1, 0}), x10);
        CHECK(scores.at(9) == 1.0);
        for (std::int64_t c = 0; c <= 8; ++c) CHECK(scores.at(c) == 0.0);
    }
    SUBCASE("three-way tie at the threshold splits the quota") {
        const auto scores =
            reference_set_scores(make_set({5, 5, 5, 2, 2, 2, 2, 2, 2, 2}), x10);
        CHECK(scores.at(5) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(scores.at(2) == 0.0);
    }
    SUBCASE("all tied: everyone scores p") {
        const auto scores =
            reference_set_scores(make_set({4, 4, 4, 4, 4, 4, 4}), IndicatorLevel::from_percent(33));
        CHECK(scores.at(4) == doctest::Approx(0.33).epsilon(1e-15));
    }
    SUBCASE("singleton set scores p") {
        const auto scores = reference_set_scores(make_set({12}), x10);
        CHECK(scores.at(12) == doctest::Approx(0.1).epsilon(1e-15));
    }
}

TEST_CASE("scores match the greedy quota oracle") {
    Rng rng(42);
    const auto levels = levels_50_10_1();
    for (int round = 0; round < 500; ++round) {
        const std::size_t n = 1 + rng.uniform_below(50);
        const auto counts = random_counts(rng, n);
        const auto set = make_set(counts);
        for (const auto& level : levels) {
            const auto actual = reference_set_scores(set, level);
            const auto expected = toppct::testing::greedy_topx_scores(counts, level.p);
            REQUIRE(actual.size() == expected.size());
            for (const auto& [value, score] : expected)
                CHECK(std::abs(actual.at(value) - score) <= 1e-12);
        }
    }
}

TEST_CASE("quota conservation, monotonicity, range") {
    Rng rng(7);
    std::vector<IndicatorLevel> levels = levels_50_10_1();
    for (int i = 0; i < 5; ++i)
        levels.push_back(
            IndicatorLevel::from_percent(static_cast<double>(rng.uniform_below(99)) + 0.25 +
                                         0.5 * rng.next_double()));

    for (int round = 0; round < 300; ++round) {
        const std::size_t n = 1 + rng.uniform_below(500);
        const auto set = make_set(random_counts(rng, n));
        for (const auto& level : levels) {
            const auto scores = reference_set_scores(set, level);

            double sum = 0.0;
            for (const auto c : set.counts) sum += scores.at(c);
            CHECK(std::abs(sum - level.p * static_cast<double>(n)) <=
                  1e-9 * static_cast<double>(n));

            double previous = 1.0;
            for (std::size_t i = 0; i < set.counts.size(); ++i) {
                const double s = scores.at(set.counts[i]);
                CHECK(s >= 0.0);
                CHECK(s <= 1.0);
                CHECK(s <= previous);  // counts are sorted descending
                previous = s;
            }
        }
    }
}

TEST_CASE("scores depend only on ordering and tie pattern") {
    Rng rng(13);
    for (int round = 0; round < 50; ++round) {
        const std::size_t n = 1 + rng.uniform_below(100);
        auto counts = random_counts(rng, n);
        for (auto& c : counts) c %= 10000;
        const std::int64_t factor = 2 + static_cast<std::int64_t>(rng.uniform_below(100));
        std::vector<std::int64_t> scaled(counts);
        for (auto& c : scaled) c *= factor;

        const auto level = IndicatorLevel::from_percent(1 + 98 * rng.next_double());
        const auto base = reference_set_scores(make_set(counts), level);
        const auto after = reference_set_scores(make_set(scaled), level);
        REQUIRE(base.size() == after.size());
        for (const auto& [value, score] : base) CHECK(after.at(value * factor) == score);
    }
}

TEST_CASE("paper_score averages per-category scores") {
    CHECK(paper_score(std::vector<double>{0.7}) == 0.7);
    CHECK(paper_score(std::vector<double>{1.0, 0.0}) == 0.5);
    CHECK(paper_score(std::vector<double>{1.0, 1.0 / 3.0, 0.0}) ==
          doctest::Approx(4.0 / 9.0).epsilon(1e-15));
    CHECK_THROWS_AS(paper_score(std::vector<double>{}), Error);
}

TEST_CASE("score table on the three-paper corpus") {
    const auto corpus = three_paper_example();
    const auto table =
        compute_score_table(corpus, {IndicatorLevel::from_percent(50)});

    CHECK(table.scores[0][table.id_index.at("P1")] == 1.0);
    CHECK(table.scores[0][table.id_index.at("P2")] == 0.0);
    CHECK(table.scores[0][table.id_index.at("P3")] == 1.0);
    CHECK(std::abs(table.population_pp[0] - 200.0 / 3.0) <= 1e-9);
}

TEST_CASE("single-category corpora hit the nominal value exactly") {
    SyntheticSpec spec;
    spec.n_papers = 10000;
    spec.n_categories = 9;
    spec.multi_category_probs = {1.0, 0.0, 0.0};
    spec.seed = 314;
    const auto table = compute_score_table(generate_corpus(spec), levels_50_10_1());
    CHECK(std::abs(table.population_pp[0] - 50.0) <= 1e-9);
    CHECK(std::abs(table.population_pp[1] - 10.0) <= 1e-9);
    CHECK(std::abs(table.population_pp[2] - 1.0) <= 1e-9);
}

TEST_CASE("score table rejects bad level lists") {
    const auto corpus = three_paper_example();
    CHECK_THROWS_AS(compute_score_table(corpus, {}), Error);
    CHECK_THROWS_AS(compute_score_table(corpus, {IndicatorLevel::from_percent(10),
                                                 IndicatorLevel::from_percent(10)}),
                    Error);
}

TEST_CASE("score table is identical for any thread count") {
    SyntheticSpec spec;
    spec.n_papers = 5000;
    spec.n_categories = 10;
    spec.multi_category_probs = {0.6, 0.3, 0.1};
    spec.seed = 2718;
    const auto corpus = generate_corpus(spec);
    const auto a = compute_score_table(corpus, levels_50_10_1(), 1);
    const auto b = compute_score_table(corpus, levels_50_10_1(), 4);
    CHECK(a.scores == b.scores);
    CHECK(a.population_pp == b.population_pp);
}

TEST_CASE("unit_pp") {
    const auto corpus = three_paper_example();
    const auto table = compute_score_table(corpus, {IndicatorLevel::from_percent(50)});

    SUBCASE("the whole population reproduces population_pp") {
        const std::vector<std::string> all{"P1", "P2", "P3"};
        CHECK(unit_pp(table, all, 0) == doctest::Approx(table.population_pp[0]).epsilon(1e-12));
    }
    SUBCASE("a unit of one paper with score 1 scores 100") {
        const std::vector<std::string> unit{"P1"};
        CHECK(unit_pp(table, unit, 0) == 100.0);
    }
    SUBCASE("unknown ids and empty units are errors") {
        const std::vector<std::string> unknown{"nope"};
        CHECK_THROWS_WITH_AS(unit_pp(table, unknown, 0),
                             doctest::Contains("nope"), Error);
        CHECK_THROWS_AS(unit_pp(table, std::vector<std::string>{}, 0), Error);
    }
}

TEST_CASE("unit of threshold-tied papers averages their shared score") {
    // Ten papers in one reference set, a 3-way tie at the top-10% threshold.
    Corpus corpus;
    const std::vector<std::int64_t> counts{5, 5, 5, 2, 2, 2, 2, 2, 2, 2};
    for (std::size_t i = 0; i < counts.size(); ++i)
        corpus.papers.push_back(
            {"p" + std::to_string(i + 1), 1999, {"A"}, counts[i]});
    const auto table = compute_score_table(corpus, {IndicatorLevel::from_percent(10)});
    const std::vector<std::string> tied{"p1", "p2", "p3"};
    CHECK(unit_pp(table, tied, 0) == doctest::Approx(100.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("scores CSV round trips at 12 significant digits") {
    SyntheticSpec spec;
    spec.n_papers = 300;
    spec.n_categories = 4;
    spec.multi_category_probs = {0.5, 0.4, 0.1};
    spec.seed = 11;
    const auto table = compute_score_table(generate_corpus(spec), levels_50_10_1());

    std::ostringstream out;
    write_scores_csv(table, out);
    const std::string text = out.str();
    CHECK(text.substr(0, text.find('\n')) == "id,score_50,score_10,score_1");

    std::istringstream in(text);
    const auto parsed = read_scores_csv(in);
    REQUIRE(parsed.ids == table.ids);
    REQUIRE(parsed.levels == table.levels);
    for (std::size_t level = 0; level < table.levels.size(); ++level) {
        for (std::size_t i = 0; i < table.ids.size(); ++i)
            CHECK(std::abs(parsed.scores[level][i] - table.scores[level][i]) <= 1e-11);
        CHECK(std::abs(parsed.population_pp[level] - table.population_pp[level]) <= 1e-8);
    }

    // A second write of the parsed table is byte-stable.
    std::ostringstream again;
    write_scores_csv(parsed, again);
    const std::string twice = again.str();
    std::istringstream in2(twice);
    const auto reparsed = read_scores_csv(in2);
    CHECK(reparsed.scores == parsed.scores);
}

TEST_CASE("scores CSV rejects malformed input") {
    const auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_scores_csv(in);
    };
    CHECK_THROWS_AS(parse(""), Error);
    CHECK_THROWS_AS(parse("id,weird\np1,0.5\n"), Error);
    CHECK_THROWS_AS(parse("id,score_10\np1,1.5\n"), Error);
    CHECK_THROWS_AS(parse("id,score_10\np1,0.5\np1,0.25\n"), Error);
    CHECK_THROWS_AS(parse("id,score_10\n"), Error);
    CHECK_NOTHROW(parse("id,score_10\np1,0.5\n"));
}

TEST_CASE("level_index finds configured levels") {
    const auto corpus = three_paper_example();
    const auto table = compute_score_table(corpus, levels_50_10_1());
    CHECK(table.level_index(10.0) == 1);
    CHECK_THROWS_AS(table.level_index(25.0), Error);
}
