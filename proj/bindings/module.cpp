#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "toppct/corpus.hpp"
#include "toppct/error.hpp"
#include "toppct/indicator.hpp"
#include "toppct/report.hpp"
#include "toppct/rng.hpp"
#include "toppct/sampling.hpp"

namespace py = pybind11;
using namespace toppct;

namespace {

std::vector<IndicatorLevel> levels_from_percents(const std::vector<double>& percents) {
    std::vector<IndicatorLevel> levels;
    levels.reserve(percents.size());
    for (const double x : percents) levels.push_back(IndicatorLevel::from_percent(x));
    return levels;
}

std::vector<double> percents_of(const std::vector<IndicatorLevel>& levels) {
    std::vector<double> percents;
    percents.reserve(levels.size());
    for (const auto& level : levels) percents.push_back(level.x);
    return percents;
}

ReportOptions make_options(const std::string& format, int decimals) {
    ReportOptions options;
    if (format == "markdown")
        options.format = ReportFormat::markdown;
    else if (format == "csv")
        options.format = ReportFormat::csv;
    else
        throw Error("format must be 'markdown' or 'csv', got '" + format + "'");
    options.decimals = decimals;
    return options;
}

}  // namespace

PYBIND11_MODULE(_toppct, m) {
    m.doc() = "Tie-corrected top-x% citation indicators and sampling experiments";
    m.attr("__version__") = "1.0.0";

    py::register_exception<Error>(m, "Error");

    py::class_<Paper>(m, "Paper")
        .def(py::init<>())
        .def(py::init([](std::string id, int year, std::vector<std::string> categories,
                         std::int64_t citations) {
                 return Paper{std::move(id), year, std::move(categories), citations};
             }),
             py::arg("id"), py::arg("year"), py::arg("categories"), py::arg("citations"))
        .def_readwrite("id", &Paper::id)
        .def_readwrite("year", &Paper::year)
        .def_readwrite("categories", &Paper::categories)
        .def_readwrite("citations", &Paper::citations)
        .def("__repr__", [](const Paper& p) {
            return "Paper(id='" + p.id + "', year=" + std::to_string(p.year) +
                   ", citations=" + std::to_string(p.citations) + ")";
        });

    py::class_<Corpus>(m, "Corpus")
        .def(py::init<>())
        .def(py::init([](std::vector<Paper> papers) {
                 Corpus corpus;
                 corpus.papers = std::move(papers);
                 return corpus;
             }),
             py::arg("papers"))
        .def_readwrite("papers", &Corpus::papers)
        .def_property_readonly("population_size", &Corpus::population_size)
        .def("__len__", &Corpus::population_size);

    py::class_<YearRange>(m, "YearRange")
        .def(py::init<>())
        .def(py::init([](int first, int last) { return YearRange{first, last}; }),
             py::arg("first"), py::arg("last"))
        .def_readwrite("first", &YearRange::first)
        .def_readwrite("last", &YearRange::last);

    py::class_<SyntheticSpec>(m, "SyntheticSpec")
        .def(py::init<>())
        .def_readwrite("n_papers", &SyntheticSpec::n_papers)
        .def_readwrite("n_categories", &SyntheticSpec::n_categories)
        .def_readwrite("years", &SyntheticSpec::years)
        .def_readwrite("multi_category_probs", &SyntheticSpec::multi_category_probs)
        .def_readwrite("citation_log_mean", &SyntheticSpec::citation_log_mean)
        .def_readwrite("citation_log_sigma", &SyntheticSpec::citation_log_sigma)
        .def_readwrite("category_log_mean_spread", &SyntheticSpec::category_log_mean_spread)
        .def_readwrite("seed", &SyntheticSpec::seed);

    m.def("generate_corpus", &generate_corpus, py::arg("spec"),
          "Deterministic synthetic corpus from a SyntheticSpec");
    m.def("validate_corpus", &validate_corpus, py::arg("corpus"),
          "List of invariant violations; empty means valid");
    m.def("category_name", &category_name, py::arg("index"), py::arg("n_categories"));

    m.def(
        "parse_corpus",
        [](const std::string& text) {
            std::istringstream in(text);
            return parse_corpus(in);
        },
        py::arg("text"), "Parse a corpus CSV given as a string");
    m.def("parse_corpus_file", &parse_corpus_file, py::arg("path"));
    m.def(
        "write_corpus",
        [](const Corpus& corpus) {
            std::ostringstream out;
            write_corpus(corpus, out);
            return out.str();
        },
        py::arg("corpus"), "Render a corpus as CSV text");
    m.def("write_corpus_file", &write_corpus_file, py::arg("corpus"), py::arg("path"));

    py::class_<IndicatorLevel>(m, "IndicatorLevel")
        .def_static("from_percent", &IndicatorLevel::from_percent, py::arg("x"))
        .def_readonly("x", &IndicatorLevel::x)
        .def_readonly("p", &IndicatorLevel::p)
        .def("__repr__", [](const IndicatorLevel& level) {
            return "IndicatorLevel(x=" + format_level_label(level.x) + ")";
        });

    m.def("format_level_label", &format_level_label, py::arg("x"));

    py::class_<ReferenceSetKey>(m, "ReferenceSetKey")
        .def(py::init([](std::string category, int year) {
                 return ReferenceSetKey{std::move(category), year};
             }),
             py::arg("category"), py::arg("year"))
        .def_readwrite("category", &ReferenceSetKey::category)
        .def_readwrite("year", &ReferenceSetKey::year)
        .def("__repr__", [](const ReferenceSetKey& key) {
            return "ReferenceSetKey(category='" + key.category +
                   "', year=" + std::to_string(key.year) + ")";
        });

    py::class_<ReferenceSet>(m, "ReferenceSet")
        .def_readonly("key", &ReferenceSet::key)
        .def_readonly("counts", &ReferenceSet::counts)
        .def("__len__", &ReferenceSet::size);

    m.def("build_reference_sets", &build_reference_sets, py::arg("corpus"));
    m.def(
        "reference_set_scores",
        [](const ReferenceSet& set, double x) {
            return reference_set_scores(set, IndicatorLevel::from_percent(x));
        },
        py::arg("set"), py::arg("x"),
        "Tie-corrected top-x% score per distinct citation count");
    m.def(
        "paper_score",
        [](const std::vector<double>& scores) {
            return paper_score(std::span<const double>(scores));
        },
        py::arg("per_category_scores"));

    py::class_<ScoreTable>(m, "ScoreTable")
        .def_property_readonly("levels",
                               [](const ScoreTable& t) { return percents_of(t.levels); })
        .def_readonly("ids", &ScoreTable::ids)
        .def_readonly("population_pp", &ScoreTable::population_pp)
        .def_property_readonly("population_size", &ScoreTable::population_size)
        .def("level_index", &ScoreTable::level_index, py::arg("x"))
        .def(
            "score",
            [](const ScoreTable& t, const std::string& id, std::size_t level_index) {
                const auto it = t.id_index.find(id);
                if (it == t.id_index.end()) throw Error("unknown paper id '" + id + "'");
                if (level_index >= t.scores.size()) throw Error("level index out of range");
                return t.scores[level_index][it->second];
            },
            py::arg("id"), py::arg("level_index"))
        .def(
            "level_scores",
            [](const ScoreTable& t, std::size_t level_index) {
                if (level_index >= t.scores.size()) throw Error("level index out of range");
                return t.scores[level_index];
            },
            py::arg("level_index"))
        .def("__len__", &ScoreTable::population_size);

    m.def(
        "compute_score_table",
        [](const Corpus& corpus, const std::vector<double>& levels, int threads) {
            return compute_score_table(corpus, levels_from_percents(levels), threads);
        },
        py::arg("corpus"), py::arg("levels"), py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>(),
        "Score every paper against its reference sets at the given percent levels");
    m.def(
        "unit_pp",
        [](const ScoreTable& table, const std::vector<std::string>& ids,
           std::size_t level_index) { return unit_pp(table, ids, level_index); },
        py::arg("table"), py::arg("unit_ids"), py::arg("level_index"));
    m.def("write_scores_csv_file", &write_scores_csv_file, py::arg("table"), py::arg("path"));
    m.def("read_scores_csv_file", &read_scores_csv_file, py::arg("path"));
    m.def(
        "write_scores_csv",
        [](const ScoreTable& table) {
            std::ostringstream out;
            write_scores_csv(table, out);
            return out.str();
        },
        py::arg("table"));
    m.def(
        "read_scores_csv",
        [](const std::string& text) {
            std::istringstream in(text);
            return read_scores_csv(in);
        },
        py::arg("text"));

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("next", &Rng::next)
        .def("uniform_below", &Rng::uniform_below, py::arg("bound"))
        .def("next_double", &Rng::next_double)
        .def("normal", py::overload_cast<double, double>(&Rng::normal), py::arg("mean"),
             py::arg("sigma"));

    m.def("derive_seed", &derive_seed, py::arg("master_seed"), py::arg("level_index"),
          py::arg("size_index"), py::arg("trial_index"));
    m.def("derive_stream", &derive_stream, py::arg("master_seed"), py::arg("level_index"),
          py::arg("size_index"), py::arg("trial_index"));
    m.def("draw_sample", &draw_sample, py::arg("population"), py::arg("size"), py::arg("rng"));
    m.def(
        "draw_sample_ids",
        [](const std::vector<std::string>& population, std::size_t size, Rng& rng) {
            return draw_sample_ids(population, size, rng);
        },
        py::arg("population"), py::arg("size"), py::arg("rng"));

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def(py::init([](const std::vector<double>& levels, std::vector<std::size_t> sizes,
                         std::size_t trials, std::uint64_t seed) {
                 ExperimentConfig config;
                 config.levels = levels_from_percents(levels);
                 config.sample_sizes = std::move(sizes);
                 config.trials = trials;
                 config.master_seed = seed;
                 return config;
             }),
             py::arg("levels"), py::arg("sample_sizes"), py::arg("trials"),
             py::arg("master_seed") = 0)
        .def_property(
            "levels", [](const ExperimentConfig& c) { return percents_of(c.levels); },
            [](ExperimentConfig& c, const std::vector<double>& percents) {
                c.levels = levels_from_percents(percents);
            })
        .def_readwrite("sample_sizes", &ExperimentConfig::sample_sizes)
        .def_readwrite("trials", &ExperimentConfig::trials)
        .def_readwrite("master_seed", &ExperimentConfig::master_seed);

    py::class_<KeyFigures>(m, "KeyFigures")
        .def_readonly("minimum", &KeyFigures::minimum)
        .def_readonly("q1", &KeyFigures::q1)
        .def_readonly("median", &KeyFigures::median)
        .def_readonly("mean", &KeyFigures::mean)
        .def_readonly("q3", &KeyFigures::q3)
        .def_readonly("maximum", &KeyFigures::maximum)
        .def("__repr__", [](const KeyFigures& f) {
            std::ostringstream out;
            out << "KeyFigures(minimum=" << f.minimum << ", q1=" << f.q1
                << ", median=" << f.median << ", mean=" << f.mean << ", q3=" << f.q3
                << ", maximum=" << f.maximum << ")";
            return out.str();
        });

    m.def(
        "key_figures",
        [](const std::vector<double>& values) {
            return key_figures(std::span<const double>(values));
        },
        py::arg("values"));

    py::class_<ExperimentCell>(m, "ExperimentCell")
        .def_readonly("figures", &ExperimentCell::figures)
        .def_readonly("trial_pp", &ExperimentCell::trial_pp);

    py::class_<ExperimentResult>(m, "ExperimentResult")
        .def_property_readonly(
            "levels", [](const ExperimentResult& r) { return percents_of(r.config.levels); })
        .def_property_readonly(
            "sample_sizes",
            [](const ExperimentResult& r) { return r.config.sample_sizes; })
        .def_property_readonly("trials",
                               [](const ExperimentResult& r) { return r.config.trials; })
        .def_readonly("population_pp", &ExperimentResult::population_pp)
        .def("cell", &ExperimentResult::cell, py::arg("level_index"), py::arg("size_index"),
             py::return_value_policy::reference_internal);

    m.def("run_experiment", &run_experiment, py::arg("table"), py::arg("config"),
          py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>(),
          "Repeated random-sampling experiment over a frozen score table");

    py::class_<ResultRow>(m, "ResultRow")
        .def_readonly("x", &ResultRow::x)
        .def_readonly("sample_size", &ResultRow::sample_size)
        .def_readonly("trials", &ResultRow::trials)
        .def_readonly("figures", &ResultRow::figures);

    m.def("result_rows", &result_rows, py::arg("result"));
    m.def(
        "format_report",
        [](const ExperimentResult& result, const std::string& format, int decimals) {
            return format_report(result, make_options(format, decimals));
        },
        py::arg("result"), py::arg("format") = "markdown", py::arg("decimals") = 3);
    m.def(
        "format_report_rows",
        [](const std::vector<ResultRow>& rows, const std::string& format, int decimals) {
            return format_report(rows, make_options(format, decimals));
        },
        py::arg("rows"), py::arg("format") = "markdown", py::arg("decimals") = 3);
    m.def(
        "write_results_csv_file",
        [](const ExperimentResult& result, const std::string& path, int decimals) {
            write_results_csv_file(result_rows(result), path, decimals);
        },
        py::arg("result"), py::arg("path"), py::arg("decimals") = 3);
    m.def("parse_results_csv_file", &parse_results_csv_file, py::arg("path"));
    m.def(
        "write_raw_trials_csv_file",
        [](const ExperimentResult& result, const std::string& path) {
            write_raw_trials_csv_file(result, path);
        },
        py::arg("result"), py::arg("path"));
    m.def("format_fixed", &format_fixed, py::arg("value"), py::arg("decimals"));
}
