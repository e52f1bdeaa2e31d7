#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "toppct/corpus.hpp"
#include "toppct/error.hpp"
#include "toppct/indicator.hpp"
#include "toppct/report.hpp"
#include "toppct/sampling.hpp"

namespace {

using namespace toppct;

struct GenerateOptions {
    std::size_t papers = 0;
    std::size_t categories = 0;
    int year_min = 1980;
    int year_max = 2010;
    std::vector<double> multi_probs{1.0};
    double mu = 1.0;
    double sigma = 1.2;
    double mu_spread = 0.0;
    std::uint64_t seed = 0;
    std::string output;
};

struct ComputeOptions {
    std::string input;
    std::vector<double> levels;
    std::string output;
    int threads = 0;
};

struct SampleOptions {
    std::string scores;
    std::vector<std::size_t> sizes{100, 500, 1000, 10000};
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::string output;
    std::string raw_output;
    int threads = 0;
};

struct ReportCliOptions {
    std::string input;
    std::string format = "markdown";
    int decimals = 3;
    std::string output;
};

SyntheticSpec to_spec(const GenerateOptions& options) {
    SyntheticSpec spec;
    spec.n_papers = options.papers;
    spec.n_categories = options.categories;
    spec.years = {options.year_min, options.year_max};
    if (options.multi_probs.empty() || options.multi_probs.size() > 3)
        throw Error("--multi-probs expects 1 to 3 values");
    spec.multi_category_probs = {0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < options.multi_probs.size(); ++k)
        spec.multi_category_probs[k] = options.multi_probs[k];
    spec.citation_log_mean = options.mu;
    spec.citation_log_sigma = options.sigma;
    spec.category_log_mean_spread = options.mu_spread;
    spec.seed = options.seed;
    return spec;
}

std::vector<IndicatorLevel> to_levels(const std::vector<double>& percents) {
    if (percents.empty()) throw Error("--levels expects at least one percent value");
    std::vector<IndicatorLevel> levels;
    levels.reserve(percents.size());
    for (const double x : percents) levels.push_back(IndicatorLevel::from_percent(x));
    return levels;
}

void run_generate(const GenerateOptions& options) {
    const auto corpus = generate_corpus(to_spec(options));
    write_corpus_file(corpus, options.output);
    std::cout << "generate: wrote " << options.output << " (" << corpus.population_size()
              << " papers)\n";
}

void run_compute(const ComputeOptions& options) {
    const auto corpus = parse_corpus_file(options.input);
    const auto table = compute_score_table(corpus, to_levels(options.levels), options.threads);
    write_scores_csv_file(table, options.output);
    for (std::size_t l = 0; l < table.levels.size(); ++l)
        std::cout << "PP(top " << format_level_label(table.levels[l].x)
                  << "%) = " << format_fixed(table.population_pp[l], 3) << '\n';
    std::cout << "compute: wrote " << options.output << " (" << table.level_count()
              << " levels, " << table.population_size() << " papers)\n";
}

void run_sample(const SampleOptions& options) {
    const auto table = read_scores_csv_file(options.scores);
    ExperimentConfig config;
    config.sample_sizes = options.sizes;
    config.trials = options.trials;
    config.master_seed = options.seed;
    const auto result = run_experiment(table, config, options.threads);
    const auto rows = result_rows(result);
    write_results_csv_file(rows, options.output);
    if (!options.raw_output.empty()) {
        write_raw_trials_csv_file(result, options.raw_output);
        std::cout << "sample: wrote " << options.raw_output << " (raw trials)\n";
    }
    std::cout << "sample: wrote " << options.output << " (" << rows.size() << " cells, "
              << options.trials << " trials each)\n";
}

void run_report(const ReportCliOptions& options) {
    const auto rows = parse_results_csv_file(options.input);
    ReportOptions report_options;
    report_options.format =
        options.format == "csv" ? ReportFormat::csv : ReportFormat::markdown;
    report_options.decimals = options.decimals;
    const auto text = format_report(rows, report_options);
    if (options.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(options.output, std::ios::binary);
    if (!out) throw Error("cannot open " + options.output + " for writing");
    out << text;
    if (!out) throw Error("write failed: " + options.output);
    std::cout << "report: wrote " << options.output << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tie-corrected top-x% citation indicators over field/year reference sets,\n"
                 "with repeated random-sampling experiments on the frozen scores."};
    app.require_subcommand(1);

    GenerateOptions generate_options;
    ComputeOptions compute_options;
    SampleOptions sample_options;
    ReportCliOptions report_options;

    const auto add_generate_flags = [&](CLI::App* cmd) {
        cmd->add_option("--papers", generate_options.papers, "Number of papers")->required();
        cmd->add_option("--categories", generate_options.categories, "Number of categories")
            ->required();
        cmd->add_option("--year-min", generate_options.year_min, "First publication year");
        cmd->add_option("--year-max", generate_options.year_max, "Last publication year");
        cmd->add_option("--multi-probs", generate_options.multi_probs,
                        "P(paper has 1,2,3 categories), e.g. 0.6,0.3,0.1")
            ->delimiter(',');
        cmd->add_option("--mu", generate_options.mu, "Mean of log citation counts");
        cmd->add_option("--sigma", generate_options.sigma, "Sigma of log citation counts");
        cmd->add_option("--mu-spread", generate_options.mu_spread,
                        "Per-category spread of the log-count mean");
    };
    const auto add_threads_flag = [](CLI::App* cmd, int& slot) {
        cmd->add_option("--threads", slot, "Worker threads (0 = all cores)")
            ->envname("TOPPCT_THREADS");
    };

    CLI::App* generate = app.add_subcommand("generate", "Write a synthetic corpus CSV");
    add_generate_flags(generate);
    generate->add_option("--seed", generate_options.seed, "Generator seed");
    generate->add_option("-o,--output", generate_options.output, "Corpus CSV path")->required();

    CLI::App* compute = app.add_subcommand(
        "compute", "Score a corpus against its reference sets and write the scores CSV");
    compute->add_option("--input", compute_options.input, "Corpus CSV path")->required();
    compute->add_option("--levels", compute_options.levels, "Percent levels, e.g. 50,10,1")
        ->delimiter(',')
        ->required();
    compute->add_option("-o,--output", compute_options.output, "Scores CSV path")->required();
    add_threads_flag(compute, compute_options.threads);

    CLI::App* sample = app.add_subcommand(
        "sample", "Run the repeated random-sampling experiment over a scores CSV");
    sample->add_option("--scores", sample_options.scores, "Scores CSV path")->required();
    sample->add_option("--sizes", sample_options.sizes,
                       "Sample sizes (default: 100,500,1000,10000)")
        ->delimiter(',');
    sample->add_option("--trials", sample_options.trials, "Trials per cell")->required();
    sample->add_option("--seed", sample_options.seed, "Master seed");
    sample->add_option("-o,--output", sample_options.output, "Results CSV path")->required();
    sample->add_option("--raw-trials", sample_options.raw_output,
                       "Optional raw per-trial CSV path");
    add_threads_flag(sample, sample_options.threads);

    CLI::App* report = app.add_subcommand("report", "Render a results CSV");
    report->add_option("--input", report_options.input, "Results CSV path")->required();
    report->add_option("--format", report_options.format, "markdown or csv")
        ->check(CLI::IsMember({"markdown", "csv"}));
    report->add_option("--decimals", report_options.decimals, "Figure decimals (0-12)");
    report->add_option("-o,--output", report_options.output, "Output path (default stdout)");

    CLI::App* run_all =
        app.add_subcommand("run-all", "generate + compute + sample + report into a directory");
    add_generate_flags(run_all);
    std::vector<double> all_levels;
    std::vector<std::size_t> all_sizes{100, 500, 1000, 10000};
    std::size_t all_trials = 0;
    std::uint64_t all_seed = 0;
    std::string all_outdir;
    int all_threads = 0;
    run_all->add_option("--levels", all_levels, "Percent levels, e.g. 50,10,1")
        ->delimiter(',')
        ->required();
    run_all->add_option("--sizes", all_sizes, "Sample sizes (default: 100,500,1000,10000)")
        ->delimiter(',');
    run_all->add_option("--trials", all_trials, "Trials per cell")->required();
    run_all->add_option("--seed", all_seed, "Seed for generation and sampling");
    run_all->add_option("--format", report_options.format, "Report format: markdown or csv")
        ->check(CLI::IsMember({"markdown", "csv"}));
    run_all->add_option("--decimals", report_options.decimals, "Report decimals (0-12)");
    run_all->add_option("-o,--outdir", all_outdir, "Output directory")->required();
    add_threads_flag(run_all, all_threads);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (generate->parsed()) {
            run_generate(generate_options);
        } else if (compute->parsed()) {
            run_compute(compute_options);
        } else if (sample->parsed()) {
            run_sample(sample_options);
        } else if (report->parsed()) {
            run_report(report_options);
        } else if (run_all->parsed()) {
            namespace fs = std::filesystem;
            fs::create_directories(all_outdir);
            const auto path = [&](const char* name) {
                return (fs::path(all_outdir) / name).string();
            };
            generate_options.seed = all_seed;
            generate_options.output = path("corpus.csv");
            run_generate(generate_options);

            compute_options.input = generate_options.output;
            compute_options.levels = all_levels;
            compute_options.output = path("scores.csv");
            compute_options.threads = all_threads;
            run_compute(compute_options);

            sample_options.scores = compute_options.output;
            sample_options.sizes = all_sizes;
            sample_options.trials = all_trials;
            sample_options.seed = all_seed;
            sample_options.output = path("results.csv");
            sample_options.threads = all_threads;
            run_sample(sample_options);

            report_options.input = sample_options.output;
            report_options.output =
                path(report_options.format == "csv" ? "report.csv" : "report.md");
            run_report(report_options);
        }
    } catch (const std::exception& e) {
        std::cerr << "toppct: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
