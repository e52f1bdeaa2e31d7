#include "toppct/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "toppct/error.hpp"
#include "toppct/parallel.hpp"

namespace toppct {

namespace {

// Floyd's subset sampling with a reusable membership bitmap. Consumes
// exactly `size` uniform draws from the stream, so the produced subset is a
// pure function of (population, size, stream state) no matter how the
// workspace is reused.
class SampleDrawer {
public:
    explicit SampleDrawer(std::size_t population) : used_(population, 0) {}

    void draw(std::vector<std::uint32_t>& out, std::size_t size, Rng& rng) {
        const std::size_t n = used_.size();
        out.clear();
        out.reserve(size);
        for (std::size_t j = n - size; j < n; ++j) {
            const std::size_t t = static_cast<std::size_t>(rng.uniform_below(j + 1));
            const std::size_t pick = used_[t] ? j : t;
            used_[pick] = 1;
            out.push_back(static_cast<std::uint32_t>(pick));
        }
        for (const std::uint32_t i : out) used_[i] = 0;
    }

private:
    std::vector<std::uint8_t> used_;
};

void check_draw_args(std::size_t population, std::size_t size) {
    if (size < 1 || size > population)
        throw Error("sample size " + std::to_string(size) + " out of range [1, " +
                    std::to_string(population) + "]");
}

}  // namespace

std::vector<std::uint32_t> draw_sample(std::size_t population, std::size_t size, Rng& rng) {
    check_draw_args(population, size);
    std::vector<std::uint32_t> out;
    SampleDrawer drawer(population);
    drawer.draw(out, size, rng);
    return out;
}

std::vector<std::string> draw_sample_ids(std::span<const std::string> population,
                                         std::size_t size, Rng& rng) {
    const auto indices = draw_sample(population.size(), size, rng);
    std::vector<std::string> ids;
    ids.reserve(indices.size());
    for (const std::uint32_t i : indices) ids.push_back(population[i]);
    return ids;
}

double quantile_sorted(std::span<const double> sorted_values, double p) {
    if (sorted_values.empty()) throw Error("quantile of empty vector");
    const std::size_t n = sorted_values.size();
    const double rank = 1.0 + static_cast<double>(n - 1) * p;  // 1-based
    const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
    if (lo >= n) return sorted_values[n - 1];
    const double frac = rank - static_cast<double>(lo);
    return sorted_values[lo - 1] + frac * (sorted_values[lo] - sorted_values[lo - 1]);
}

KeyFigures key_figures(std::span<const double> values) {
    if (values.empty()) throw Error("key_figures of empty vector");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    KeyFigures figures;
    figures.minimum = sorted.front();
    figures.q1 = quantile_sorted(sorted, 0.25);
    figures.median = quantile_sorted(sorted, 0.5);
    figures.mean = stable_mean(values);
    figures.q3 = quantile_sorted(sorted, 0.75);
    figures.maximum = sorted.back();
    return figures;
}

ExperimentResult run_experiment(const ScoreTable& table, const ExperimentConfig& config,
                                int threads) {
    const std::size_t population = table.population_size();
    if (config.trials < 1) throw Error("experiment needs at least 1 trial");
    if (config.sample_sizes.empty()) throw Error("experiment needs at least one sample size");
    for (std::size_t i = 0; i < config.sample_sizes.size(); ++i) {
        const std::size_t size = config.sample_sizes[i];
        if (size < 1 || size > population)
            throw Error("sample size " + std::to_string(size) + " out of range [1, " +
                        std::to_string(population) + "]");
        if (i > 0 && size <= config.sample_sizes[i - 1])
            throw Error("sample sizes must be strictly ascending");
    }

    ExperimentResult result;
    result.config = config;
    if (result.config.levels.empty()) result.config.levels = table.levels;

    // Row of the table behind each configured level.
    std::vector<std::size_t> level_rows;
    level_rows.reserve(result.config.levels.size());
    for (const auto& level : result.config.levels)
        level_rows.push_back(table.level_index(level.x));

    const std::size_t n_levels = result.config.levels.size();
    const std::size_t n_sizes = config.sample_sizes.size();
    const std::size_t trials = config.trials;

    result.population_pp.resize(n_levels);
    for (std::size_t l = 0; l < n_levels; ++l)
        result.population_pp[l] = table.population_pp[level_rows[l]];

    result.cells.resize(n_levels);
    for (auto& row : result.cells) {
        row.resize(n_sizes);
        for (auto& cell : row) cell.trial_pp.assign(trials, 0.0);
    }

    // One task per trial; the trial's stream is derived from its cell and
    // index, so partitioning across threads cannot change any value.
    parallel_for(n_levels * n_sizes * trials, threads, [&](std::size_t begin, std::size_t end) {
        SampleDrawer drawer(population);
        std::vector<std::uint32_t> sample;
        for (std::size_t task = begin; task < end; ++task) {
            const std::size_t l = task / (n_sizes * trials);
            const std::size_t s = (task / trials) % n_sizes;
            const std::size_t r = task % trials;
            Rng rng = derive_stream(config.master_seed, l, s, r);
            drawer.draw(sample, config.sample_sizes[s], rng);
            result.cells[l][s].trial_pp[r] = unit_pp_indices(table, sample, level_rows[l]);
        }
    });

    for (auto& row : result.cells)
        for (auto& cell : row) cell.figures = key_figures(cell.trial_pp);
    return result;
}

}  // namespace toppct
