#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "toppct/indicator.hpp"
#include "toppct/rng.hpp"

namespace toppct {

struct ExperimentConfig {
    std::vector<IndicatorLevel> levels;
    std::vector<std::size_t> sample_sizes;  // strictly ascending, each in [1, population]
    std::size_t trials = 0;                 // >= 1
    std::uint64_t master_seed = 0;
};

// The six summary statistics of one (level, sample size) cell.
struct KeyFigures {
    double minimum = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double q3 = 0.0;
    double maximum = 0.0;
};

// Min, max and mean are exact; quartiles and median interpolate linearly
// between order statistics at rank 1 + (n-1)*p. Throws on empty input.
KeyFigures key_figures(std::span<const double> values);

// Quantile of an ascending-sorted vector by the same rank convention.
double quantile_sorted(std::span<const double> sorted_values, double p);

struct ExperimentCell {
    KeyFigures figures;
    std::vector<double> trial_pp;  // one PP value per trial, percent
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<double> population_pp;               // per level, percent
    std::vector<std::vector<ExperimentCell>> cells;  // [level][size]

    const ExperimentCell& cell(std::size_t level_index, std::size_t size_index) const {
        return cells[level_index][size_index];
    }
};

// Uniformly random subset of exactly `size` distinct indices in
// [0, population), without replacement; a pure function of (population,
// size, stream state). Throws if size is 0 or exceeds the population.
std::vector<std::uint32_t> draw_sample(std::size_t population, std::size_t size, Rng& rng);

// Same draw, selecting from an ordered id list by position.
std::vector<std::string> draw_sample_ids(std::span<const std::string> population,
                                         std::size_t size, Rng& rng);

// T trials per (level, size) cell, each trial the PP of a fresh random
// sample, scored against the frozen table. Trial r of cell (li, si) uses the
// stream derive_stream(master_seed, li, si, r), so the result is identical
// for any thread count. Levels in the config must exist in the table; an
// empty level list means "all table levels".
ExperimentResult run_experiment(const ScoreTable& table, const ExperimentConfig& config,
                                int threads = 0);

}  // namespace toppct
