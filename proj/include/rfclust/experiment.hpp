#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rfclust/lopo.hpp"

namespace rfclust {

// Configuration for the staged pipeline. Defaults follow the experimental
// setup the method was validated with: budget 500*D over 30 runs, 800*D
// samples over 30 repetitions, thresholds {0.5, 0.7, 0.9}, top-10/top-30
// feature portfolios, weighted-mean aggregation.
struct ExperimentConfig {
    std::string suite = "classic12-multi5";
    int dimension = 10;
    std::vector<std::string> algorithms;  // empty = every algorithm in the performance file
    int budget_factor = 500;
    int runs = 30;
    int population_size = 0;  // 0 = problem dimension
    int sample_factor = 800;
    int repetitions = 30;
    Sampler sampler = Sampler::kImprovedLatinHypercube;
    std::vector<double> thresholds{0.5, 0.7, 0.9};
    std::vector<int> portfolios{10, 30};
    Aggregation aggregation = Aggregation::kWeightedMean;
    Normalization normalize = Normalization::kMinMaxOnTrain;
    std::uint64_t master_seed = 1;
    int jobs = 1;
    int importance_repeats = 5;
    HyperGrid grid;  // defaults to the full tuning search space

    // Throws std::invalid_argument on out-of-range values, non-increasing
    // thresholds, or non-positive portfolios.
    void validate() const;
};

struct PortfolioRun {
    int portfolio_label = 0;  // number of selected features
    std::vector<std::string> features;
    std::vector<FoldReport> reports;  // ordered by held-out class
    // Per focus class: the similarity-vs-performance-gap scatter data.
    std::vector<std::pair<int, std::vector<DiagnosticsRow>>> diagnostics;
};

struct AlgorithmResult {
    std::string algorithm_id;
    // Permutation importance summed over the full-portfolio LOPO folds.
    std::vector<std::pair<std::string, double>> summed_importance;
    PortfolioRun full;                    // all features; feeds selection and the MAE summary
    std::vector<PortfolioRun> portfolios; // one per configured portfolio size
    std::vector<ComparisonSummary> summaries;  // portfolio x threshold
};

struct ExperimentBundle {
    ExperimentConfig config;
    std::string suite;
    std::vector<AlgorithmResult> algorithms;
};

// Steps 1-6 over every algorithm and portfolio: full-portfolio LOPO with
// importance, top-k selection, per-portfolio LOPO, summaries, diagnostics.
// Deterministic in config.master_seed.
ExperimentBundle run_experiment(const std::vector<FeatureVector>& features,
                                const std::vector<PerformanceRecord>& records,
                                const ExperimentConfig& config);

// File-based entry point; the two inputs must cover identical instance sets.
ExperimentBundle run_experiment(const std::filesystem::path& performance_csv,
                                const std::filesystem::path& features_csv,
                                const ExperimentConfig& config);

enum class ReportFormat { kCsv, kMarkdown };

ReportFormat parse_report_format(const std::string& name);

// Heatmap CSVs, comparison table and the train/test MAE summary. The csv
// variant re-emits the same files `experiment` writes, so re-rendering is
// idempotent; markdown embeds identical numbers in pipe tables.
void render_report(const ExperimentBundle& bundle, const std::filesystem::path& out_dir,
                   ReportFormat format);

// Everything render_report needs plus provenance (experiment.json) and the
// per-query JSON-lines diagnostics.
void write_experiment_outputs(const ExperimentBundle& bundle,
                              const std::filesystem::path& out_dir);

// Reloads bundle.json as written by write_experiment_outputs.
ExperimentBundle load_bundle(const std::filesystem::path& path);

}  // namespace rfclust
