#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rfclust/de.hpp"
#include "rfclust/features.hpp"
#include "rfclust/forest.hpp"
#include "rfclust/similarity.hpp"

namespace rfclust {

// Feature rows joined with one algorithm's log-precision targets. X columns
// follow feature_portfolio; every (class_id, instance_id) pair is unique.
struct Dataset {
    std::string suite;
    std::vector<std::string> feature_portfolio;
    Eigen::MatrixXd X;
    Eigen::VectorXd y;  // log10 median precision
    std::vector<int> class_ids;
    std::vector<int> instance_ids;

    Eigen::Index size() const { return X.rows(); }
    // Same rows over a feature subset; throws on unknown names.
    Dataset restricted_to(const std::vector<std::string>& portfolio) const;
};

// Joins feature vectors with one algorithm's performance records; the two
// must cover exactly the same (class, instance) set.
Dataset make_dataset(const std::vector<FeatureVector>& features,
                     const std::vector<PerformanceRecord>& records,
                     const std::vector<std::string>& portfolio);

struct Fold {
    int held_out_class = 0;
    std::vector<int> train_rows;
    std::vector<int> test_rows;
};

// One fold per class, ordered by class_id; test = all instances of the
// held-out class. Throws std::invalid_argument with fewer than 2 classes.
std::vector<Fold> make_lopo_folds(const Dataset& dataset);

// Per-query diagnostic record; serialized as JSON lines downstream.
struct QueryRecord {
    int class_id = 0;
    int instance_id = 0;
    double threshold = 0.0;
    std::vector<Neighbor> neighbors;          // train_index refers to dataset rows
    std::vector<int> neighbor_classes;        // parallel to neighbors
    std::vector<int> neighbor_instances;
    double raw = 0.0;
    std::optional<double> aggregated;
    double final_value = 0.0;
    double truth = 0.0;
};

struct FoldReport {
    int held_out_class = 0;
    HyperParams tuned_params;
    std::vector<double> rf_abs_errors;  // one per held-out instance
    std::map<double, std::vector<double>> rfclust_abs_errors;  // threshold -> errors
    std::map<double, std::vector<int>> neighbor_counts;
    std::vector<double> rf_train_abs_errors;  // over the fold's training rows
    std::map<std::string, double> importances;  // permutation importance on train
    std::vector<QueryRecord> queries;
};

struct RunFoldOptions {
    std::uint64_t seed = 0;
    int importance_repeats = 5;
    bool compute_importance = true;
};

// Steps 2-6 for one fold: tune on train, fit, predict each test instance,
// then calibrate against train-row neighbors at every threshold.
FoldReport run_fold(const Dataset& dataset, const Fold& fold, const HyperGrid& grid,
                    const std::vector<SimilarityConfig>& sim_configs,
                    const RunFoldOptions& options);

// Arithmetic mean of absolute values; throws on an empty list.
double mae(const std::vector<double>& errors);

struct ComparisonSummary {
    std::string algorithm_id;
    double threshold = 0.0;
    int portfolio = 0;  // feature portfolio size
    int n_better = 0;
    int n_equal = 0;
    int n_worse = 0;
};

// Per class: fold-level MAE of RF+clust vs RF. Strictly lower is better;
// bitwise equality (the all-fallback case) is equal; anything else worse.
ComparisonSummary compare(const std::vector<FoldReport>& reports, double threshold);

struct DiagnosticsRow {
    int focus_instance = 0;
    int other_class = 0;
    int other_instance = 0;
    double similarity = 0.0;
    double performance_gap = 0.0;
};

// Pairwise similarity and ground-truth gap between every focus-class
// instance and every other instance, sorted by similarity descending.
// Normalization, when configured, is fitted on the non-focus rows.
std::vector<DiagnosticsRow> similarity_diagnostics(const Dataset& dataset, int focus_class,
                                                   const SimilarityConfig& config);

}  // namespace rfclust
