#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "rfclust/features.hpp"

namespace rfclust {

enum class MaxFeatures { kAll, kSqrt, kLog2 };

MaxFeatures parse_max_features(const std::string& name);
std::string max_features_name(MaxFeatures value);

struct HyperParams {
    int n_estimators = 10;
    MaxFeatures max_features = MaxFeatures::kAll;
    int max_depth = 3;
    int min_samples_split = 2;
};

// The tuning grid; defaults are the full search space.
struct HyperGrid {
    std::vector<int> n_estimators{10, 20, 50, 70};
    std::vector<MaxFeatures> max_features{MaxFeatures::kAll, MaxFeatures::kSqrt,
                                          MaxFeatures::kLog2};
    std::vector<int> max_depth{3, 5, 7, 10};
    std::vector<int> min_samples_split{2, 5, 7, 10};
};

// Axis-aligned binary regression tree stored as an index-linked node array.
// Leaves predict the training mean of their node.
struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double leaf_value = 0.0;
};

struct RegressionTree {
    std::vector<TreeNode> nodes;

    double predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
    int depth() const;  // edges on the longest root-to-leaf path
};

struct Forest {
    std::vector<RegressionTree> trees;
    HyperParams params;
    std::vector<std::string> feature_names;
    std::vector<std::uint64_t> bootstrap_seeds;
};

struct FitOptions {
    bool bootstrap = true;  // test hook: disable to fit every tree on the full sample
};

// Greedy variance-reduction CART. At each node a fresh subset of
// max_features candidate features is drawn; split points are midpoints
// between consecutive distinct sorted values; ties keep the first best in
// feature-then-threshold order.
RegressionTree fit_tree(const Eigen::Ref<const Eigen::MatrixXd>& X,
                        const Eigen::Ref<const Eigen::VectorXd>& y, const HyperParams& params,
                        std::mt19937_64& rng);

// n_estimators trees on bootstrap resamples (with replacement, size n);
// deterministic in seed, independent of fitting order.
Forest fit_forest(const Eigen::Ref<const Eigen::MatrixXd>& X,
                  const Eigen::Ref<const Eigen::VectorXd>& y, const HyperParams& params,
                  const std::vector<std::string>& feature_names, std::uint64_t seed,
                  const FitOptions& options = {});

double predict(const Forest& forest, const Eigen::Ref<const Eigen::RowVectorXd>& x);

// Name-checked prediction; throws std::out_of_range naming any feature the
// vector is missing.
double predict(const Forest& forest, const FeatureVector& features);

// Exhaustive grid search scored by mean MAE over an inner group-aware
// 3-fold split (folds never split a class); with fewer than 3 groups the
// inner validation degrades to leave-one-group-out. Ties keep the first
// combination in grid order, so smaller models win.
HyperParams grid_search(const Eigen::Ref<const Eigen::MatrixXd>& X,
                        const Eigen::Ref<const Eigen::VectorXd>& y,
                        const std::vector<int>& groups, const HyperGrid& grid,
                        std::uint64_t seed);

// Mean increase in MAE over `repeats` shuffles of one feature column.
std::map<std::string, double> permutation_importance(const Forest& forest,
                                                     const Eigen::Ref<const Eigen::MatrixXd>& X_val,
                                                     const Eigen::Ref<const Eigen::VectorXd>& y_val,
                                                     int repeats, std::mt19937_64& rng);

// Sums importances across folds and returns the top-k names, descending by
// summed importance, ties alphabetical. Asking for more features than exist
// returns all of them with a warning on stderr.
std::vector<std::string> select_top_features(
    const std::vector<std::map<std::string, double>>& per_fold_importances, int k);

// Inspection dump: nested {feature, threshold, left, right} / {leaf_value}.
std::string forest_to_json(const Forest& forest);

}  // namespace rfclust
