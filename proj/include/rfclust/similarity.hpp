#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace rfclust {

enum class Aggregation { kWeightedMean, kMean, kMedian };
enum class Normalization { kMinMaxOnTrain, kNone };

Aggregation parse_aggregation(const std::string& name);
std::string aggregation_name(Aggregation value);
Normalization parse_normalization(const std::string& name);
std::string normalization_name(Normalization value);

struct SimilarityConfig {
    double threshold = 0.9;
    Aggregation aggregation = Aggregation::kWeightedMean;
    Normalization normalize = Normalization::kMinMaxOnTrain;
};

struct Neighbor {
    int train_index = -1;
    double similarity = 0.0;
    double performance = 0.0;
};

// Entries sorted by similarity descending, ties by train_index ascending;
// every similarity is >= the configured threshold. May be empty.
struct NeighborSet {
    std::vector<Neighbor> entries;

    int k() const { return static_cast<int>(entries.size()); }
};

struct CalibratedPrediction {
    double raw_prediction = 0.0;
    std::optional<double> aggregated_neighbor_value;
    double final_value = 0.0;
    int neighbor_count = 0;
};

// a.b / (|a||b|), clamped to [-1, 1] against rounding. Throws
// std::domain_error on a zero-norm vector; the min-max sentinel policy
// upstream (constant columns map to 0.5) is what rules that out in the
// pipeline.
double cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b);

// Per-feature min-max scaling fitted on training rows only. Constant
// training features map to 0.5 everywhere; query values are clipped to
// [0, 1].
struct MinMaxScaler {
    Eigen::VectorXd minimum;
    Eigen::VectorXd range;  // zero marks a constant feature

    static MinMaxScaler fit(const Eigen::Ref<const Eigen::MatrixXd>& train);
    Eigen::VectorXd transform(const Eigen::Ref<const Eigen::VectorXd>& row, bool clip) const;
    Eigen::MatrixXd transform_rows(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                                   bool clip) const;
};

// Spec-shaped convenience around MinMaxScaler.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> normalize_features(
    const Eigen::Ref<const Eigen::MatrixXd>& train_vectors,
    const Eigen::Ref<const Eigen::VectorXd>& query_vector);

// All training rows with similarity >= config.threshold, after optional
// normalization fitted on the training rows.
NeighborSet find_neighbors(const Eigen::Ref<const Eigen::VectorXd>& query,
                           const Eigen::Ref<const Eigen::MatrixXd>& train_features,
                           const Eigen::Ref<const Eigen::VectorXd>& train_performance,
                           const SimilarityConfig& config);

// weighted_mean uses the similarities themselves as weights, normalized by
// their sum (falling back to the plain mean if the weights sum to zero,
// which cannot happen with non-negative similarities). Throws
// std::logic_error on an empty set: the caller owns the fallback path.
double aggregate(const NeighborSet& neighbors, Aggregation method);

// The calibration rule: with neighbors, final = (raw + F(p_1..p_k)) / 2;
// without, the model prediction stands alone.
CalibratedPrediction calibrate(double raw_prediction, const NeighborSet& neighbors,
                               Aggregation method);

}  // namespace rfclust
