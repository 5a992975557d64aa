#include "rfclust/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rfclust/de.hpp"

namespace rfclust {

Aggregation parse_aggregation(const std::string& name) {
    if (name == "weighted_mean") return Aggregation::kWeightedMean;
    if (name == "mean") return Aggregation::kMean;
    if (name == "median") return Aggregation::kMedian;
    throw std::invalid_argument("unknown aggregation: '" + name + "'");
}

std::string aggregation_name(Aggregation value) {
    switch (value) {
        case Aggregation::kWeightedMean: return "weighted_mean";
        case Aggregation::kMean: return "mean";
        case Aggregation::kMedian: return "median";
    }
    return "?";
}

Normalization parse_normalization(const std::string& name) {
    if (name == "min_max_on_train") return Normalization::kMinMaxOnTrain;
    if (name == "none") return Normalization::kNone;
    throw std::invalid_argument("unknown normalization: '" + name + "'");
}

std::string normalization_name(Normalization value) {
    return value == Normalization::kMinMaxOnTrain ? "min_max_on_train" : "none";
}

double cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("cosine_similarity: dimension mismatch");
    }
    const double norm_a = a.norm();
    const double norm_b = b.norm();
    if (norm_a == 0.0 || norm_b == 0.0) {
        throw std::domain_error("cosine_similarity: zero-norm vector");
    }
    const double value = a.dot(b) / (norm_a * norm_b);
    return std::min(1.0, std::max(-1.0, value));
}

MinMaxScaler MinMaxScaler::fit(const Eigen::Ref<const Eigen::MatrixXd>& train) {
    if (train.rows() == 0) throw std::invalid_argument("MinMaxScaler: empty training set");
    MinMaxScaler scaler;
    scaler.minimum = train.colwise().minCoeff();
    scaler.range = train.colwise().maxCoeff() - scaler.minimum.transpose();
    return scaler;
}

Eigen::VectorXd MinMaxScaler::transform(const Eigen::Ref<const Eigen::VectorXd>& row,
                                        bool clip) const {
    Eigen::VectorXd out(row.size());
    for (Eigen::Index i = 0; i < row.size(); ++i) {
        if (range[i] > 0.0) {
            double v = (row[i] - minimum[i]) / range[i];
            if (clip) v = std::min(1.0, std::max(0.0, v));
            out[i] = v;
        } else {
            out[i] = 0.5;  // constant training feature
        }
    }
    return out;
}

Eigen::MatrixXd MinMaxScaler::transform_rows(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                                             bool clip) const {
    Eigen::MatrixXd out(rows.rows(), rows.cols());
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        out.row(r) = transform(rows.row(r).transpose(), clip);
    }
    return out;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> normalize_features(
    const Eigen::Ref<const Eigen::MatrixXd>& train_vectors,
    const Eigen::Ref<const Eigen::VectorXd>& query_vector) {
    const MinMaxScaler scaler = MinMaxScaler::fit(train_vectors);
    return {scaler.transform_rows(train_vectors, false),
            scaler.transform(query_vector, true)};
}

NeighborSet find_neighbors(const Eigen::Ref<const Eigen::VectorXd>& query,
                           const Eigen::Ref<const Eigen::MatrixXd>& train_features,
                           const Eigen::Ref<const Eigen::VectorXd>& train_performance,
                           const SimilarityConfig& config) {
    if (train_features.rows() == 0) {
        throw std::invalid_argument("find_neighbors: empty training set");
    }
    if (train_features.rows() != train_performance.size()) {
        throw std::invalid_argument("find_neighbors: features/performance size mismatch");
    }

    Eigen::MatrixXd train = train_features;
    Eigen::VectorXd q = query;
    if (config.normalize == Normalization::kMinMaxOnTrain) {
        std::tie(train, q) = normalize_features(train_features, query);
    }

    // Cosine is undefined at the origin. A query clipped to all zeros is
    // similar to nothing (the caller's fallback path applies); an all-zero
    // training row is never a neighbor.
    NeighborSet set;
    if (q.norm() == 0.0) return set;
    for (Eigen::Index i = 0; i < train.rows(); ++i) {
        if (train.row(i).norm() == 0.0) continue;
        const double s = cosine_similarity(q, train.row(i).transpose());
        if (s >= config.threshold) {
            set.entries.push_back({static_cast<int>(i), s, train_performance[i]});
        }
    }
    std::sort(set.entries.begin(), set.entries.end(), [](const Neighbor& a, const Neighbor& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.train_index < b.train_index;
    });
    return set;
}

double aggregate(const NeighborSet& neighbors, Aggregation method) {
    if (neighbors.entries.empty()) {
        throw std::logic_error("aggregate: empty neighbor set; use the fallback path");
    }
    switch (method) {
        case Aggregation::kWeightedMean: {
            double weight_sum = 0.0;
            double value = 0.0;
            for (const Neighbor& n : neighbors.entries) {
                weight_sum += n.similarity;
                value += n.similarity * n.performance;
            }
            if (weight_sum == 0.0) break;  // degenerate weights: plain mean below
            return value / weight_sum;
        }
        case Aggregation::kMean: break;
        case Aggregation::kMedian: {
            std::vector<double> p;
            p.reserve(neighbors.entries.size());
            for (const Neighbor& n : neighbors.entries) p.push_back(n.performance);
            return median(std::move(p));
        }
    }
    double sum = 0.0;
    for (const Neighbor& n : neighbors.entries) sum += n.performance;
    return sum / static_cast<double>(neighbors.entries.size());
}

CalibratedPrediction calibrate(double raw_prediction, const NeighborSet& neighbors,
                               Aggregation method) {
    CalibratedPrediction result;
    result.raw_prediction = raw_prediction;
    result.neighbor_count = neighbors.k();
    if (neighbors.entries.empty()) {
        result.final_value = raw_prediction;
        return result;
    }
    result.aggregated_neighbor_value = aggregate(neighbors, method);
    result.final_value = (raw_prediction + *result.aggregated_neighbor_value) / 2.0;
    return result;
}

}  // namespace rfclust
