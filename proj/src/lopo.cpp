#include "rfclust/lopo.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rfclust/rng.hpp"

namespace rfclust {

Dataset Dataset::restricted_to(const std::vector<std::string>& portfolio) const {
    Dataset out;
    out.suite = suite;
    out.feature_portfolio = portfolio;
    out.y = y;
    out.class_ids = class_ids;
    out.instance_ids = instance_ids;
    out.X.resize(X.rows(), static_cast<Eigen::Index>(portfolio.size()));
    for (std::size_t c = 0; c < portfolio.size(); ++c) {
        const auto it = std::find(feature_portfolio.begin(), feature_portfolio.end(),
                                  portfolio[c]);
        if (it == feature_portfolio.end()) {
            throw std::invalid_argument("restricted_to: unknown feature '" + portfolio[c] + "'");
        }
        out.X.col(static_cast<Eigen::Index>(c)) =
            X.col(static_cast<Eigen::Index>(it - feature_portfolio.begin()));
    }
    return out;
}

Dataset make_dataset(const std::vector<FeatureVector>& features,
                     const std::vector<PerformanceRecord>& records,
                     const std::vector<std::string>& portfolio) {
    std::map<std::pair<int, int>, double> targets;
    for (const PerformanceRecord& record : records) {
        const auto key = std::make_pair(record.class_id, record.instance_id);
        if (!targets.emplace(key, record.log_median_precision).second) {
            throw std::invalid_argument("make_dataset: duplicate performance record for class " +
                                        std::to_string(record.class_id) + " instance " +
                                        std::to_string(record.instance_id));
        }
    }
    std::set<std::pair<int, int>> feature_keys;
    for (const FeatureVector& fv : features) {
        if (!feature_keys.insert({fv.class_id, fv.instance_id}).second) {
            throw std::invalid_argument("make_dataset: duplicate feature vector for class " +
                                        std::to_string(fv.class_id) + " instance " +
                                        std::to_string(fv.instance_id));
        }
    }

    // The two inputs must cover exactly the same instances.
    std::vector<std::pair<int, int>> missing;
    for (const auto& [key, value] : targets) {
        (void)value;
        if (!feature_keys.count(key)) missing.push_back(key);
    }
    for (const auto& key : feature_keys) {
        if (!targets.count(key)) missing.push_back(key);
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "make_dataset: feature/performance instance sets differ on";
        for (const auto& [cls, inst] : missing) msg << " (" << cls << "," << inst << ")";
        throw std::invalid_argument(msg.str());
    }

    // Canonical row order: (class_id, instance_id) ascending.
    std::vector<const FeatureVector*> ordered;
    ordered.reserve(features.size());
    for (const FeatureVector& fv : features) ordered.push_back(&fv);
    std::sort(ordered.begin(), ordered.end(), [](const FeatureVector* a, const FeatureVector* b) {
        return std::make_pair(a->class_id, a->instance_id) <
               std::make_pair(b->class_id, b->instance_id);
    });

    Dataset dataset;
    dataset.feature_portfolio = portfolio;
    dataset.X.resize(static_cast<Eigen::Index>(ordered.size()),
                     static_cast<Eigen::Index>(portfolio.size()));
    dataset.y.resize(static_cast<Eigen::Index>(ordered.size()));
    for (std::size_t r = 0; r < ordered.size(); ++r) {
        const FeatureVector& fv = *ordered[r];
        if (r == 0) dataset.suite = fv.suite;
        dataset.class_ids.push_back(fv.class_id);
        dataset.instance_ids.push_back(fv.instance_id);
        dataset.y[static_cast<Eigen::Index>(r)] = targets.at({fv.class_id, fv.instance_id});
        for (std::size_t c = 0; c < portfolio.size(); ++c) {
            dataset.X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                fv.value(portfolio[c]);
        }
    }
    return dataset;
}

std::vector<Fold> make_lopo_folds(const Dataset& dataset) {
    std::vector<int> classes(dataset.class_ids);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    if (classes.size() < 2) {
        throw std::invalid_argument("make_lopo_folds: need at least 2 problem classes");
    }
    std::vector<Fold> folds;
    folds.reserve(classes.size());
    for (const int cls : classes) {
        Fold fold;
        fold.held_out_class = cls;
        for (std::size_t r = 0; r < dataset.class_ids.size(); ++r) {
            (dataset.class_ids[r] == cls ? fold.test_rows : fold.train_rows)
                .push_back(static_cast<int>(r));
        }
        folds.push_back(std::move(fold));
    }
    return folds;
}

FoldReport run_fold(const Dataset& dataset, const Fold& fold, const HyperGrid& grid,
                    const std::vector<SimilarityConfig>& sim_configs,
                    const RunFoldOptions& options) {
    FoldReport report;
    report.held_out_class = fold.held_out_class;

    Eigen::MatrixXd X_train(fold.train_rows.size(), dataset.X.cols());
    Eigen::VectorXd y_train(fold.train_rows.size());
    std::vector<int> train_groups;
    train_groups.reserve(fold.train_rows.size());
    for (std::size_t i = 0; i < fold.train_rows.size(); ++i) {
        X_train.row(static_cast<Eigen::Index>(i)) = dataset.X.row(fold.train_rows[i]);
        y_train[static_cast<Eigen::Index>(i)] = dataset.y[fold.train_rows[i]];
        train_groups.push_back(dataset.class_ids[static_cast<std::size_t>(fold.train_rows[i])]);
    }

    const auto fold_key = static_cast<std::uint64_t>(fold.held_out_class);
    report.tuned_params = grid_search(X_train, y_train, train_groups, grid,
                                      stream_key(options.seed, RngStage::kGridSearch, fold_key));
    const Forest forest =
        fit_forest(X_train, y_train, report.tuned_params, dataset.feature_portfolio,
                   stream_key(options.seed, RngStage::kFold, fold_key));

    for (Eigen::Index i = 0; i < X_train.rows(); ++i) {
        report.rf_train_abs_errors.push_back(std::abs(predict(forest, X_train.row(i)) -
                                                      y_train[i]));
    }
    if (options.compute_importance) {
        auto rng = make_rng(stream_key(options.seed, RngStage::kImportance, fold_key));
        report.importances =
            permutation_importance(forest, X_train, y_train, options.importance_repeats, rng);
    }

    for (const int test_row : fold.test_rows) {
        const double truth = dataset.y[test_row];
        const double raw = predict(forest, dataset.X.row(test_row));
        report.rf_abs_errors.push_back(std::abs(raw - truth));

        for (const SimilarityConfig& config : sim_configs) {
            const NeighborSet neighbors = find_neighbors(
                dataset.X.row(test_row).transpose(), X_train, y_train, config);
            const CalibratedPrediction calibrated =
                calibrate(raw, neighbors, config.aggregation);
            report.rfclust_abs_errors[config.threshold].push_back(
                std::abs(calibrated.final_value - truth));
            report.neighbor_counts[config.threshold].push_back(calibrated.neighbor_count);

            QueryRecord query;
            query.class_id = dataset.class_ids[static_cast<std::size_t>(test_row)];
            query.instance_id = dataset.instance_ids[static_cast<std::size_t>(test_row)];
            query.threshold = config.threshold;
            query.neighbors = neighbors.entries;
            for (const Neighbor& n : neighbors.entries) {
                const int dataset_row = fold.train_rows[static_cast<std::size_t>(n.train_index)];
                query.neighbor_classes.push_back(
                    dataset.class_ids[static_cast<std::size_t>(dataset_row)]);
                query.neighbor_instances.push_back(
                    dataset.instance_ids[static_cast<std::size_t>(dataset_row)]);
            }
            query.raw = raw;
            query.aggregated = calibrated.aggregated_neighbor_value;
            query.final_value = calibrated.final_value;
            query.truth = truth;
            report.queries.push_back(std::move(query));
        }
    }
    return report;
}

double mae(const std::vector<double>& errors) {
    if (errors.empty()) throw std::invalid_argument("mae: empty error list");
    double total = 0.0;
    for (const double e : errors) total += std::abs(e);
    return total / static_cast<double>(errors.size());
}

ComparisonSummary compare(const std::vector<FoldReport>& reports, double threshold) {
    ComparisonSummary summary;
    summary.threshold = threshold;
    for (const FoldReport& report : reports) {
        const auto it = report.rfclust_abs_errors.find(threshold);
        if (it == report.rfclust_abs_errors.end()) {
            throw std::invalid_argument("compare: no results for threshold " +
                                        std::to_string(threshold));
        }
        const double rf = mae(report.rf_abs_errors);
        const double rfclust = mae(it->second);
        if (rfclust < rf) {
            ++summary.n_better;
        } else if (rfclust == rf) {  // bitwise: the all-fallback case
            ++summary.n_equal;
        } else {
            ++summary.n_worse;
        }
    }
    return summary;
}

std::vector<DiagnosticsRow> similarity_diagnostics(const Dataset& dataset, int focus_class,
                                                   const SimilarityConfig& config) {
    std::vector<int> focus_rows;
    std::vector<int> other_rows;
    for (std::size_t r = 0; r < dataset.class_ids.size(); ++r) {
        (dataset.class_ids[r] == focus_class ? focus_rows : other_rows)
            .push_back(static_cast<int>(r));
    }
    if (focus_rows.empty()) {
        throw std::invalid_argument("similarity_diagnostics: class " +
                                    std::to_string(focus_class) + " not in dataset");
    }

    Eigen::MatrixXd others(other_rows.size(), dataset.X.cols());
    for (std::size_t i = 0; i < other_rows.size(); ++i) {
        others.row(static_cast<Eigen::Index>(i)) = dataset.X.row(other_rows[i]);
    }

    std::vector<DiagnosticsRow> rows;
    rows.reserve(focus_rows.size() * other_rows.size());
    for (const int focus_row : focus_rows) {
        Eigen::MatrixXd train = others;
        Eigen::VectorXd query = dataset.X.row(focus_row).transpose();
        if (config.normalize == Normalization::kMinMaxOnTrain) {
            std::tie(train, query) = normalize_features(others, query);
        }
        if (query.norm() == 0.0) continue;  // cosine undefined at the origin
        for (std::size_t i = 0; i < other_rows.size(); ++i) {
            if (train.row(static_cast<Eigen::Index>(i)).norm() == 0.0) continue;
            DiagnosticsRow row;
            row.focus_instance = dataset.instance_ids[static_cast<std::size_t>(focus_row)];
            row.other_class = dataset.class_ids[static_cast<std::size_t>(other_rows[i])];
            row.other_instance = dataset.instance_ids[static_cast<std::size_t>(other_rows[i])];
            row.similarity =
                cosine_similarity(query, train.row(static_cast<Eigen::Index>(i)).transpose());
            row.performance_gap =
                std::abs(dataset.y[focus_row] - dataset.y[other_rows[i]]);
            rows.push_back(row);
        }
    }
    std::sort(rows.begin(), rows.end(), [](const DiagnosticsRow& a, const DiagnosticsRow& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return std::tie(a.focus_instance, a.other_class, a.other_instance) <
               std::tie(b.focus_instance, b.other_class, b.other_instance);
    });
    return rows;
}

}  // namespace rfclust
