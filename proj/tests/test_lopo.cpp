#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "rfclust/lopo.hpp"
#include "rfclust/rng.hpp"

using namespace rfclust;

namespace {

FeatureVector make_fv(int cls, int inst, const std::vector<std::string>& names,
                      const std::vector<double>& values) {
    FeatureVector fv;
    fv.suite = "synthetic";
    fv.class_id = cls;
    fv.instance_id = inst;
    fv.names = names;
    fv.values = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                  static_cast<Eigen::Index>(values.size()));
    fv.sentinel_counts = Eigen::VectorXi::Zero(static_cast<Eigen::Index>(values.size()));
    return fv;
}

PerformanceRecord make_record(int cls, int inst, double log_precision) {
    PerformanceRecord record;
    record.algorithm_id = "alg";
    record.suite = "synthetic";
    record.class_id = cls;
    record.instance_id = inst;
    record.median_precision = std::pow(10.0, log_precision);
    record.log_median_precision = log_precision;
    return record;
}

// A dataset of `classes` x `instances` rows with uniform random features.
Dataset random_dataset(int classes, int instances, int dims, std::uint64_t seed) {
    auto rng = make_rng(seed);
    Dataset dataset;
    dataset.suite = "synthetic";
    for (int d = 0; d < dims; ++d) dataset.feature_portfolio.push_back("f" + std::to_string(d));
    const int n = classes * instances;
    dataset.X.resize(n, dims);
    dataset.y.resize(n);
    int row = 0;
    for (int c = 1; c <= classes; ++c) {
        for (int i = 0; i < instances; ++i) {
            for (int d = 0; d < dims; ++d) dataset.X(row, d) = uniform_real(rng, 0.0, 1.0);
            dataset.y[row] = uniform_real(rng, -6.0, 2.0);
            dataset.class_ids.push_back(c);
            dataset.instance_ids.push_back(i);
            ++row;
        }
    }
    return dataset;
}

HyperGrid tiny_grid() {
    HyperGrid grid;
    grid.n_estimators = {10};
    grid.max_features = {MaxFeatures::kAll};
    grid.max_depth = {3};
    grid.min_samples_split = {2};
    return grid;
}

// Four two-feature blocks at nearby angles: instances of one class are
// nearly parallel (cosine > 0.98), instances of different classes are
// orthogonal. Class 1 duplicates class 2 exactly, feature- and
// performance-wise; class 2's targets are all equal.
Dataset duplicated_class_dataset() {
    Dataset dataset;
    dataset.suite = "synthetic";
    for (int d = 0; d < 8; ++d) dataset.feature_portfolio.push_back("f" + std::to_string(d));
    dataset.X = Eigen::MatrixXd::Zero(12, 8);
    dataset.y.resize(12);
    const double angles[3] = {0.70, 0.785, 0.87};  // radians, ~5 degrees apart
    int row = 0;
    for (int c = 1; c <= 4; ++c) {
        const int block = 2 * ((c == 1 ? 2 : c) - 1);  // class 1 shares class 2's block
        for (int i = 0; i < 3; ++i) {
            dataset.X(row, block) = std::cos(angles[i]);
            dataset.X(row, block + 1) = std::sin(angles[i]);
            dataset.class_ids.push_back(c);
            dataset.instance_ids.push_back(i);
            if (c <= 2) {
                dataset.y[row] = 2.0;
            } else {
                dataset.y[row] = 5.0 + row * 0.25;
            }
            ++row;
        }
    }
    return dataset;
}

}  // namespace

TEST_CASE("make_dataset joins features and targets on instance keys") {
    const std::vector<std::string> names{"a", "b"};
    std::vector<FeatureVector> features{make_fv(2, 0, names, {1.0, 2.0}),
                                        make_fv(1, 0, names, {3.0, 4.0})};
    std::vector<PerformanceRecord> records{make_record(1, 0, -2.0), make_record(2, 0, 1.0)};
    const Dataset dataset = make_dataset(features, records, names);
    REQUIRE(dataset.size() == 2);
    CHECK(dataset.class_ids == std::vector<int>{1, 2});  // canonical order
    CHECK(dataset.y[0] == -2.0);
    CHECK(dataset.y[1] == 1.0);
    CHECK(dataset.X(0, 0) == 3.0);
}

TEST_CASE("make_dataset reports the instance-set symmetric difference") {
    const std::vector<std::string> names{"a"};
    std::vector<FeatureVector> features{make_fv(1, 0, names, {1.0}),
                                        make_fv(2, 0, names, {2.0})};
    std::vector<PerformanceRecord> records{make_record(1, 0, 0.0), make_record(3, 0, 0.0)};
    CHECK_THROWS_WITH_AS((void)make_dataset(features, records, names),
                         doctest::Contains("(2,0)"), std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)make_dataset(features, records, names),
                         doctest::Contains("(3,0)"), std::invalid_argument);

    std::vector<FeatureVector> duplicated{make_fv(1, 0, names, {1.0}),
                                          make_fv(1, 0, names, {1.5})};
    std::vector<PerformanceRecord> one{make_record(1, 0, 0.0)};
    CHECK_THROWS_AS((void)make_dataset(duplicated, one, names), std::invalid_argument);
}

TEST_CASE("restricted_to keeps rows and reorders columns") {
    const Dataset dataset = random_dataset(3, 2, 4, 7);
    const Dataset narrow = dataset.restricted_to({"f2", "f0"});
    CHECK(narrow.size() == dataset.size());
    CHECK(narrow.X.col(0) == dataset.X.col(2));
    CHECK(narrow.X.col(1) == dataset.X.col(0));
    CHECK_THROWS_AS((void)dataset.restricted_to({"nope"}), std::invalid_argument);
}

TEST_CASE("LOPO folds partition by class") {
    const Dataset dataset = random_dataset(12, 5, 4, 8);
    const auto folds = make_lopo_folds(dataset);
    REQUIRE(folds.size() == 12);
    for (const Fold& fold : folds) {
        CHECK(fold.train_rows.size() == 55);
        CHECK(fold.test_rows.size() == 5);
        std::set<int> train_classes;
        for (const int r : fold.train_rows) {
            train_classes.insert(dataset.class_ids[static_cast<std::size_t>(r)]);
        }
        CHECK(train_classes.count(fold.held_out_class) == 0);
        for (const int r : fold.test_rows) {
            CHECK(dataset.class_ids[static_cast<std::size_t>(r)] == fold.held_out_class);
        }
    }

    const Dataset singles = random_dataset(30, 1, 4, 9);
    const auto single_folds = make_lopo_folds(singles);
    REQUIRE(single_folds.size() == 30);
    CHECK(single_folds.front().train_rows.size() == 29);
    CHECK(single_folds.front().test_rows.size() == 1);

    CHECK_THROWS_AS((void)make_lopo_folds(random_dataset(1, 5, 4, 10)), std::invalid_argument);
}

TEST_CASE("mae is the mean absolute error") {
    CHECK(mae({0.0, 0.0, 0.0}) == 0.0);
    CHECK(mae({1.0, 3.0}) == 2.0);
    CHECK(mae({-1.0, 3.0}) == 2.0);
    CHECK_THROWS_AS((void)mae({}), std::invalid_argument);
}

TEST_CASE("a threshold above every similarity reproduces the RF errors bitwise") {
    const Dataset dataset = random_dataset(5, 3, 6, 11);
    const auto folds = make_lopo_folds(dataset);
    std::vector<SimilarityConfig> sims{{1.0 + 1e-9, Aggregation::kWeightedMean,
                                        Normalization::kMinMaxOnTrain}};
    RunFoldOptions options;
    options.seed = 21;
    options.compute_importance = false;
    std::vector<FoldReport> reports;
    for (const Fold& fold : folds) {
        reports.push_back(run_fold(dataset, fold, tiny_grid(), sims, options));
    }
    for (const FoldReport& report : reports) {
        const auto& clust = report.rfclust_abs_errors.at(1.0 + 1e-9);
        REQUIRE(clust.size() == report.rf_abs_errors.size());
        for (std::size_t i = 0; i < clust.size(); ++i) {
            CHECK(clust[i] == report.rf_abs_errors[i]);  // bitwise
            CHECK(report.neighbor_counts.at(1.0 + 1e-9)[i] == 0);
        }
    }
    const ComparisonSummary summary = compare(reports, 1.0 + 1e-9);
    CHECK(summary.n_equal == 5);
    CHECK(summary.n_better + summary.n_equal + summary.n_worse == 5);
}

TEST_CASE("a duplicated class with constant truth halves the fold errors") {
    const Dataset dataset = duplicated_class_dataset();
    const auto folds = make_lopo_folds(dataset);
    REQUIRE(folds[0].held_out_class == 1);

    // Deliberately weak model: one tree that cannot split (min_samples_split
    // exceeds the training set), so the raw prediction is a bagged mean far
    // from the duplicated class's truth.
    HyperGrid weak;
    weak.n_estimators = {1};
    weak.max_features = {MaxFeatures::kAll};
    weak.max_depth = {3};
    weak.min_samples_split = {99};
    std::vector<SimilarityConfig> sims{{0.9, Aggregation::kWeightedMean, Normalization::kNone}};
    RunFoldOptions options;
    options.seed = 5;
    options.compute_importance = false;
    const FoldReport report = run_fold(dataset, folds[0], weak, sims, options);

    const double rf_mae = mae(report.rf_abs_errors);
    const double clust_mae = mae(report.rfclust_abs_errors.at(0.9));
    REQUIRE(rf_mae > 0.0);
    CHECK(clust_mae == doctest::Approx(rf_mae / 2.0).epsilon(1e-12));
    // Every query found exactly the three duplicated-class rows.
    for (const QueryRecord& query : report.queries) {
        CHECK(query.neighbors.size() == 3);
        for (const int cls : query.neighbor_classes) CHECK(cls == 2);
    }
}

TEST_CASE("run_fold is deterministic in its seed") {
    const Dataset dataset = random_dataset(4, 2, 5, 13);
    const auto folds = make_lopo_folds(dataset);
    std::vector<SimilarityConfig> sims{{0.5, Aggregation::kWeightedMean,
                                        Normalization::kMinMaxOnTrain},
                                       {0.9, Aggregation::kWeightedMean,
                                        Normalization::kMinMaxOnTrain}};
    RunFoldOptions options;
    options.seed = 31;
    const FoldReport a = run_fold(dataset, folds[1], tiny_grid(), sims, options);
    const FoldReport b = run_fold(dataset, folds[1], tiny_grid(), sims, options);
    CHECK(a.rf_abs_errors == b.rf_abs_errors);
    CHECK(a.rfclust_abs_errors == b.rfclust_abs_errors);
    CHECK(a.neighbor_counts == b.neighbor_counts);
    CHECK(a.importances == b.importances);
}

TEST_CASE("neighbor retrieval never touches the held-out class") {
    const Dataset dataset = random_dataset(6, 2, 5, 14);
    std::vector<SimilarityConfig> sims{{-1.0, Aggregation::kMean,
                                        Normalization::kMinMaxOnTrain}};
    RunFoldOptions options;
    options.seed = 3;
    options.compute_importance = false;
    for (const Fold& fold : make_lopo_folds(dataset)) {
        const FoldReport report = run_fold(dataset, fold, tiny_grid(), sims, options);
        for (const QueryRecord& query : report.queries) {
            CHECK(!query.neighbor_classes.empty());  // threshold -1 matches everything
            for (const int cls : query.neighbor_classes) {
                CHECK(cls != fold.held_out_class);
            }
        }
    }
}

TEST_CASE("per-instance fallback consistency inside mixed folds") {
    // With min-max normalized features in [0,1]^d, some queries find
    // neighbors at 0.95 and others do not; wherever the count is zero the
    // errors must match bitwise.
    const Dataset dataset = random_dataset(8, 3, 4, 15);
    std::vector<SimilarityConfig> sims{{0.95, Aggregation::kWeightedMean,
                                        Normalization::kMinMaxOnTrain}};
    RunFoldOptions options;
    options.seed = 17;
    options.compute_importance = false;
    bool saw_fallback = false;
    bool saw_neighbors = false;
    for (const Fold& fold : make_lopo_folds(dataset)) {
        const FoldReport report = run_fold(dataset, fold, tiny_grid(), sims, options);
        const auto& counts = report.neighbor_counts.at(0.95);
        const auto& errors = report.rfclust_abs_errors.at(0.95);
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (counts[i] == 0) {
                saw_fallback = true;
                CHECK(errors[i] == report.rf_abs_errors[i]);
            } else {
                saw_neighbors = true;
            }
        }
    }
    CHECK(saw_fallback);
    CHECK(saw_neighbors);
}

TEST_CASE("comparison counts always sum to the class count") {
    const Dataset dataset = random_dataset(7, 2, 5, 16);
    std::vector<SimilarityConfig> sims;
    for (const double t : {0.5, 0.7, 0.9}) {
        sims.push_back({t, Aggregation::kWeightedMean, Normalization::kMinMaxOnTrain});
    }
    RunFoldOptions options;
    options.seed = 23;
    options.compute_importance = false;
    std::vector<FoldReport> reports;
    for (const Fold& fold : make_lopo_folds(dataset)) {
        reports.push_back(run_fold(dataset, fold, tiny_grid(), sims, options));
    }
    int previous_equal = -1;
    for (const double t : {0.5, 0.7, 0.9}) {
        const ComparisonSummary summary = compare(reports, t);
        CHECK(summary.n_better + summary.n_equal + summary.n_worse == 7);
        CHECK(summary.n_equal >= previous_equal);  // non-decreasing in threshold
        previous_equal = summary.n_equal;
    }
    CHECK_THROWS_AS((void)compare(reports, 0.123), std::invalid_argument);
}

TEST_CASE("similarity diagnostics pair the focus class with everything else") {
    Dataset dataset = random_dataset(4, 2, 3, 19);
    // Plant an exact duplicate of a focus-class row in another class.
    dataset.X.row(6) = dataset.X.row(0);  // class 4 instance 0 copies class 1 instance 0
    dataset.y[6] = dataset.y[0];          // and its performance

    SimilarityConfig config;
    config.normalize = Normalization::kNone;
    const auto rows = similarity_diagnostics(dataset, 1, config);
    CHECK(rows.size() == 2 * 6);  // 2 focus instances x 6 non-focus rows
    for (const DiagnosticsRow& row : rows) CHECK(row.other_class != 1);
    CHECK(std::is_sorted(rows.begin(), rows.end(),
                         [](const DiagnosticsRow& a, const DiagnosticsRow& b) {
                             return a.similarity > b.similarity;
                         }));
    // The planted duplicate shows up as similarity 1 with a zero gap.
    CHECK(rows.front().similarity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rows.front().other_class == 4);
    CHECK(rows.front().performance_gap == 0.0);

    CHECK_THROWS_AS((void)similarity_diagnostics(dataset, 99, config), std::invalid_argument);
}
