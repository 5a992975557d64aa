#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <set>

#include "rfclust/rng.hpp"
#include "rfclust/similarity.hpp"

using namespace rfclust;

namespace {

NeighborSet make_set(std::initializer_list<std::pair<double, double>> sim_perf) {
    NeighborSet set;
    int index = 0;
    for (const auto& [s, p] : sim_perf) set.entries.push_back({index++, s, p});
    return set;
}

}  // namespace

TEST_CASE("cosine similarity basics") {
    const Eigen::Vector3d a(1.0, 2.0, 3.0);
    CHECK(cosine_similarity(a, a) == 1.0);
    CHECK(cosine_similarity(a, 42.0 * a) == 1.0);  // scale invariance

    const Eigen::Vector2d e1(1.0, 0.0);
    const Eigen::Vector2d e2(0.0, 1.0);
    CHECK(cosine_similarity(e1, e2) == 0.0);
    CHECK(cosine_similarity(e1, -e1) == -1.0);

    CHECK_THROWS_AS((void)cosine_similarity(e1, Eigen::Vector2d::Zero()), std::domain_error);
    CHECK_THROWS_AS((void)cosine_similarity(e1, Eigen::Vector3d::Ones()), std::invalid_argument);
}

TEST_CASE("min-max normalization follows the training statistics") {
    Eigen::MatrixXd train(2, 3);
    train << 0.0, 5.0, 7.0,
             10.0, 5.0, 9.0;
    Eigen::Vector3d query(5.0, 123.0, 20.0);
    const auto [train_norm, query_norm] = normalize_features(train, query);
    CHECK(query_norm[0] == 0.5);   // midpoint of {0, 10}
    CHECK(query_norm[1] == 0.5);   // constant training column
    CHECK(query_norm[2] == 1.0);   // clipped
    CHECK(train_norm(0, 0) == 0.0);
    CHECK(train_norm(1, 0) == 1.0);
    CHECK(train_norm(0, 1) == 0.5);
    CHECK(train_norm(1, 1) == 0.5);
}

TEST_CASE("neighbor retrieval respects the threshold boundary") {
    Eigen::MatrixXd train(3, 2);
    train << 1.0, 0.0,
             0.0, 1.0,
             1.0, 1.0;
    Eigen::Vector3d perf(10.0, 20.0, 30.0);
    SimilarityConfig config;
    config.normalize = Normalization::kNone;

    config.threshold = -1.0;
    CHECK(find_neighbors(Eigen::Vector2d(1.0, 0.2), train, perf, config).k() == 3);

    config.threshold = 1.0 + 1e-9;
    CHECK(find_neighbors(Eigen::Vector2d(1.0, 0.2), train, perf, config).k() == 0);

    // A query duplicating exactly one training vector at a 0.9999 threshold.
    config.threshold = 0.9999;
    const NeighborSet only = find_neighbors(Eigen::Vector2d(0.0, 1.0), train, perf, config);
    REQUIRE(only.k() == 1);
    CHECK(only.entries[0].train_index == 1);
    CHECK(only.entries[0].performance == 20.0);

    // Similarity exactly at the threshold is included ("greater or equal").
    const Eigen::Vector2d query(2.0, 1.0);
    const double boundary = cosine_similarity(query, train.row(2).transpose());
    config.threshold = boundary;
    const NeighborSet at = find_neighbors(query, train, perf, config);
    bool found = false;
    for (const Neighbor& n : at.entries) found = found || n.train_index == 2;
    CHECK(found);
}

TEST_CASE("neighbors come back sorted by similarity then index") {
    Eigen::MatrixXd train(4, 2);
    train << 1.0, 0.0,
             0.0, 1.0,
             2.0, 0.0,
             1.0, 1.0;
    Eigen::Vector4d perf(1.0, 2.0, 3.0, 4.0);
    SimilarityConfig config;
    config.normalize = Normalization::kNone;
    config.threshold = -1.0;
    const NeighborSet set = find_neighbors(Eigen::Vector2d(1.0, 0.0), train, perf, config);
    REQUIRE(set.k() == 4);
    CHECK(set.entries[0].train_index == 0);  // similarity 1 ties broken by index
    CHECK(set.entries[1].train_index == 2);
    CHECK(set.entries[2].train_index == 3);
    CHECK(set.entries[3].train_index == 1);
    CHECK(std::is_sorted(set.entries.begin(), set.entries.end(),
                         [](const Neighbor& a, const Neighbor& b) {
                             return a.similarity > b.similarity;
                         }));
}

TEST_CASE("aggregation follows the stated formulas") {
    const NeighborSet single = make_set({{0.8, 5.0}});
    CHECK(aggregate(single, Aggregation::kWeightedMean) == 5.0);
    CHECK(aggregate(single, Aggregation::kMean) == 5.0);
    CHECK(aggregate(single, Aggregation::kMedian) == 5.0);

    // (0*0.5 + 3*1.0) / 1.5 = 2.
    const NeighborSet pair = make_set({{1.0, 3.0}, {0.5, 0.0}});
    CHECK(aggregate(pair, Aggregation::kWeightedMean) == 2.0);
    CHECK(aggregate(pair, Aggregation::kMean) == 1.5);

    const NeighborSet trio = make_set({{0.9, 1.0}, {0.9, 2.0}, {0.9, 100.0}});
    CHECK(aggregate(trio, Aggregation::kMedian) == 2.0);

    CHECK_THROWS_AS((void)aggregate(NeighborSet{}, Aggregation::kMean), std::logic_error);
}

TEST_CASE("weighted mean with equal similarities is the mean") {
    auto rng = make_rng(40);
    for (int trial = 0; trial < 50; ++trial) {
        NeighborSet set;
        const int k = 1 + static_cast<int>(uniform_index(rng, 6));
        const double s = uniform_real(rng, 0.1, 1.0);
        for (int i = 0; i < k; ++i) set.entries.push_back({i, s, uniform_real(rng, -5.0, 5.0)});
        CHECK(aggregate(set, Aggregation::kWeightedMean) ==
              doctest::Approx(aggregate(set, Aggregation::kMean)).epsilon(1e-12));
    }
}

TEST_CASE("calibration is the exact midpoint formula with a fallback") {
    const CalibratedPrediction fallback = calibrate(2.0, NeighborSet{}, Aggregation::kMean);
    CHECK(fallback.final_value == 2.0);
    CHECK(fallback.neighbor_count == 0);
    CHECK(!fallback.aggregated_neighbor_value);

    // Composes the weighted-mean example: (1.0 + 2.0) / 2 = 1.5.
    const NeighborSet pair = make_set({{1.0, 3.0}, {0.5, 0.0}});
    const CalibratedPrediction composed = calibrate(1.0, pair, Aggregation::kWeightedMean);
    CHECK(composed.final_value == 1.5);
    CHECK(*composed.aggregated_neighbor_value == 2.0);
    CHECK(composed.neighbor_count == 2);
}

TEST_CASE("error halving when all neighbors share the truth") {
    auto rng = make_rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const double truth = uniform_real(rng, -10.0, 10.0);
        const double raw = uniform_real(rng, -10.0, 10.0);
        NeighborSet set;
        const int k = 1 + static_cast<int>(uniform_index(rng, 8));
        for (int i = 0; i < k; ++i) {
            set.entries.push_back({i, uniform_real(rng, 0.5, 1.0), truth});
        }
        const CalibratedPrediction calibrated = calibrate(raw, set, Aggregation::kWeightedMean);
        CHECK(std::abs(std::abs(calibrated.final_value - truth) -
                       std::abs(raw - truth) / 2.0) < 1e-12);
    }
}

TEST_CASE("calibration lands between the raw prediction and the aggregate") {
    auto rng = make_rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        NeighborSet set;
        const int k = 1 + static_cast<int>(uniform_index(rng, 5));
        for (int i = 0; i < k; ++i) {
            set.entries.push_back({i, uniform_real(rng, 0.0, 1.0),
                                   uniform_real(rng, -4.0, 4.0)});
        }
        const double raw = uniform_real(rng, -4.0, 4.0);
        const CalibratedPrediction c = calibrate(raw, set, Aggregation::kMedian);
        const double lo = std::min(raw, *c.aggregated_neighbor_value);
        const double hi = std::max(raw, *c.aggregated_neighbor_value);
        CHECK(c.final_value >= lo);
        CHECK(c.final_value <= hi);
    }
}

TEST_CASE("threshold monotonicity: tighter thresholds give subsets") {
    auto rng = make_rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 12;
        Eigen::MatrixXd train(n, 4);
        Eigen::VectorXd perf(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < 4; ++j) train(i, j) = uniform_real(rng, 0.0, 1.0);
            perf[i] = uniform_real(rng, -2.0, 2.0);
        }
        Eigen::VectorXd query(4);
        for (int j = 0; j < 4; ++j) query[j] = uniform_real(rng, 0.0, 1.0);

        SimilarityConfig config;
        std::vector<std::set<int>> sets;
        for (const double threshold : {0.9, 0.7, 0.5}) {
            config.threshold = threshold;
            const NeighborSet found = find_neighbors(query, train, perf, config);
            std::set<int> ids;
            for (const Neighbor& neighbor : found.entries) ids.insert(neighbor.train_index);
            sets.push_back(std::move(ids));
        }
        for (std::size_t tight = 0; tight + 1 < sets.size(); ++tight) {
            for (const int id : sets[tight]) CHECK(sets[tight + 1].count(id) == 1);
        }
    }
}

TEST_CASE("cosine scale invariance propagates to whole neighbor sets") {
    auto rng = make_rng(44);
    Eigen::MatrixXd train(8, 3);
    Eigen::VectorXd perf(8);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 3; ++j) train(i, j) = uniform_real(rng, 0.1, 1.0);
        perf[i] = uniform_real(rng, 0.0, 1.0);
    }
    Eigen::Vector3d query(0.4, 0.6, 0.9);
    SimilarityConfig config;
    config.normalize = Normalization::kNone;
    config.threshold = 0.95;
    const NeighborSet base = find_neighbors(query, train, perf, config);
    const NeighborSet scaled = find_neighbors(7.5 * query, train, perf, config);
    REQUIRE(base.k() == scaled.k());
    for (int i = 0; i < base.k(); ++i) {
        CHECK(base.entries[static_cast<std::size_t>(i)].train_index ==
              scaled.entries[static_cast<std::size_t>(i)].train_index);
        CHECK(base.entries[static_cast<std::size_t>(i)].similarity ==
              doctest::Approx(scaled.entries[static_cast<std::size_t>(i)].similarity)
                  .epsilon(1e-12));
    }
    const double base_final =
        calibrate(1.0, base, Aggregation::kWeightedMean).final_value;
    const double scaled_final =
        calibrate(1.0, scaled, Aggregation::kWeightedMean).final_value;
    CHECK(base_final == doctest::Approx(scaled_final).epsilon(1e-12));
}

TEST_CASE("calibration algebra holds over randomized cases") {
    auto rng = make_rng(45);
    for (int trial = 0; trial < 500; ++trial) {
        const double raw = uniform_real(rng, -20.0, 20.0);
        NeighborSet set;
        const int k = static_cast<int>(uniform_index(rng, 10));
        for (int i = 0; i < k; ++i) {
            set.entries.push_back({i, uniform_real(rng, 0.3, 1.0),
                                   uniform_real(rng, -20.0, 20.0)});
        }
        const CalibratedPrediction c = calibrate(raw, set, Aggregation::kWeightedMean);
        if (k == 0) {
            CHECK(c.final_value == raw);
        } else {
            const double aggregated = aggregate(set, Aggregation::kWeightedMean);
            CHECK(std::abs(c.final_value - (raw + aggregated) / 2.0) < 1e-12);
        }
    }
}
