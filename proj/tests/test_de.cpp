#include <doctest.h>

#include <algorithm>

#include "rfclust/de.hpp"
#include "rfclust/rng.hpp"

using namespace rfclust;

namespace {

ProblemInstance sphere_instance(int dim) {
    return make_instance(suite_catalog("classic12-single", dim).classes[0], 0, 1);
}

Eigen::MatrixXd constant_population(int np, int dim, double value) {
    return Eigen::MatrixXd::Constant(np, dim, value);
}

}  // namespace

TEST_CASE("median is the mean of the two middle order statistics") {
    CHECK(median({1.0, 2.0, 3.0, 4.0}) == 2.5);
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({7.0}) == 7.0);
    CHECK_THROWS_AS((void)median({}), std::invalid_argument);
}

TEST_CASE("log clamp maps zero precision to -12") {
    CHECK(log10_clamped(0.0) == -12.0);
    CHECK(log10_clamped(100.0) == 2.0);
}

TEST_CASE("mutation with F = 0 returns the base vector") {
    auto rng = make_rng(3);
    Eigen::MatrixXd population(8, 4);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 4; ++j) population(i, j) = uniform_real(rng, -5.0, 5.0);
    }
    const Eigen::VectorXd best1 = mutate(DEStrategy::kBest1Bin, population, 2, 5, 0.0, rng);
    CHECK(best1 == population.row(5).transpose());
    const Eigen::VectorXd best3 = mutate(DEStrategy::kBest3Bin, population, 2, 5, 0.0, rng);
    CHECK(best3 == population.row(5).transpose());
}

TEST_CASE("best strategies reduce to the definition with forced donors") {
    // Population of 3: target 0, so the two donors must be {1, 2} in some order.
    auto rng = make_rng(11);
    Eigen::MatrixXd population(3, 2);
    population << 0.0, 0.0, 1.0, 2.0, 3.0, 5.0;
    const Eigen::VectorXd mutant = mutate(DEStrategy::kBest1Bin, population, 0, 0, 0.5, rng);
    const Eigen::VectorXd option_a =
        population.row(0).transpose() + 0.5 * (population.row(1) - population.row(2)).transpose();
    const Eigen::VectorXd option_b =
        population.row(0).transpose() + 0.5 * (population.row(2) - population.row(1)).transpose();
    CHECK((mutant == option_a || mutant == option_b));
}

TEST_CASE("all-equal populations mutate to themselves under best3bin") {
    auto rng = make_rng(4);
    const Eigen::MatrixXd population = constant_population(9, 3, 1.5);
    const Eigen::VectorXd mutant = mutate(DEStrategy::kBest3Bin, population, 1, 0, 0.7, rng);
    CHECK(mutant == population.row(0).transpose());
}

TEST_CASE("mutation rejects too-small populations") {
    auto rng = make_rng(4);
    const Eigen::MatrixXd population = constant_population(5, 3, 0.0);
    CHECK_THROWS_AS((void)mutate(DEStrategy::kBest3Bin, population, 0, 0, 0.5, rng),
                    std::invalid_argument);
}

TEST_CASE("binomial crossover endpoints") {
    auto rng = make_rng(12);
    const Eigen::VectorXd target = Eigen::VectorXd::Zero(6);
    const Eigen::VectorXd mutant = Eigen::VectorXd::Ones(6);

    const Eigen::VectorXd all_mutant = crossover_binomial(target, mutant, 1.0, rng);
    CHECK(all_mutant == mutant);

    const Eigen::VectorXd only_jrand = crossover_binomial(target, mutant, 0.0, rng);
    CHECK(only_jrand.sum() == 1.0);  // exactly one coordinate from the mutant

    const Eigen::VectorXd one_dim_target = Eigen::VectorXd::Zero(1);
    const Eigen::VectorXd one_dim_mutant = Eigen::VectorXd::Ones(1);
    CHECK(crossover_binomial(one_dim_target, one_dim_mutant, 0.0, rng) == one_dim_mutant);
}

TEST_CASE("de_run spends exactly the budget and is deterministic") {
    DEConfig config{"de1", DEStrategy::kBest3Bin, 0.533, 0.809, 10, 700, 3, 5};
    ProblemInstance sphere = sphere_instance(10);
    const double first = de_run(config, sphere, 0);
    CHECK(sphere.evaluation_counter == 700);

    ProblemInstance again = sphere_instance(10);
    CHECK(de_run(config, again, 0) == first);

    ProblemInstance other_run = sphere_instance(10);
    CHECK(de_run(config, other_run, 1) != first);
}

TEST_CASE("best-so-far trajectory is non-increasing") {
    DEConfig config{"de2", DEStrategy::kBest1Bin, 0.617, 0.514, 10, 600, 1, 9};
    ProblemInstance sphere = sphere_instance(10);
    const DERunResult result = de_run_traced(config, sphere, 0);
    REQUIRE(result.trajectory.size() == 600);
    CHECK(std::is_sorted(result.trajectory.rbegin(), result.trajectory.rend()));
    CHECK(result.best_precision == result.trajectory.back());
}

TEST_CASE("degenerate F = 0, Cr = 0 still runs to budget") {
    DEConfig config{"weird", DEStrategy::kBest1Bin, 0.0, 0.0, 8, 200, 1, 2};
    ProblemInstance sphere = sphere_instance(6);
    const DERunResult result = de_run_traced(config, sphere, 0);
    CHECK(sphere.evaluation_counter == 200);
    CHECK(std::is_sorted(result.trajectory.rbegin(), result.trajectory.rend()));
}

TEST_CASE("budget below the population size is rejected") {
    DEConfig config{"de1", DEStrategy::kBest1Bin, 0.5, 0.9, 10, 5, 1, 1};
    ProblemInstance sphere = sphere_instance(10);
    CHECK_THROWS_AS((void)de_run(config, sphere, 0), std::invalid_argument);

    DEConfig tiny{"de1", DEStrategy::kBest1Bin, 0.5, 0.9, 3, 100, 1, 1};
    CHECK_THROWS_AS((void)de_run(tiny, sphere, 0), std::invalid_argument);
}

TEST_CASE("randrandbin draws one to three difference pairs") {
    DEConfig config{"de3", DEStrategy::kRandRandBin, 0.516, 0.686, 10, 400, 2, 3};
    ProblemInstance sphere = sphere_instance(10);
    CHECK(de_run(config, sphere, 0) >= 0.0);
}

TEST_CASE("collect_performance aggregates runs per instance") {
    DEConfig config{"de1", DEStrategy::kBest1Bin, 0.617, 0.514, 8, 180, 4, 21};
    const SuiteSpec suite = suite_catalog("classic12-single", 8);
    std::vector<ProblemInstance> instances{make_instance(suite.classes[0], 0, 21),
                                           make_instance(suite.classes[3], 0, 21)};
    const auto records = collect_performance(config, instances, 1);
    REQUIRE(records.size() == 2);
    for (const PerformanceRecord& record : records) {
        REQUIRE(record.run_precisions.size() == 4);
        CHECK(record.median_precision == median(record.run_precisions));
        CHECK(record.log_median_precision == log10_clamped(record.median_precision));
        // Permuting run order cannot change the median.
        std::vector<double> shuffled = record.run_precisions;
        std::reverse(shuffled.begin(), shuffled.end());
        CHECK(median(shuffled) == record.median_precision);
    }
    // Scheduling independence: the same collection on two workers.
    const auto parallel = collect_performance(config, instances, 2);
    REQUIRE(parallel.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(parallel[i].run_precisions == records[i].run_precisions);
    }
}

TEST_CASE("single run median equals that run") {
    DEConfig config{"de1", DEStrategy::kBest1Bin, 0.617, 0.514, 8, 100, 1, 2};
    const SuiteSpec suite = suite_catalog("classic12-single", 8);
    std::vector<ProblemInstance> instances{make_instance(suite.classes[0], 0, 2)};
    const auto records = collect_performance(config, instances, 1);
    REQUIRE(records.size() == 1);
    CHECK(records[0].median_precision == records[0].run_precisions[0]);
}
