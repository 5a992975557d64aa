#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rfclust/benchmark.hpp"

namespace rfclust {

enum class DEStrategy { kBest1Bin, kBest3Bin, kRandRandBin };

DEStrategy parse_strategy(const std::string& name);
std::string strategy_name(DEStrategy strategy);

struct DEConfig {
    std::string algorithm_id;
    DEStrategy strategy = DEStrategy::kBest1Bin;
    double scale_factor = 0.5;    // F
    double crossover_rate = 0.9;  // Cr
    int population_size = 10;
    int budget = 5000;  // function evaluations per run
    int runs = 30;
    std::uint64_t seed = 0;
};

// The three configurations the experiments use by default. population_size
// is set to the problem dimension and budget to budget_factor * dimension.
std::vector<DEConfig> default_de_configs(int dimension, int budget_factor, int runs,
                                         std::uint64_t seed);

struct PerformanceRecord {
    std::string algorithm_id;
    std::string suite;
    int class_id = 0;
    int instance_id = 0;
    std::vector<double> run_precisions;  // ordered by run_index
    double median_precision = 0.0;
    double log_median_precision = 0.0;
};

// Exact sample median: mean of the two middle order statistics for even n.
double median(std::vector<double> values);

// log10 with the argument clamped below at `floor`, so a precision of zero
// maps to log10(1e-12) = -12.
double log10_clamped(double value, double floor = 1e-12);

// Donor mutation. Donor indices are drawn mutually distinct and distinct
// from target_index; throws std::invalid_argument when the population is
// too small for the requested number of difference pairs.
Eigen::VectorXd mutate(DEStrategy strategy, const Eigen::Ref<const Eigen::MatrixXd>& population,
                       int target_index, int best_index, double scale_factor,
                       std::mt19937_64& rng);

// Binomial crossover: each coordinate comes from the mutant with probability
// crossover_rate; coordinate j_rand always does.
Eigen::VectorXd crossover_binomial(const Eigen::Ref<const Eigen::VectorXd>& target,
                                   const Eigen::Ref<const Eigen::VectorXd>& mutant,
                                   double crossover_rate, std::mt19937_64& rng);

struct DERunResult {
    double best_precision = 0.0;
    // Best-so-far precision after each evaluation; exactly `budget` entries.
    std::vector<double> trajectory;
};

// One fixed-budget run. Deterministic in (config.seed, class_id,
// instance_id, run_index); spends exactly config.budget evaluations.
// Out-of-bounds trial coordinates are clamped to the boundary.
double de_run(const DEConfig& config, ProblemInstance& instance, int run_index);

DERunResult de_run_traced(const DEConfig& config, ProblemInstance& instance, int run_index);

// One record per instance, `config.runs` independent runs each. Results are
// independent of worker scheduling.
std::vector<PerformanceRecord> collect_performance(const DEConfig& config,
                                                   const std::vector<ProblemInstance>& instances,
                                                   int jobs = 1);

}  // namespace rfclust
