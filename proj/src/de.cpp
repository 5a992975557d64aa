#include "rfclust/de.hpp"

#include <algorithm>
#include <stdexcept>

#include "rfclust/parallel.hpp"
#include "rfclust/rng.hpp"

namespace rfclust {

namespace {

// Draws `count` indices from [0, population_size), mutually distinct and
// avoiding everything already in `taken`.
std::vector<int> draw_distinct(std::mt19937_64& rng, int population_size, int count,
                               std::vector<int>& taken) {
    std::vector<int> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        int idx = 0;
        do {
            idx = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(population_size)));
        } while (std::find(taken.begin(), taken.end(), idx) != taken.end());
        taken.push_back(idx);
        out.push_back(idx);
    }
    return out;
}

Eigen::VectorXd sum_of_difference_pairs(const Eigen::Ref<const Eigen::MatrixXd>& population,
                                        const std::vector<int>& donors) {
    Eigen::VectorXd diff = Eigen::VectorXd::Zero(population.cols());
    for (std::size_t i = 0; i + 1 < donors.size(); i += 2) {
        diff += population.row(donors[i]) - population.row(donors[i + 1]);
    }
    return diff;
}

}  // namespace

DEStrategy parse_strategy(const std::string& name) {
    if (name == "best1bin" || name == "Best/1/Bin") return DEStrategy::kBest1Bin;
    if (name == "best3bin" || name == "Best/3/Bin") return DEStrategy::kBest3Bin;
    if (name == "randrandbin" || name == "Rand/Rand/Bin") return DEStrategy::kRandRandBin;
    throw std::invalid_argument("unknown DE strategy: '" + name + "'");
}

std::string strategy_name(DEStrategy strategy) {
    switch (strategy) {
        case DEStrategy::kBest1Bin: return "best1bin";
        case DEStrategy::kBest3Bin: return "best3bin";
        case DEStrategy::kRandRandBin: return "randrandbin";
    }
    return "?";
}

std::vector<DEConfig> default_de_configs(int dimension, int budget_factor, int runs,
                                         std::uint64_t seed) {
    DEConfig de1{"de1", DEStrategy::kBest3Bin, 0.533, 0.809, dimension,
                 budget_factor * dimension, runs, seed};
    DEConfig de2{"de2", DEStrategy::kBest1Bin, 0.617, 0.514, dimension,
                 budget_factor * dimension, runs, seed};
    DEConfig de3{"de3", DEStrategy::kRandRandBin, 0.516, 0.686, dimension,
                 budget_factor * dimension, runs, seed};
    return {de1, de2, de3};
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double log10_clamped(double value, double floor) {
    return std::log10(std::max(value, floor));
}

Eigen::VectorXd mutate(DEStrategy strategy, const Eigen::Ref<const Eigen::MatrixXd>& population,
                       int target_index, int best_index, double scale_factor,
                       std::mt19937_64& rng) {
    const int np = static_cast<int>(population.rows());
    std::vector<int> taken{target_index};
    switch (strategy) {
        case DEStrategy::kBest1Bin: {
            if (np < 3) throw std::invalid_argument("best1bin needs a population of at least 3");
            const auto donors = draw_distinct(rng, np, 2, taken);
            return population.row(best_index).transpose() +
                   scale_factor * sum_of_difference_pairs(population, donors);
        }
        case DEStrategy::kBest3Bin: {
            if (np < 7) throw std::invalid_argument("best3bin needs a population of at least 7");
            const auto donors = draw_distinct(rng, np, 6, taken);
            return population.row(best_index).transpose() +
                   scale_factor * sum_of_difference_pairs(population, donors);
        }
        case DEStrategy::kRandRandBin: {
            if (np < 2) throw std::invalid_argument("randrandbin needs a population of at least 2");
            const auto base = draw_distinct(rng, np, 1, taken);
            const int pairs = 1 + static_cast<int>(uniform_index(rng, 3));
            if (np < 2 * pairs + 2) {
                throw std::invalid_argument("randrandbin: population too small for " +
                                            std::to_string(pairs) + " difference pairs");
            }
            const auto donors = draw_distinct(rng, np, 2 * pairs, taken);
            return population.row(base[0]).transpose() +
                   scale_factor * sum_of_difference_pairs(population, donors);
        }
    }
    throw std::invalid_argument("unknown DE strategy");
}

Eigen::VectorXd crossover_binomial(const Eigen::Ref<const Eigen::VectorXd>& target,
                                   const Eigen::Ref<const Eigen::VectorXd>& mutant,
                                   double crossover_rate, std::mt19937_64& rng) {
    if (target.size() != mutant.size()) {
        throw std::invalid_argument("crossover: vector dimensions differ");
    }
    const int dim = static_cast<int>(target.size());
    const int j_rand = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(dim)));
    Eigen::VectorXd trial(dim);
    for (int j = 0; j < dim; ++j) {
        const double u = uniform01(rng);  // drawn for every coordinate; fixed stream shape
        trial[j] = (j == j_rand || u < crossover_rate) ? mutant[j] : target[j];
    }
    return trial;
}

DERunResult de_run_traced(const DEConfig& config, ProblemInstance& instance, int run_index) {
    const int np = config.population_size;
    const int dim = instance.dimension();
    if (np < 4) throw std::invalid_argument("population_size must be at least 4");
    if (config.budget < np) {
        throw std::invalid_argument("budget must cover the initial population");
    }
    auto rng = make_rng(stream_key(config.seed, RngStage::kDeRun,
                                   static_cast<std::uint64_t>(instance.problem.class_id),
                                   static_cast<std::uint64_t>(instance.instance_id),
                                   static_cast<std::uint64_t>(run_index)));
    const Eigen::VectorXd& lower = instance.problem.lower_bounds;
    const Eigen::VectorXd& upper = instance.problem.upper_bounds;

    DERunResult result;
    result.trajectory.reserve(config.budget);

    Eigen::MatrixXd population(np, dim);
    Eigen::VectorXd fitness(np);
    double best_f = 0.0;
    int best_index = 0;
    for (int i = 0; i < np; ++i) {
        for (int j = 0; j < dim; ++j) {
            population(i, j) = uniform_real(rng, lower[j], upper[j]);
        }
        fitness[i] = evaluate(instance, population.row(i));
        if (i == 0 || fitness[i] < best_f) {
            best_f = fitness[i];
            best_index = i;
        }
        result.trajectory.push_back(precision(instance, best_f));
    }

    int evals = np;
    while (evals < config.budget) {
        for (int target = 0; target < np && evals < config.budget; ++target) {
            const Eigen::VectorXd mutant = mutate(config.strategy, population, target, best_index,
                                                  config.scale_factor, rng);
            Eigen::VectorXd trial =
                crossover_binomial(population.row(target), mutant, config.crossover_rate, rng);
            trial = trial.cwiseMax(lower).cwiseMin(upper);
            const double f_trial = evaluate(instance, trial);
            ++evals;
            if (f_trial <= fitness[target]) {  // greedy one-to-one, ties replace
                population.row(target) = trial;
                fitness[target] = f_trial;
                if (f_trial < best_f) {
                    best_f = f_trial;
                    best_index = target;
                }
            }
            result.trajectory.push_back(precision(instance, best_f));
        }
    }
    result.best_precision = precision(instance, best_f);
    return result;
}

double de_run(const DEConfig& config, ProblemInstance& instance, int run_index) {
    return de_run_traced(config, instance, run_index).best_precision;
}

std::vector<PerformanceRecord> collect_performance(const DEConfig& config,
                                                   const std::vector<ProblemInstance>& instances,
                                                   int jobs) {
    std::vector<PerformanceRecord> records(instances.size());
    parallel_for(instances.size(), jobs, [&](std::size_t i) {
        PerformanceRecord record;
        record.algorithm_id = config.algorithm_id;
        record.suite = instances[i].problem.suite;
        record.class_id = instances[i].problem.class_id;
        record.instance_id = instances[i].instance_id;
        record.run_precisions.resize(config.runs);
        for (int run = 0; run < config.runs; ++run) {
            ProblemInstance scratch = instances[i];  // private counter per run
            record.run_precisions[run] = de_run(config, scratch, run);
        }
        record.median_precision = median(record.run_precisions);
        record.log_median_precision = log10_clamped(record.median_precision);
        records[i] = std::move(record);
    });
    return records;
}

}  // namespace rfclust
