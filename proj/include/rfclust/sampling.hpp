#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>

namespace rfclust {

enum class Sampler { kLatinHypercube, kImprovedLatinHypercube };

Sampler parse_sampler(const std::string& name);

struct SampleDesign {
    int sample_size = 8000;  // 800 * D at the default dimension
    int repetitions = 30;
    Sampler sampler = Sampler::kImprovedLatinHypercube;
    std::uint64_t seed = 0;
};

// Latin hypercube design: per column, exactly one point in each of n equal
// strata, uniform within its stratum, strata assigned by an independent
// random permutation. The improved variant draws `candidates` such designs
// and keeps the one with the largest minimum pairwise distance.
Eigen::MatrixXd lhs_sample(int n, int dim, const Eigen::Ref<const Eigen::VectorXd>& lower,
                           const Eigen::Ref<const Eigen::VectorXd>& upper, Sampler sampler,
                           std::mt19937_64& rng, int candidates = 20);

double min_pairwise_distance(const Eigen::Ref<const Eigen::MatrixXd>& points);

}  // namespace rfclust
